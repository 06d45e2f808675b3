#include "smpred/model/trainer.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "smpred/common/error.hpp"
#include "smpred/common/version.hpp"
#include "smpred/io/container.hpp"

namespace smpred {

namespace {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc()) throw IoError("bad number in curve CSV: " + std::string(s));
  return v;
}

}  // namespace

nlohmann::json TrainConfig::to_json() const {
  return {{"max_epochs", max_epochs},
          {"loss_stop", loss_stop},
          {"batch_size", batch_size},
          {"lr_start", lr_start},
          {"lr_end", lr_end},
          {"decay_epochs", decay_epochs},
          {"eval_every", eval_every},
          {"seed", seed},
          {"divergence_limit", divergence_limit},
          {"record_wall_time", record_wall_time}};
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.max_epochs = j.value("max_epochs", c.max_epochs);
  c.loss_stop = j.value("loss_stop", c.loss_stop);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.lr_start = j.value("lr_start", c.lr_start);
  c.lr_end = j.value("lr_end", c.lr_end);
  c.decay_epochs = j.value("decay_epochs", c.decay_epochs);
  c.eval_every = j.value("eval_every", c.eval_every);
  c.seed = j.value("seed", c.seed);
  c.divergence_limit = j.value("divergence_limit", c.divergence_limit);
  c.record_wall_time = j.value("record_wall_time", c.record_wall_time);
  if (c.max_epochs < 1 || c.batch_size < 1 || c.eval_every < 1 || c.decay_epochs < 1)
    throw ConfigError("train config: counts must be positive");
  if (c.lr_start < c.lr_end) throw ConfigError("train config: lr_start must be >= lr_end");
  if (!(c.lr_end > 0.0)) throw ConfigError("train config: lr_end must be > 0");
  return c;
}

void write_curve_csv(const std::filesystem::path& path, const LearningCurve& curve) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "epoch,loss,q_p,q_h,lr,wall_time_s\n";
  for (const CurveRow& row : curve) {
    out << row.epoch << ',' << format_double(row.loss) << ',' << format_double(row.q_p) << ','
        << format_double(row.q_h) << ',' << format_double(row.lr) << ','
        << format_double(row.wall_time_s) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

LearningCurve read_curve_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "epoch,loss,q_p,q_h,lr,wall_time_s")
    throw IoError("unexpected curve CSV header in " + path.string());
  LearningCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    CurveRow row;
    std::getline(ss, field, ',');
    row.epoch = std::stoll(field);
    std::getline(ss, field, ',');
    row.loss = parse_double(field);
    std::getline(ss, field, ',');
    row.q_p = parse_double(field);
    std::getline(ss, field, ',');
    row.q_h = parse_double(field);
    std::getline(ss, field, ',');
    row.lr = parse_double(field);
    std::getline(ss, field, ',');
    row.wall_time_s = parse_double(field);
    curve.push_back(row);
  }
  return curve;
}

TrainSession::TrainSession(PredictiveModel model, TrainConfig config, nlohmann::json provenance)
    : model_(std::move(model)),
      config_(config),
      provenance_(std::move(provenance)),
      adam_(model_.param_count()),
      rng_(config.seed) {}

TrainResult TrainSession::run(const Dataset& dataset, const EvalGrid& eval_grid,
                              const std::filesystem::path& checkpoint_path) {
  if (!dataset.normalized())
    throw ConfigError("train: dataset must be normalized");
  const LrSchedule schedule{config_.lr_start, config_.lr_end, config_.decay_epochs};
  const auto t0 = std::chrono::steady_clock::now();
  auto wall_seconds = [&]() -> double {
    if (!config_.record_wall_time) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  auto maybe_checkpoint = [&]() {
    if (!checkpoint_path.empty()) save_checkpoint(checkpoint_path);
  };

  Batch batch;
  double window_sum = 0.0;
  std::int64_t window_count = 0;

  while (!early_stopped_ && epoch_ < config_.max_epochs) {
    const double lr = schedule.at(epoch_);
    dataset.minibatch(rng_, config_.batch_size, batch.m_t, batch.s_t, batch.m_next,
                      batch.s_next);
    double loss;
    try {
      loss = model_.train_step(batch, adam_, lr);
    } catch (const DivergenceError& e) {
      throw DivergenceError(std::string(e.what()) + " at epoch " + std::to_string(epoch_ + 1) +
                            (checkpoint_path.empty()
                                 ? std::string()
                                 : "; last good checkpoint: " + checkpoint_path.string()));
    }
    if (loss > config_.divergence_limit)
      throw DivergenceError("training diverged: loss " + format_double(loss) +
                            " exceeds limit at epoch " + std::to_string(epoch_ + 1) +
                            (checkpoint_path.empty()
                                 ? std::string()
                                 : "; last good checkpoint: " + checkpoint_path.string()));
    ++epoch_;
    window_sum += loss;
    ++window_count;

    if (epoch_ % config_.eval_every == 0) {
      const EvalReport report = evaluate(model_, eval_grid);
      curve_.push_back({epoch_, window_sum / static_cast<double>(window_count),
                        report.dis.q_p, report.dis.q_h, lr, wall_seconds()});
      window_sum = 0.0;
      window_count = 0;
      maybe_checkpoint();
    }

    if (loss < config_.loss_stop) {
      early_stopped_ = true;
      // Freeze: evaluate once and repeat the final values on the remaining
      // snapshot grid so per-epoch statistics over trials stay defined.
      const EvalReport report = evaluate(model_, eval_grid);
      const double wall = wall_seconds();
      std::int64_t next = (epoch_ / config_.eval_every + 1) * config_.eval_every;
      if (!curve_.empty() && curve_.back().epoch == epoch_) {
        // stopped exactly on a snapshot; grid continues after it
        next = epoch_ + config_.eval_every;
      }
      const double lr_frozen = schedule.at(epoch_ - 1);
      for (; next <= config_.max_epochs; next += config_.eval_every)
        curve_.push_back({next, loss, report.dis.q_p, report.dis.q_h, lr_frozen, wall});
    }
  }

  maybe_checkpoint();
  return {epoch_, early_stopped_};
}

void TrainSession::save_checkpoint(const std::filesystem::path& path) const {
  nlohmann::json header;
  header["schema"] = "smpred.checkpoint";
  header["version"] = kCheckpointSchemaVersion;
  header["model"] = {{"motor_dim", model_.config().motor_dim},
                     {"sensory_dim", model_.config().sensory_dim},
                     {"dim_h", model_.config().dim_h},
                     {"activation", to_string(model_.config().hidden_activation)}};
  header["train"] = config_.to_json();
  header["epoch"] = epoch_;
  header["early_stopped"] = early_stopped_;
  const Rng::State rs = rng_.state();
  header["rng"] = {{"seed", rs.seed},
                   {"s", rs.s},
                   {"has_spare", rs.has_spare},
                   {"spare", rs.spare}};
  header["adam"] = {{"beta1", adam_.beta1},
                    {"beta2", adam_.beta2},
                    {"epsilon", adam_.epsilon},
                    {"step_count", adam_.step_count}};
  nlohmann::json curve = nlohmann::json::array();
  for (const CurveRow& row : curve_)
    curve.push_back({row.epoch, row.loss, row.q_p, row.q_h, row.lr, row.wall_time_s});
  header["curve"] = std::move(curve);
  header["provenance"] = provenance_;

  const std::size_t n = model_.param_count();
  std::vector<double> payload(3 * n);
  model_.flatten_params(std::span(payload).subspan(0, n));
  std::copy(adam_.first_moment.begin(), adam_.first_moment.end(), payload.begin() + n);
  std::copy(adam_.second_moment.begin(), adam_.second_moment.end(), payload.begin() + 2 * n);

  const std::filesystem::path tmp = path.string() + ".tmp";
  write_container(tmp, header, payload);
  std::filesystem::rename(tmp, path);
}

TrainSession TrainSession::load_checkpoint(const std::filesystem::path& path) {
  const Container c = read_container(path);
  if (c.header.value("schema", "") != "smpred.checkpoint")
    throw IoError("not a checkpoint file: " + path.string());
  if (c.header.value("version", -1) != kCheckpointSchemaVersion)
    throw IoError("unsupported checkpoint schema version in " + path.string());

  const auto& mj = c.header.at("model");
  ModelConfig mc;
  mc.motor_dim = mj.at("motor_dim").get<std::size_t>();
  mc.sensory_dim = mj.at("sensory_dim").get<std::size_t>();
  mc.dim_h = mj.at("dim_h").get<std::size_t>();
  mc.hidden_activation = activation_from_string(mj.at("activation").get<std::string>());

  // Architecture is fixed given the config; rebuild and overwrite parameters.
  Rng scratch(0);
  PredictiveModel model = PredictiveModel::create(mc, scratch);
  const std::size_t n = model.param_count();
  if (c.payload.size() != 3 * n)
    throw IoError("checkpoint payload size mismatch in " + path.string());
  model.unflatten_params(std::span<const double>(c.payload).subspan(0, n));

  TrainSession session(std::move(model), TrainConfig::from_json(c.header.at("train")),
                       c.header.value("provenance", nlohmann::json()));
  session.adam_ = AdamState(n);
  const auto& aj = c.header.at("adam");
  session.adam_.beta1 = aj.at("beta1").get<double>();
  session.adam_.beta2 = aj.at("beta2").get<double>();
  session.adam_.epsilon = aj.at("epsilon").get<double>();
  session.adam_.step_count = aj.at("step_count").get<std::int64_t>();
  std::copy(c.payload.begin() + n, c.payload.begin() + 2 * n,
            session.adam_.first_moment.begin());
  std::copy(c.payload.begin() + 2 * n, c.payload.end(), session.adam_.second_moment.begin());

  const auto& rj = c.header.at("rng");
  Rng::State rs;
  rs.seed = rj.at("seed").get<std::uint64_t>();
  rs.s = rj.at("s").get<std::array<std::uint64_t, 4>>();
  rs.has_spare = rj.at("has_spare").get<bool>();
  rs.spare = rj.at("spare").get<double>();
  session.rng_ = Rng::from_state(rs);

  session.epoch_ = c.header.at("epoch").get<std::int64_t>();
  session.early_stopped_ = c.header.at("early_stopped").get<bool>();
  for (const auto& row : c.header.at("curve"))
    session.curve_.push_back({row[0].get<std::int64_t>(), row[1].get<double>(),
                              row[2].get<double>(), row[3].get<double>(), row[4].get<double>(),
                              row[5].get<double>()});
  return session;
}

}  // namespace smpred
