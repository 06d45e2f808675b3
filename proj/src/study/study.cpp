#include "smpred/study/study.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <thread>

#include "smpred/common/error.hpp"
#include "smpred/common/version.hpp"
#include "smpred/plot/svg.hpp"

namespace smpred {

namespace {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string regime_label(ExplorationKind kind) {
  switch (kind) {
    case ExplorationKind::kMtm:
      return "MTM";
    case ExplorationKind::kMm:
      return "MM";
    case ExplorationKind::kMmt:
      return "MMT";
  }
  return "?";
}

void write_json_file(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  nlohmann::json j;
  in >> j;
  return j;
}

double median(std::vector<double> values) {
  if (values.empty()) throw DegenerateError("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct TrialArtifacts {
  nlohmann::json clouds;
};

// Cloud JSONs per (regime, trial 0), kept in memory for plotting.
std::vector<std::array<double, 2>> json_points_2d(const nlohmann::json& rows, int xi, int yi) {
  std::vector<std::array<double, 2>> pts;
  for (const auto& row : rows) pts.push_back({row[xi].get<double>(), row[yi].get<double>()});
  return pts;
}

void render_cloud_figure(const fs::path& path, const nlohmann::json& clouds,
                         const std::string& regime) {
  std::vector<ScatterPanel> panels;

  ScatterPanel pos_panel(regime + ": position space");
  const auto p = json_points_2d(clouds.at("p"), 0, 1);
  const auto hp = json_points_2d(clouds.at("h_proj_p"), 0, 1);
  std::vector<double> px, py, hx, hy;
  for (const auto& pt : p) {
    px.push_back(pt[0]);
    py.push_back(pt[1]);
  }
  for (const auto& pt : hp) {
    hx.push_back(pt[0]);
    hy.push_back(pt[1]);
  }
  pos_panel.connect(px, py, hx, hy);
  pos_panel.add({px, py, "#1f77b4", false, 4.0, "p"});
  pos_panel.add({hx, hy, "#d62728", true, 2.5, "h proj p"});
  panels.push_back(std::move(pos_panel));

  const auto& h_rows = clouds.at("h");
  const std::size_t dim_h = h_rows.empty() ? 0 : h_rows.front().size();
  const std::size_t shown = std::min<std::size_t>(dim_h, 3);
  for (std::size_t i = 0; i < shown; ++i) {
    for (std::size_t j = i + 1; j < shown; ++j) {
      ScatterPanel panel("h[" + std::to_string(i) + "] vs h[" + std::to_string(j) + "]");
      const auto pts = json_points_2d(h_rows, static_cast<int>(i), static_cast<int>(j));
      std::vector<double> xs, ys;
      for (const auto& pt : pts) {
        xs.push_back(pt[0]);
        ys.push_back(pt[1]);
      }
      panel.add({xs, ys, "#d62728", true, 2.5, "h"});
      panels.push_back(std::move(panel));
    }
  }
  render_panels(path, panels);
}

void write_aggregate_csv(const fs::path& path, const RegimeAggregate& agg) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "epoch,loss_mean,loss_std,q_p_mean,q_p_std,q_h_mean,q_h_std\n";
  for (std::size_t i = 0; i < agg.epochs.size(); ++i) {
    out << agg.epochs[i] << ',' << format_double(agg.loss_mean[i]) << ','
        << format_double(agg.loss_std[i]) << ',' << format_double(agg.q_p_mean[i]) << ','
        << format_double(agg.q_p_std[i]) << ',' << format_double(agg.q_h_mean[i]) << ','
        << format_double(agg.q_h_std[i]) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

RegimeAggregate aggregate_regime(ExplorationKind kind,
                                 const std::vector<const TrialOutcome*>& trials) {
  RegimeAggregate agg;
  agg.exploration = kind;
  std::vector<const TrialOutcome*> ok_trials;
  for (const TrialOutcome* t : trials)
    if (t->ok) ok_trials.push_back(t);
  if (ok_trials.empty()) return agg;

  const std::size_t rows = ok_trials.front()->curve.size();
  for (const TrialOutcome* t : ok_trials)
    if (t->curve.size() != rows)
      throw Error("aggregate: trial curves have different snapshot grids");

  const double n = static_cast<double>(ok_trials.size());
  for (std::size_t i = 0; i < rows; ++i) {
    agg.epochs.push_back(ok_trials.front()->curve[i].epoch);
    auto stats = [&](auto getter, std::vector<double>& means, std::vector<double>& stds) {
      double mean = 0.0;
      for (const TrialOutcome* t : ok_trials) mean += getter(t->curve[i]);
      mean /= n;
      double var = 0.0;
      for (const TrialOutcome* t : ok_trials) {
        const double d = getter(t->curve[i]) - mean;
        var += d * d;
      }
      means.push_back(mean);
      stds.push_back(std::sqrt(var / n));
    };
    stats([](const CurveRow& r) { return r.loss; }, agg.loss_mean, agg.loss_std);
    stats([](const CurveRow& r) { return r.q_p; }, agg.q_p_mean, agg.q_p_std);
    stats([](const CurveRow& r) { return r.q_h; }, agg.q_h_mean, agg.q_h_std);
  }
  return agg;
}

void render_measure_chart(const fs::path& path, const std::string& measure,
                          const std::vector<RegimeAggregate>& aggregates) {
  LineChart chart("Evolution of " + measure + " during training", "epoch", measure,
                  /*log_y=*/true);
  for (const RegimeAggregate& agg : aggregates) {
    if (agg.epochs.empty()) continue;
    Series s;
    s.color = plot_color(agg.exploration);
    s.label = regime_label(agg.exploration);
    for (std::size_t i = 0; i < agg.epochs.size(); ++i) {
      s.x.push_back(static_cast<double>(agg.epochs[i]));
      const auto& [mean, std] = [&]() -> std::pair<const std::vector<double>&,
                                                   const std::vector<double>&> {
        if (measure == "loss") return {agg.loss_mean, agg.loss_std};
        if (measure == "q_p") return {agg.q_p_mean, agg.q_p_std};
        return {agg.q_h_mean, agg.q_h_std};
      }();
      s.y.push_back(mean[i]);
      s.band_lo.push_back(mean[i] - std[i]);
      s.band_hi.push_back(mean[i] + std[i]);
    }
    chart.add(std::move(s));
  }
  chart.render(path);
}

}  // namespace

std::string plot_color(ExplorationKind kind) {
  switch (kind) {
    case ExplorationKind::kMtm:
      return "#d62728";
    case ExplorationKind::kMm:
      return "#1f77b4";
    case ExplorationKind::kMmt:
      return "#2ca02c";
  }
  return "#333333";
}

std::vector<const TrialOutcome*> StudyResult::regime_outcomes(ExplorationKind kind) const {
  std::vector<const TrialOutcome*> out;
  for (const TrialOutcome& o : outcomes)
    if (o.exploration == kind) out.push_back(&o);
  return out;
}

double StudyResult::median_final_q_p(ExplorationKind kind) const {
  std::vector<double> values;
  for (const TrialOutcome* o : regime_outcomes(kind))
    if (o->ok) values.push_back(o->final_q_p);
  return median(std::move(values));
}

double StudyResult::median_final_loss(ExplorationKind kind) const {
  std::vector<double> values;
  for (const TrialOutcome* o : regime_outcomes(kind))
    if (o->ok) values.push_back(o->final_loss);
  return median(std::move(values));
}

TrialOutcome run_trial(const ExperimentConfig& config, ExplorationKind exploration,
                       int trial_index, const fs::path& trial_dir) {
  TrialOutcome outcome;
  outcome.exploration = exploration;
  outcome.trial_index = trial_index;
  outcome.seed = config.trial_seed(trial_index);

  const Rng root(outcome.seed);
  Rng scene_rng = root.split(0);
  Rng data_rng = root.split(1);
  Rng model_rng = root.split(2);

  const Environment env = Environment::create(config.setup, scene_rng);
  GenerateResult gen = generate(env, exploration, config.n_transitions, data_rng);
  gen.dataset.provenance.seed = outcome.seed;  // root trial seed, not the split
  gen.dataset.normalize();
  outcome.gen_stats = gen.stats;

  ModelConfig mc;
  mc.motor_dim = env.motor_dim();
  mc.sensory_dim = env.sensory_dim();
  mc.dim_h = config.dim_h;
  mc.hidden_activation = config.activation;
  PredictiveModel model = PredictiveModel::create(mc, model_rng);

  const EvalGrid grid = make_eval_grid(env, gen.dataset.norm());

  TrainConfig train_config = config.train;
  train_config.seed = root.split(3).seed();

  nlohmann::json provenance;
  provenance["setup"] = to_string(config.setup);
  provenance["exploration"] = to_string(exploration);
  provenance["trial_seed"] = outcome.seed;
  provenance["n_transitions"] = config.n_transitions;
  provenance["config_hash"] = config.hash_hex();
  provenance["scene"] = env.to_json();
  provenance["norm"] = gen.dataset.norm().to_json();

  fs::path checkpoint_path;
  if (!trial_dir.empty()) {
    fs::create_directories(trial_dir);
    write_json_file(trial_dir / "scene.json", env.to_json());
    checkpoint_path = trial_dir / "checkpoint.bin";
  }

  TrainSession session(std::move(model), train_config, provenance);
  const TrainResult result = session.run(gen.dataset, grid, checkpoint_path);

  outcome.curve = session.curve();
  outcome.final_epoch = result.final_epoch;
  outcome.early_stopped = result.early_stopped;
  outcome.final_loss = outcome.curve.empty() ? 0.0 : outcome.curve.back().loss;

  const EvalReport report = evaluate(session.model(), grid);
  outcome.final_q_p = report.dis.q_p;
  outcome.final_q_h = report.dis.q_h;
  outcome.clouds = cloud_export_json(report);
  try {
    outcome.redundancy = redundancy_collapse(session.model(), grid);
  } catch (const DegenerateError&) {
    outcome.redundancy.reset();
  }

  if (!trial_dir.empty()) {
    write_curve_csv(trial_dir / "curve.csv", outcome.curve);
    write_json_file(trial_dir / "clouds.json", outcome.clouds);
    nlohmann::json manifest;
    manifest["schema"] = "smpred.trial_manifest";
    manifest["artifact_version"] = kVersion;
    manifest["config"] = config.to_json();
    manifest["config_hash"] = config.hash_hex();
    manifest["exploration"] = to_string(exploration);
    manifest["trial_index"] = trial_index;
    manifest["seed"] = outcome.seed;
    manifest["generation"] = {{"attempts", gen.stats.attempts},
                              {"discarded", gen.stats.discarded},
                              {"translations", gen.stats.translations}};
    manifest["final"] = {{"epoch", outcome.final_epoch},
                         {"early_stopped", outcome.early_stopped},
                         {"loss", outcome.final_loss},
                         {"q_p", outcome.final_q_p},
                         {"q_h", outcome.final_q_h}};
    manifest["files"] = {"scene.json", "curve.csv", "checkpoint.bin", "clouds.json"};
    write_json_file(trial_dir / "manifest.json", manifest);
  }

  outcome.ok = true;
  return outcome;
}

StudyResult run_study(const ExperimentConfig& config, const fs::path& out_dir, int jobs) {
  fs::create_directories(out_dir);

  struct Task {
    ExplorationKind exploration;
    int trial;
    fs::path dir;
  };
  std::vector<Task> tasks;
  for (ExplorationKind kind : config.explorations) {
    const fs::path regime_dir = out_dir / to_string(kind);
    fs::create_directories(regime_dir);
    for (int t = 0; t < config.trials; ++t)
      tasks.push_back({kind, t, regime_dir / ("trial_" + std::to_string(t))});
  }

  StudyResult result;
  result.config = config;
  result.outcomes.resize(tasks.size());

  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(tasks.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      const Task& task = tasks[i];
      try {
        result.outcomes[i] = run_trial(config, task.exploration, task.trial, task.dir);
      } catch (const std::exception& e) {
        TrialOutcome failed;
        failed.exploration = task.exploration;
        failed.trial_index = task.trial;
        failed.seed = config.trial_seed(task.trial);
        failed.ok = false;
        failed.error = e.what();
        result.outcomes[i] = std::move(failed);
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();

  const bool any_ok =
      std::any_of(result.outcomes.begin(), result.outcomes.end(),
                  [](const TrialOutcome& o) { return o.ok; });
  if (!any_ok) {
    std::string first_error = result.outcomes.empty() ? "" : result.outcomes.front().error;
    throw Error("study failed: every trial failed; first error: " + first_error);
  }

  for (ExplorationKind kind : config.explorations) {
    RegimeAggregate agg = aggregate_regime(kind, result.regime_outcomes(kind));
    write_aggregate_csv(out_dir / to_string(kind) / "aggregate.csv", agg);
    result.aggregates.push_back(std::move(agg));
  }

  nlohmann::json manifest;
  manifest["schema"] = "smpred.study_manifest";
  manifest["artifact_version"] = kVersion;
  manifest["config"] = config.to_json();
  manifest["config_hash"] = config.hash_hex();
  nlohmann::json seeds = nlohmann::json::array();
  for (int t = 0; t < config.trials; ++t) seeds.push_back(config.trial_seed(t));
  manifest["trial_seeds"] = std::move(seeds);
  write_json_file(out_dir / "manifest.json", manifest);
  write_json_file(out_dir / "study_report.json", study_report_json(result));

  const fs::path plot_dir = out_dir / "plots";
  fs::create_directories(plot_dir);
  for (const std::string measure : {"loss", "q_p", "q_h"})
    render_measure_chart(plot_dir / (measure + ".svg"), measure, result.aggregates);
  for (ExplorationKind kind : config.explorations) {
    for (const TrialOutcome* o : result.regime_outcomes(kind)) {
      if (o->ok && !o->clouds.is_null()) {
        render_cloud_figure(out_dir / to_string(kind) / "clouds.svg", o->clouds,
                            regime_label(kind));
        break;
      }
    }
  }
  return result;
}

nlohmann::json study_report_json(const StudyResult& result) {
  nlohmann::json report;
  report["schema"] = "smpred.study_report";
  report["artifact_version"] = kVersion;
  report["config_hash"] = result.config.hash_hex();
  nlohmann::json regimes = nlohmann::json::object();
  for (ExplorationKind kind : result.config.explorations) {
    nlohmann::json trials = nlohmann::json::array();
    std::vector<double> q_p, q_h, loss;
    for (const TrialOutcome* o : result.regime_outcomes(kind)) {
      nlohmann::json t;
      t["trial"] = o->trial_index;
      t["seed"] = o->seed;
      t["ok"] = o->ok;
      if (!o->ok) {
        t["error"] = o->error;
      } else {
        t["final_epoch"] = o->final_epoch;
        t["early_stopped"] = o->early_stopped;
        t["final_loss"] = o->final_loss;
        t["final_q_p"] = o->final_q_p;
        t["final_q_h"] = o->final_q_h;
        if (o->redundancy) t["redundancy_collapse"] = *o->redundancy;
        t["generation"] = {{"attempts", o->gen_stats.attempts},
                           {"discarded", o->gen_stats.discarded},
                           {"translations", o->gen_stats.translations}};
        q_p.push_back(o->final_q_p);
        q_h.push_back(o->final_q_h);
        loss.push_back(o->final_loss);
      }
      trials.push_back(std::move(t));
    }
    nlohmann::json regime;
    regime["trials"] = std::move(trials);
    if (!q_p.empty()) {
      regime["final_q_p_median"] = median(q_p);
      regime["final_q_h_median"] = median(q_h);
      regime["final_loss_median"] = median(loss);
    }
    regimes[to_string(kind)] = std::move(regime);
  }
  report["regimes"] = std::move(regimes);
  return report;
}

EvalOutcome eval_checkpoint(const fs::path& checkpoint_path,
                            const std::optional<nlohmann::json>& expected_scene) {
  const TrainSession session = TrainSession::load_checkpoint(checkpoint_path);
  const nlohmann::json& provenance = session.provenance();
  if (!provenance.contains("scene") || !provenance.contains("norm"))
    throw ProvenanceError("checkpoint carries no scene/norm provenance: " +
                          checkpoint_path.string());
  if (expected_scene && *expected_scene != provenance.at("scene"))
    throw ProvenanceError("scene file does not match the checkpoint provenance");

  const Environment env = Environment::from_json(provenance.at("scene"));
  const Normalization norm = Normalization::from_json(provenance.at("norm"));
  const EvalGrid grid = make_eval_grid(env, norm);
  const EvalReport report = evaluate(session.model(), grid);

  if (session.curve().empty())
    throw ProvenanceError("checkpoint has no recorded curve to compare against");
  const CurveRow& last = session.curve().back();

  EvalOutcome outcome;
  outcome.q_p = report.dis.q_p;
  outcome.q_h = report.dis.q_h;
  outcome.curve_q_p = last.q_p;
  outcome.curve_q_h = last.q_h;
  outcome.clouds = cloud_export_json(report);
  if (std::abs(outcome.q_p - last.q_p) > 1e-12 || std::abs(outcome.q_h - last.q_h) > 1e-12)
    throw ProvenanceError("recomputed dissimilarity differs from the checkpoint curve: q_p " +
                          format_double(outcome.q_p) + " vs " + format_double(last.q_p));
  return outcome;
}

void replot_study(const fs::path& study_dir) {
  const nlohmann::json manifest = read_json_file(study_dir / "manifest.json");
  const ExperimentConfig config = ExperimentConfig::from_json(manifest.at("config"));

  std::vector<RegimeAggregate> aggregates;
  for (ExplorationKind kind : config.explorations) {
    RegimeAggregate agg;
    agg.exploration = kind;
    const fs::path csv = study_dir / to_string(kind) / "aggregate.csv";
    std::ifstream in(csv);
    if (!in) throw IoError("cannot open: " + csv.string());
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::array<double, 7> fields{};
      std::size_t pos = 0;
      for (int f = 0; f < 7; ++f) {
        const std::size_t comma = line.find(',', pos);
        const std::string field = line.substr(pos, comma - pos);
        fields[f] = std::stod(field);
        pos = comma == std::string::npos ? line.size() : comma + 1;
      }
      agg.epochs.push_back(static_cast<std::int64_t>(fields[0]));
      agg.loss_mean.push_back(fields[1]);
      agg.loss_std.push_back(fields[2]);
      agg.q_p_mean.push_back(fields[3]);
      agg.q_p_std.push_back(fields[4]);
      agg.q_h_mean.push_back(fields[5]);
      agg.q_h_std.push_back(fields[6]);
    }
    aggregates.push_back(std::move(agg));
  }

  const fs::path plot_dir = study_dir / "plots";
  fs::create_directories(plot_dir);
  for (const std::string measure : {"loss", "q_p", "q_h"})
    render_measure_chart(plot_dir / (measure + ".svg"), measure, aggregates);

  for (ExplorationKind kind : config.explorations) {
    for (int t = 0; t < config.trials; ++t) {
      const fs::path clouds_path =
          study_dir / to_string(kind) / ("trial_" + std::to_string(t)) / "clouds.json";
      if (fs::exists(clouds_path)) {
        render_cloud_figure(study_dir / to_string(kind) / "clouds.svg",
                            read_json_file(clouds_path), regime_label(kind));
        break;
      }
    }
  }
}

}  // namespace smpred
