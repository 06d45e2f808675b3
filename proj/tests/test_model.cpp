#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "oracles.hpp"
#include "smpred/common/error.hpp"
#include "smpred/explore/generate.hpp"
#include "smpred/io/container.hpp"
#include "smpred/model/trainer.hpp"

using namespace smpred;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("smpred_model_" + name);
  fs::create_directories(dir);
  return dir;
}

// Tiny siamese model with explicit layer sizes for oracle tests.
PredictiveModel tiny_model(std::size_t nm, std::size_t ns, std::size_t dim_h,
                           std::size_t enc_hidden, std::size_t pred_hidden, Rng& rng) {
  const std::size_t enc_sizes[] = {nm, enc_hidden, dim_h};
  const std::size_t pred_sizes[] = {2 * dim_h + ns, pred_hidden, ns};
  Mlp encoder = Mlp::create(enc_sizes, Activation::kSelu, rng);
  Mlp predictor = Mlp::create(pred_sizes, Activation::kSelu, rng);
  ModelConfig config{nm, ns, dim_h, Activation::kSelu};
  return PredictiveModel(config, std::move(encoder), std::move(predictor));
}

Batch random_batch(std::size_t rows, std::size_t nm, std::size_t ns, Rng& rng) {
  Batch batch{Matrix(rows, nm), Matrix(rows, ns), Matrix(rows, nm), Matrix(rows, ns)};
  for (Matrix* m : {&batch.m_t, &batch.s_t, &batch.m_next, &batch.s_next})
    for (double& v : m->data()) v = 0.8 * (2.0 * rng.uniform() - 1.0);
  return batch;
}

double composite_loss(const PredictiveModel& model, const Batch& batch) {
  return mse_loss(model.predict(batch.m_t, batch.s_t, batch.m_next), batch.s_next).loss;
}

}  // namespace

TEST_CASE("model_new builds the fixed architecture") {
  Rng rng(1);
  const PredictiveModel grid = PredictiveModel::create({3, 4, 3, Activation::kSelu}, rng);
  const auto& enc = grid.encoder().layers();
  REQUIRE(enc.size() == 4);
  CHECK(enc[0].in_dim() == 3);
  CHECK(enc[0].out_dim() == 150);
  CHECK(enc[1].out_dim() == 100);
  CHECK(enc[2].out_dim() == 50);
  CHECK(enc[3].out_dim() == 3);
  CHECK(enc[3].activation == Activation::kLinear);
  const auto& pred = grid.predictor().layers();
  REQUIRE(pred.size() == 4);
  CHECK(pred[0].in_dim() == 10);  // 2*3 + 4
  CHECK(pred[0].out_dim() == 200);
  CHECK(pred[1].out_dim() == 150);
  CHECK(pred[2].out_dim() == 100);
  CHECK(pred[3].out_dim() == 4);

  const PredictiveModel rgb = PredictiveModel::create({3, 48, 25, Activation::kSelu}, rng);
  CHECK(rgb.predictor().layers()[0].in_dim() == 98);  // 2*25 + 48
  CHECK(rgb.predictor().layers()[3].out_dim() == 48);
  CHECK(rgb.encoder().layers()[3].out_dim() == 25);

  const PredictiveModel narrow = PredictiveModel::create({3, 4, 1, Activation::kSelu}, rng);
  CHECK(narrow.encoder().out_dim() == 1);
}

TEST_CASE("encode: determinism and shapes") {
  Rng rng(2);
  const PredictiveModel model = PredictiveModel::create({3, 4, 3, Activation::kSelu}, rng);
  Matrix motors = Matrix::from_rows({{0.1, 0.2, 0.3}, {0.1, 0.2, 0.3}, {0.5, -0.5, 0.0}});
  const Matrix h = model.encode(motors);
  CHECK(h.rows() == 3);
  CHECK(h.cols() == 3);
  for (std::size_t c = 0; c < 3; ++c) CHECK(h(0, c) == h(1, c));  // duplicate rows
  CHECK(model.encode(motors) == h);
}

TEST_CASE("predict: width, slot asymmetry, linear toy hand-check") {
  Rng rng(3);
  const PredictiveModel model = PredictiveModel::create({3, 4, 3, Activation::kSelu}, rng);
  Rng batch_rng(4);
  Batch batch = random_batch(5, 3, 4, batch_rng);
  const Matrix out = model.predict(batch.m_t, batch.s_t, batch.m_next);
  CHECK(out.rows() == 5);
  CHECK(out.cols() == 4);

  const Matrix swapped = model.predict(batch.m_next, batch.s_t, batch.m_t);
  bool differs = false;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out.data()[i] != swapped.data()[i]) differs = true;
  CHECK(differs);

  // one-layer linear toy: predict == concat(m_t W, m_next W, s_t) V
  Matrix w = Matrix::from_rows({{2.0}, {-1.0}});           // encoder 2 -> 1
  Matrix v = Matrix::from_rows({{1.0}, {10.0}, {100.0}});  // predictor 3 -> 1
  Mlp enc({DenseLayer{w, {0}, Activation::kLinear}});
  Mlp pred({DenseLayer{v, {0}, Activation::kLinear}});
  const PredictiveModel toy({2, 1, 1, Activation::kLinear}, std::move(enc), std::move(pred));
  const Matrix m_t = Matrix::from_rows({{1.0, 1.0}});    // h_t = 1
  const Matrix m_next = Matrix::from_rows({{3.0, 0.0}}); // h_next = 6
  const Matrix s_t = Matrix::from_rows({{0.5}});
  const Matrix y = toy.predict(m_t, s_t, m_next);
  CHECK(y(0, 0) == doctest::Approx(1.0 * 1 + 6.0 * 10 + 0.5 * 100).epsilon(1e-14));
}

TEST_CASE("siamese gradient: encoder grads sum both applications (FD oracle)") {
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    PredictiveModel model = tiny_model(1 + rng.uniform_index(3), 1 + rng.uniform_index(3),
                                       1 + rng.uniform_index(2), 2 + rng.uniform_index(7),
                                       2 + rng.uniform_index(7), rng);
    Rng batch_rng(100 + trial);
    const Batch batch =
        random_batch(4, model.config().motor_dim, model.config().sensory_dim, batch_rng);

    // analytic gradient via a zero-lr-free probe: replicate train_step's
    // backward path by differencing parameters after one SGD-like step is
    // not possible with Adam, so check the FD gradient of the composite loss
    // against the accumulated flat gradient exposed through a single
    // train_step with tiny lr (the update direction reveals sign errors) and
    // directly through the public pieces.
    ForwardCache enc_t, enc_next, pred_cache;
    const Matrix h_t = model.encoder().forward(batch.m_t, &enc_t);
    const Matrix h_next = model.encoder().forward(batch.m_next, &enc_next);
    const std::array<const Matrix*, 3> blocks{&h_t, &h_next, &batch.s_t};
    const Matrix s_pred = model.predictor().forward(hstack(blocks), &pred_cache);
    MlpGrads pred_grads = model.predictor().grads_like();
    const Matrix d_in =
        model.predictor().backward(pred_cache, mse_loss(s_pred, batch.s_next).grad, pred_grads);
    const std::size_t dim_h = model.config().dim_h;
    MlpGrads enc_grads = model.encoder().grads_like();
    model.encoder().backward(enc_t, slice_cols(d_in, 0, dim_h), enc_grads);
    model.encoder().backward(enc_next, slice_cols(d_in, dim_h, 2 * dim_h), enc_grads);

    std::vector<double> analytic(model.param_count());
    Mlp::flatten_grads(enc_grads, std::span(analytic).subspan(0, model.encoder().param_count()));
    Mlp::flatten_grads(pred_grads,
                       std::span(analytic).subspan(model.encoder().param_count()));

    std::vector<double> params(model.param_count());
    model.flatten_params(params);
    const auto fd = oracles::fd_gradient(params, [&]() {
      model.unflatten_params(params);
      return composite_loss(model, batch);
    });
    model.unflatten_params(params);

    for (std::size_t i = 0; i < analytic.size(); ++i)
      CHECK(oracles::rel_error(analytic[i], fd[i]) < 1e-4);
  }
}

TEST_CASE("train_step: perfect prediction keeps parameters frozen") {
  // all-zero weights predict 0; s_next == 0 gives loss 0 and zero grads
  Mlp enc({DenseLayer{Matrix(2, 1), {0}, Activation::kLinear}});
  Mlp pred({DenseLayer{Matrix(3, 1), {0}, Activation::kLinear}});
  PredictiveModel model({2, 1, 1, Activation::kLinear}, std::move(enc), std::move(pred));
  AdamState adam(model.param_count());
  Batch batch{Matrix::from_rows({{1, 2}}), Matrix::from_rows({{3}}),
              Matrix::from_rows({{4, 5}}), Matrix::from_rows({{0}})};
  const double loss = model.train_step(batch, adam, 1e-3);
  CHECK(loss == 0.0);
  std::vector<double> params(model.param_count());
  model.flatten_params(params);
  for (double p : params) CHECK(p == 0.0);
  CHECK(adam.step_count == 1);
}

TEST_CASE("train_step overfits a 20-transition toy dataset") {
  Rng rng(6);
  PredictiveModel model = PredictiveModel::create({3, 4, 3, Activation::kSelu}, rng);
  AdamState adam(model.param_count());
  Rng batch_rng(7);
  const Batch batch = random_batch(20, 3, 4, batch_rng);
  const double initial = composite_loss(model, batch);
  double last = initial;
  for (int step = 0; step < 100; ++step) last = model.train_step(batch, adam, 1e-3);
  CHECK(last < initial * 0.1);
}

TEST_CASE("trainer: snapshot grid, early-stop freezing, determinism") {
  Rng env_rng(8);
  const Environment env = Environment::create(SetupKind::kGridWorld, env_rng);
  Rng data_rng(9);
  GenerateResult gen = generate(env, ExplorationKind::kMm, 500, data_rng);
  gen.dataset.normalize();
  const EvalGrid grid = make_eval_grid(env, gen.dataset.norm());

  auto session_for = [&](TrainConfig config) {
    Rng model_rng(10);
    PredictiveModel model = PredictiveModel::create({3, 4, 3, Activation::kSelu}, model_rng);
    return TrainSession(std::move(model), config, nlohmann::json());
  };

  TrainConfig config;
  config.max_epochs = 300;
  config.eval_every = 50;
  config.loss_stop = 0.0;  // never stops early (loss > 0)
  config.seed = 11;
  TrainSession session = session_for(config);
  session.run(gen.dataset, grid);
  REQUIRE(session.curve().size() == 6);
  for (std::size_t i = 0; i < session.curve().size(); ++i)
    CHECK(session.curve()[i].epoch == static_cast<std::int64_t>(50 * (i + 1)));
  for (const CurveRow& row : session.curve()) CHECK(row.wall_time_s == 0.0);

  // identical config + seed -> identical curves, bit for bit
  TrainSession session2 = session_for(config);
  session2.run(gen.dataset, grid);
  for (std::size_t i = 0; i < session.curve().size(); ++i) {
    CHECK(session.curve()[i].loss == session2.curve()[i].loss);
    CHECK(session.curve()[i].q_p == session2.curve()[i].q_p);
  }

  // immediate stop: every snapshot row repeats the frozen values
  TrainConfig freeze = config;
  freeze.loss_stop = 1e9;
  TrainSession frozen = session_for(freeze);
  const TrainResult result = frozen.run(gen.dataset, grid);
  CHECK(result.early_stopped);
  CHECK(result.final_epoch == 1);
  REQUIRE(frozen.curve().size() == 6);
  for (const CurveRow& row : frozen.curve()) {
    CHECK(row.loss == frozen.curve().front().loss);
    CHECK(row.q_p == frozen.curve().front().q_p);
  }
}

TEST_CASE("trainer: divergence guard raises with epoch context") {
  Rng env_rng(12);
  const Environment env = Environment::create(SetupKind::kGridWorld, env_rng);
  Rng data_rng(13);
  GenerateResult gen = generate(env, ExplorationKind::kMm, 200, data_rng);
  gen.dataset.normalize();
  const EvalGrid grid = make_eval_grid(env, gen.dataset.norm());
  Rng model_rng(14);
  PredictiveModel model = PredictiveModel::create({3, 4, 3, Activation::kRelu}, model_rng);
  TrainConfig config;
  config.max_epochs = 2000;
  config.eval_every = 1000;
  config.lr_start = 1e12;  // guaranteed blow-up
  config.lr_end = 1e12;
  config.decay_epochs = 1;
  config.loss_stop = 0.0;
  TrainSession session(std::move(model), config, nlohmann::json());
  CHECK_THROWS_AS(session.run(gen.dataset, grid), DivergenceError);
}

TEST_CASE("checkpoint: resume reproduces the uninterrupted run bit-exactly") {
  Rng env_rng(15);
  const Environment env = Environment::create(SetupKind::kGridWorld, env_rng);
  Rng data_rng(16);
  GenerateResult gen = generate(env, ExplorationKind::kMm, 400, data_rng);
  gen.dataset.normalize();
  const EvalGrid grid = make_eval_grid(env, gen.dataset.norm());
  const fs::path dir = temp_dir("resume");
  const fs::path ckpt = dir / "checkpoint.bin";

  TrainConfig config;
  config.max_epochs = 200;
  config.eval_every = 50;
  config.loss_stop = 0.0;
  config.seed = 17;

  // uninterrupted reference run
  Rng model_rng(18);
  TrainSession reference(PredictiveModel::create({3, 4, 3, Activation::kSelu}, model_rng),
                         config, nlohmann::json{{"note", "reference"}});
  reference.run(gen.dataset, grid);

  // interrupted run: stop at epoch 100 by capping, then resume from disk
  TrainConfig half = config;
  half.max_epochs = 100;
  Rng model_rng2(18);
  TrainSession first(PredictiveModel::create({3, 4, 3, Activation::kSelu}, model_rng2), half,
                     nlohmann::json{{"note", "reference"}});
  first.run(gen.dataset, grid, ckpt);

  {
    TrainSession resumed = TrainSession::load_checkpoint(ckpt);
    CHECK(resumed.epoch() == 100);
  }
  // lift the epoch cap inside the stored config, then resume to the horizon
  {
    Container c = read_container(ckpt);
    c.header["train"]["max_epochs"] = 200;
    write_container(ckpt, c.header, c.payload);
  }
  TrainSession second = TrainSession::load_checkpoint(ckpt);
  second.run(gen.dataset, grid);

  REQUIRE(second.curve().size() == reference.curve().size());
  for (std::size_t i = 0; i < reference.curve().size(); ++i) {
    CHECK(second.curve()[i].loss == reference.curve()[i].loss);
    CHECK(second.curve()[i].q_p == reference.curve()[i].q_p);
    CHECK(second.curve()[i].q_h == reference.curve()[i].q_h);
  }
  std::vector<double> p1(reference.model().param_count()), p2(second.model().param_count());
  reference.model().flatten_params(p1);
  second.model().flatten_params(p2);
  CHECK(p1 == p2);

  fs::remove_all(dir);
}

TEST_CASE("checkpoint round-trip preserves params, adam, rng and curve") {
  Rng env_rng(19);
  const Environment env = Environment::create(SetupKind::kGridWorld, env_rng);
  Rng data_rng(20);
  GenerateResult gen = generate(env, ExplorationKind::kMm, 300, data_rng);
  gen.dataset.normalize();
  const EvalGrid grid = make_eval_grid(env, gen.dataset.norm());
  const fs::path dir = temp_dir("roundtrip");
  const fs::path ckpt = dir / "checkpoint.bin";

  TrainConfig config;
  config.max_epochs = 100;
  config.eval_every = 25;
  config.loss_stop = 0.0;
  config.seed = 21;
  Rng model_rng(22);
  TrainSession session(PredictiveModel::create({3, 4, 3, Activation::kSelu}, model_rng),
                       config, nlohmann::json{{"k", "v"}});
  session.run(gen.dataset, grid, ckpt);

  const TrainSession loaded = TrainSession::load_checkpoint(ckpt);
  std::vector<double> p1(session.model().param_count()), p2(loaded.model().param_count());
  session.model().flatten_params(p1);
  loaded.model().flatten_params(p2);
  CHECK(p1 == p2);
  CHECK(loaded.epoch() == session.epoch());
  CHECK(loaded.provenance() == session.provenance());
  REQUIRE(loaded.curve().size() == session.curve().size());
  for (std::size_t i = 0; i < session.curve().size(); ++i)
    CHECK(loaded.curve()[i].loss == session.curve()[i].loss);

  CHECK_THROWS_AS(TrainSession::load_checkpoint(dir / "missing.bin"), IoError);
  fs::remove_all(dir);
}
