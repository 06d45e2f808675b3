// Command-line experiment runner: generate exploration data, train the
// sensorimotor predictive model, run multi-trial studies, evaluate
// checkpoints and regenerate figures.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "smpred/common/error.hpp"
#include "smpred/common/version.hpp"
#include "smpred/study/study.hpp"

namespace fs = std::filesystem;
using namespace smpred;

namespace {

struct ConfigCli {
  std::string config_path;
  std::string preset;
  std::vector<std::pair<std::string, std::string>> overrides;

  ExperimentConfig build() const {
    ExperimentConfig config;
    if (!preset.empty()) config = ExperimentConfig::preset(preset);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw IoError("cannot open config: " + config_path);
      nlohmann::json j;
      in >> j;
      config = ExperimentConfig::from_json(j);
    }
    for (const auto& [key, value] : overrides) config.apply_override(key, value);
    return config;
  }
};

void add_config_options(CLI::App* cmd, ConfigCli& cli) {
  cmd->add_option("--config", cli.config_path, "experiment config JSON file");
  cmd->add_option("--preset", cli.preset, "desk | paper")
      ->check(CLI::IsMember({"desk", "paper"}));
  // Every config field is overridable by a flag of the same dotted name.
  static const char* kFields[] = {
      "setup",         "explorations",        "dim_h",
      "activation",    "trials",              "n_transitions",
      "base_seed",     "train.max_epochs",    "train.loss_stop",
      "train.batch_size", "train.lr_start",   "train.lr_end",
      "train.decay_epochs", "train.eval_every", "train.divergence_limit",
      "train.record_wall_time"};
  for (const char* field : kFields) {
    cmd->add_option_function<std::string>(
        std::string("--") + field,
        [&cli, field](const std::string& value) { cli.overrides.emplace_back(field, value); },
        "override config field " + std::string(field));
  }
  cmd->add_option_function<std::string>(
      "--seed", [&cli](const std::string& v) { cli.overrides.emplace_back("base_seed", v); },
      "alias for --base_seed");
  cmd->add_flag_callback(
      "--timings",
      [&cli]() { cli.overrides.emplace_back("train.record_wall_time", "true"); },
      "record wall-clock times in curves (breaks byte-reproducibility)");
}

ExplorationKind single_regime(const ExperimentConfig& config, const char* command) {
  if (config.explorations.size() != 1)
    throw ConfigError(std::string(command) + " needs exactly one exploration regime, got " +
                      std::to_string(config.explorations.size()));
  return config.explorations.front();
}

void write_json_file(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

int cmd_gen_data(const ConfigCli& cli, const std::string& out_dir) {
  const ExperimentConfig config = cli.build();
  const ExplorationKind regime = single_regime(config, "gen-data");
  const std::uint64_t seed = config.trial_seed(0);
  const Rng root(seed);
  Rng scene_rng = root.split(0);
  Rng data_rng = root.split(1);

  const Environment env = Environment::create(config.setup, scene_rng);
  GenerateResult gen = generate(env, regime, config.n_transitions, data_rng);
  gen.dataset.provenance.seed = seed;
  gen.dataset.normalize();

  fs::create_directories(out_dir);
  gen.dataset.save(fs::path(out_dir) / "dataset.bin");
  write_json_file(fs::path(out_dir) / "scene.json", env.to_json());

  std::cout << "setup:        " << to_string(config.setup) << "\n"
            << "exploration:  " << to_string(regime) << "\n"
            << "valid:        " << gen.dataset.size() << "\n"
            << "discarded:    " << gen.stats.discarded << "\n"
            << "translations: " << gen.stats.translations << "\n"
            << "wrote " << (fs::path(out_dir) / "dataset.bin").string() << "\n";
  return 0;
}

int cmd_train(const ConfigCli& cli, const std::string& dataset_path,
              const std::string& resume_path, const std::string& out_dir) {
  const ExperimentConfig config = cli.build();
  fs::create_directories(out_dir);
  const fs::path checkpoint_path = fs::path(out_dir) / "checkpoint.bin";

  Dataset dataset = Dataset::load(dataset_path);
  if (!dataset.normalized()) dataset.normalize();

  TrainSession session = [&]() {
    if (!resume_path.empty()) return TrainSession::load_checkpoint(resume_path);

    const ExplorationKind regime = single_regime(config, "train");
    if (dataset.provenance.setup != to_string(config.setup))
      throw ProvenanceError("dataset setup '" + dataset.provenance.setup +
                            "' does not match config setup '" + to_string(config.setup) + "'");
    if (dataset.provenance.exploration != to_string(regime))
      throw ProvenanceError("dataset exploration '" + dataset.provenance.exploration +
                            "' does not match config exploration '" + to_string(regime) + "'");

    const Rng root(dataset.provenance.seed);
    Rng model_rng = root.split(2);
    ModelConfig mc;
    const Environment env = Environment::from_json(dataset.provenance.scene);
    mc.motor_dim = env.motor_dim();
    mc.sensory_dim = env.sensory_dim();
    mc.dim_h = config.dim_h;
    mc.hidden_activation = config.activation;
    PredictiveModel model = PredictiveModel::create(mc, model_rng);

    TrainConfig train_config = config.train;
    train_config.seed = root.split(3).seed();

    nlohmann::json provenance;
    provenance["setup"] = dataset.provenance.setup;
    provenance["exploration"] = dataset.provenance.exploration;
    provenance["trial_seed"] = dataset.provenance.seed;
    provenance["n_transitions"] = dataset.size();
    provenance["config_hash"] = config.hash_hex();
    provenance["scene"] = dataset.provenance.scene;
    provenance["norm"] = dataset.norm().to_json();
    return TrainSession(std::move(model), train_config, provenance);
  }();

  const Environment env = Environment::from_json(session.provenance().at("scene"));
  const EvalGrid grid = make_eval_grid(env, dataset.norm());
  const TrainResult result = session.run(dataset, grid, checkpoint_path);

  write_curve_csv(fs::path(out_dir) / "curve.csv", session.curve());
  const EvalReport report = evaluate(session.model(), grid);
  write_json_file(fs::path(out_dir) / "clouds.json", cloud_export_json(report));

  nlohmann::json manifest;
  manifest["schema"] = "smpred.train_manifest";
  manifest["artifact_version"] = kVersion;
  manifest["config"] = config.to_json();
  manifest["config_hash"] = config.hash_hex();
  manifest["dataset"] = dataset_path;
  manifest["seed"] = session.provenance().value("trial_seed", std::uint64_t{0});
  write_json_file(fs::path(out_dir) / "manifest.json", manifest);

  std::cout << "trained " << result.final_epoch << " epochs"
            << (result.early_stopped ? " (early stop)" : "") << "\n"
            << "final loss: " << (session.curve().empty() ? 0.0 : session.curve().back().loss)
            << "  q_p: " << report.dis.q_p << "  q_h: " << report.dis.q_h << "\n"
            << "wrote " << checkpoint_path.string() << "\n";
  return 0;
}

int cmd_study(const ConfigCli& cli, const std::string& out_dir, int jobs) {
  const ExperimentConfig config = cli.build();
  const StudyResult result = run_study(config, out_dir, jobs);
  std::cout << "study complete: " << result.outcomes.size() << " trials under " << out_dir
            << "\n";
  for (ExplorationKind kind : config.explorations) {
    std::cout << "  " << to_string(kind) << ": median final q_p = "
              << result.median_final_q_p(kind)
              << ", median final loss = " << result.median_final_loss(kind) << "\n";
  }
  return 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& scene_path,
             const std::string& out_path) {
  std::optional<nlohmann::json> expected_scene;
  if (!scene_path.empty()) {
    std::ifstream in(scene_path);
    if (!in) throw IoError("cannot open scene: " + scene_path);
    nlohmann::json j;
    in >> j;
    expected_scene = std::move(j);
  }
  const EvalOutcome outcome = eval_checkpoint(checkpoint_path, expected_scene);
  nlohmann::json report = {{"q_p", outcome.q_p},
                           {"q_h", outcome.q_h},
                           {"curve_q_p", outcome.curve_q_p},
                           {"curve_q_h", outcome.curve_q_h}};
  std::cout << report.dump(2) << "\n";
  if (!out_path.empty()) {
    write_json_file(out_path, outcome.clouds);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sensorimotor prediction experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  ConfigCli gen_cli, train_cli, study_cli;
  std::string out_dir = "out";
  std::string dataset_path, resume_path, checkpoint_path, scene_path, eval_out, study_dir;
  int jobs = 0;

  CLI::App* gen = app.add_subcommand("gen-data", "generate an exploration dataset");
  add_config_options(gen, gen_cli);
  gen->add_option("--out", out_dir, "output directory");

  CLI::App* train = app.add_subcommand("train", "train a model on a dataset");
  add_config_options(train, train_cli);
  train->add_option("--dataset", dataset_path, "dataset file")->required();
  train->add_option("--resume", resume_path, "resume from a checkpoint");
  train->add_option("--out", out_dir, "output directory");

  CLI::App* study = app.add_subcommand("study", "run a multi-trial study");
  add_config_options(study, study_cli);
  study->add_option("--out", out_dir, "output directory");
  study->add_option("--jobs", jobs, "max concurrent trials (0 = hardware)");

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint on the regular grid");
  eval->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
  eval->add_option("--scene", scene_path, "scene JSON to verify provenance against");
  eval->add_option("--out", eval_out, "write point clouds JSON here");

  CLI::App* plot = app.add_subcommand("plot", "regenerate figures for a study directory");
  plot->add_option("--study", study_dir, "study output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_data(gen_cli, out_dir);
    if (train->parsed()) return cmd_train(train_cli, dataset_path, resume_path, out_dir);
    if (study->parsed()) return cmd_study(study_cli, out_dir, jobs);
    if (eval->parsed()) return cmd_eval(checkpoint_path, scene_path, eval_out);
    if (plot->parsed()) {
      replot_study(study_dir);
      std::cout << "regenerated plots under " << study_dir << "/plots\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
