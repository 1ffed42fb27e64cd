// Command-line front end: data generation, training, sweeps, evaluation,
// gradient checking and hidden-state tracing.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lstmlab/distributions.hpp"
#include "lstmlab/encoding.hpp"
#include "lstmlab/evaluation.hpp"
#include "lstmlab/experiments.hpp"
#include "lstmlab/languages.hpp"
#include "lstmlab/lstm.hpp"
#include "lstmlab/tracing.hpp"

namespace {

namespace fs = std::filesystem;
using namespace lstmlab;

// Every command echoes its fully-resolved configuration before doing any
// work, so any output can be reproduced from its own log.
void log_config(const nlohmann::json& resolved) {
  std::cerr << "config: " << resolved.dump() << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Options shared by train and sweep; flag values override config-file
/// values field by field.
struct CommonOptions {
  std::string language;
  std::string dist;
  std::string window;
  int hidden = 0;
  int epochs = 0;
  int trials = 0;
  int k = 0;
  int max_n = 0;
  std::int64_t seed = 0;
  std::int64_t data_seed = 0;
  std::string optimizer;
  double lr = 0.0;
  std::string config_path;

  CLI::Option* language_opt = nullptr;
  CLI::Option* dist_opt = nullptr;
  CLI::Option* window_opt = nullptr;
  CLI::Option* hidden_opt = nullptr;
  CLI::Option* epochs_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* max_n_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* data_seed_opt = nullptr;
  CLI::Option* optimizer_opt = nullptr;
  CLI::Option* lr_opt = nullptr;

  void attach(CLI::App* cmd) {
    language_opt = cmd->add_option("--language", language,
                                   "Language: anbn, anbncn or anbncndn");
    dist_opt = cmd->add_option("--dist", dist,
                               "uniform, u-shaped, right-tailed, left-tailed or "
                               "beta-binomial:ALPHA,BETA");
    window_opt = cmd->add_option("--window", window, "Length window LO:HI");
    hidden_opt = cmd->add_option("--hidden", hidden, "Hidden units");
    epochs_opt = cmd->add_option("--epochs", epochs, "Training epochs");
    trials_opt = cmd->add_option("--trials", trials, "Trials per cell");
    k_opt = cmd->add_option("--k", k, "Error-profile depth");
    max_n_opt = cmd->add_option("--max-n", max_n, "Evaluation enumeration bound");
    seed_opt = cmd->add_option("--seed", seed, "Trial seed base (weight init)");
    data_seed_opt = cmd->add_option("--data-seed", data_seed, "Training data seed");
    optimizer_opt = cmd->add_option("--optimizer", optimizer, "adam or sgd");
    lr_opt = cmd->add_option("--lr", lr, "Learning rate");
    cmd->add_option("--config", config_path, "JSON config file (flags override it)");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = config_from_json(read_file(config_path));
    if (language_opt->count()) cfg.language = parse_language(language);
    if (dist_opt->count()) cfg.distribution = parse_distribution(dist);
    if (window_opt->count()) cfg.window = parse_window(window);
    if (hidden_opt->count()) cfg.hidden_units = hidden;
    if (epochs_opt->count()) cfg.epochs = epochs;
    if (trials_opt->count()) cfg.trials = trials;
    if (k_opt->count()) cfg.eval.k = k;
    if (max_n_opt->count()) cfg.eval.max_n = max_n;
    if (seed_opt->count()) cfg.trial_seed_base = seed;
    if (data_seed_opt->count()) cfg.data_seed = data_seed;
    if (optimizer_opt->count()) {
      if (optimizer == "adam") cfg.optimizer = OptimizerState::Rule::Adam;
      else if (optimizer == "sgd") cfg.optimizer = OptimizerState::Rule::Sgd;
      else throw std::runtime_error("unknown optimizer '" + optimizer + "'");
    }
    if (lr_opt->count()) {
      if (!(lr > 0)) throw std::runtime_error("--lr must be positive");
      cfg.learning_rate = lr;
    }
    return cfg;
  }
};

int cmd_gen(const std::string& language, int n, int count, const std::string& dist,
            const std::string& window, std::int64_t data_seed) {
  const LanguageId lang = parse_language(language);
  log_config({{"command", "gen"},
              {"language", to_string(lang)},
              {"n", n},
              {"count", count},
              {"dist", dist},
              {"window", window},
              {"data_seed", data_seed}});
  if (n > 0) {
    std::cout << dump_sample(generate_sample(lang, n)) << "\n";
    return 0;
  }
  const DistributionSpec spec = parse_distribution(dist);
  const LengthWindow win = parse_window(window);
  const LengthSampler sampler(spec, win);
  Rng rng(static_cast<std::uint64_t>(data_seed));
  for (int i = 0; i < count; ++i)
    std::cout << dump_sample(generate_sample(lang, sampler(rng))) << "\n";
  return 0;
}

int cmd_train(const CommonOptions& common, const std::string& out_dir) {
  ExperimentConfig cfg = common.resolve();
  cfg.trials = 1;  // train runs exactly one trial
  log_config(nlohmann::json::parse(config_to_json(cfg)));

  fs::create_directories(out_dir);
  {
    std::ofstream cfg_out(fs::path(out_dir) / "config.json");
    cfg_out << config_to_json(cfg) << "\n";
  }
  const TrialResult result = run_trial(cfg, 0);
  write_trial_csv((fs::path(out_dir) / "train.csv").string(), result.records, cfg.eval.k);
  save_parameters((fs::path(out_dir) / "checkpoint.ckpt").string(), result.final_params);
  std::cerr << "wrote " << (fs::path(out_dir) / "train.csv").string() << " and checkpoint\n";
  return 0;
}

std::vector<ExperimentConfig> preset_grid(const std::string& preset, ExperimentConfig base) {
  std::vector<ExperimentConfig> grid;
  if (preset == "distribution") {
    // Paper-style distribution sweep at window [1,50] with H = 2/3/4.
    base.window = LengthWindow(1, 50);
    switch (base.language) {
      case LanguageId::AnBn: base.hidden_units = 2; break;
      case LanguageId::AnBnCn: base.hidden_units = 3; break;
      case LanguageId::AnBnCnDn: base.hidden_units = 4; break;
    }
    for (const DistributionSpec& spec :
         {DistributionSpec::uniform(), DistributionSpec::u_shaped(),
          DistributionSpec::right_tailed(), DistributionSpec::left_tailed()}) {
      base.distribution = spec;
      grid.push_back(base);
    }
  } else if (preset == "window") {
    for (const LengthWindow& window :
         {LengthWindow(1, 30), LengthWindow(1, 50), LengthWindow(50, 100)}) {
      base.window = window;
      grid.push_back(base);
    }
  } else if (preset == "capacity") {
    for (int h : capacity_grid(base.language)) {
      base.hidden_units = h;
      grid.push_back(base);
    }
  } else {
    throw std::runtime_error("unknown preset '" + preset +
                             "' (expected distribution, window or capacity)");
  }
  return grid;
}

std::vector<ExperimentConfig> grid_from_config_file(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("unreadable config: ") + e.what());
  }
  std::vector<ExperimentConfig> grid;
  if (j.is_object() && j.contains("cells")) {
    for (const auto& cell : j.at("cells"))
      grid.push_back(config_from_json(cell.dump()));
    return grid;
  }
  if (j.is_object() && j.contains("base") && j.contains("grid")) {
    grid.push_back(config_from_json(j.at("base").dump()));
    for (const auto& [axis, values] : j.at("grid").items()) {
      std::vector<ExperimentConfig> expanded;
      for (const ExperimentConfig& cfg : grid) {
        for (const auto& value : values) {
          nlohmann::json patch = nlohmann::json::parse(config_to_json(cfg));
          patch[axis] = value;
          expanded.push_back(config_from_json(patch.dump()));
        }
      }
      grid = std::move(expanded);
    }
    return grid;
  }
  // A plain flat config is a one-cell sweep.
  grid.push_back(config_from_json(j.dump()));
  return grid;
}

int cmd_sweep(const CommonOptions& common, const std::string& preset,
              const std::string& out_dir, int jobs) {
  std::vector<ExperimentConfig> grid;
  if (!preset.empty()) {
    ExperimentConfig base = common.resolve();
    grid = preset_grid(preset, base);
  } else if (!common.config_path.empty()) {
    grid = grid_from_config_file(common.config_path);
    // Explicit flags override every cell.
    for (ExperimentConfig& cfg : grid) {
      CommonOptions overlay = common;
      overlay.config_path.clear();
      nlohmann::json merged = nlohmann::json::parse(config_to_json(cfg));
      nlohmann::json flags = nlohmann::json::parse(config_to_json(overlay.resolve()));
      // resolve() starts from defaults; only copy explicitly-set flags.
      if (common.language_opt->count()) merged["language"] = flags["language"];
      if (common.dist_opt->count()) merged["distribution"] = flags["distribution"];
      if (common.window_opt->count()) merged["window"] = flags["window"];
      if (common.hidden_opt->count()) merged["hidden_units"] = flags["hidden_units"];
      if (common.epochs_opt->count()) merged["epochs"] = flags["epochs"];
      if (common.trials_opt->count()) merged["trials"] = flags["trials"];
      if (common.k_opt->count()) merged["k"] = flags["k"];
      if (common.max_n_opt->count()) merged["max_n"] = flags["max_n"];
      if (common.seed_opt->count()) merged["trial_seed_base"] = flags["trial_seed_base"];
      if (common.data_seed_opt->count()) merged["data_seed"] = flags["data_seed"];
      if (common.optimizer_opt->count()) merged["optimizer"] = flags["optimizer"];
      if (common.lr_opt->count()) merged["learning_rate"] = flags["learning_rate"];
      cfg = config_from_json(merged.dump());
    }
  } else {
    throw std::runtime_error("sweep needs --preset or --config");
  }

  nlohmann::json resolved;
  resolved["command"] = "sweep";
  resolved["out"] = out_dir;
  resolved["jobs"] = jobs;
  resolved["cells"] = nlohmann::json::array();
  for (const ExperimentConfig& cfg : grid)
    resolved["cells"].push_back(nlohmann::json::parse(config_to_json(cfg)));
  log_config(resolved);

  const int completed = run_sweep(grid, out_dir, jobs);
  std::cerr << "completed " << completed << "/" << grid.size() << " cells\n";
  return completed == static_cast<int>(grid.size()) ? 0 : 1;
}

int cmd_evaluate(const std::string& checkpoint, const std::string& language, int k,
                 int max_n) {
  const LstmParameters params = load_parameters(checkpoint);
  LanguageId lang = language_for_input_dim(params.input_size);
  if (!language.empty()) {
    lang = parse_language(language);
    if (input_dim(lang) != params.input_size)
      throw std::runtime_error("checkpoint input dimension " +
                               std::to_string(params.input_size) + " does not match " +
                               language);
  }
  const EvalConfig cfg(k, max_n);
  log_config({{"command", "evaluate"},
              {"checkpoint", checkpoint},
              {"language", to_string(lang)},
              {"k", cfg.k},
              {"max_n", cfg.max_n},
              {"hidden_units", params.hidden_size}});

  const ErrorProfile profile = evaluate(params, lang, cfg);
  std::cout << "errors:";
  for (int i = 1; i <= profile.k; ++i) {
    const auto e = profile.entry(i);
    std::cout << " e" << i << "=";
    if (e) std::cout << *e;
    else std::cout << "censored(>" << profile.max_n << ")";
  }
  std::cout << "\n";
  return 0;
}

int cmd_gradcheck(const std::string& language, int n, int hidden, std::int64_t seed,
                  double eps, double tol) {
  const LanguageId lang = parse_language(language);
  log_config({{"command", "gradcheck"},
              {"language", to_string(lang)},
              {"n", n},
              {"hidden", hidden},
              {"seed", seed},
              {"eps", eps},
              {"tol", tol}});
  const LstmParameters params =
      init_parameters(input_dim(lang), hidden, static_cast<std::uint64_t>(seed));
  const Sample sample = generate_sample(lang, n);
  const auto [analytic, loss] = backward(params, sample);
  const Gradients numeric = finite_difference_grad(params, sample, eps);
  const double err = max_relative_error(analytic, numeric);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", err);
  std::cout << "max relative error = " << buf << " (loss " << loss << ", tolerance " << tol
            << ")\n";
  return err <= tol ? 0 : 1;
}

int cmd_trace(const std::string& checkpoint, const std::string& language, int n,
              const std::string& out_dir, double rho_min) {
  const LstmParameters params = load_parameters(checkpoint);
  LanguageId lang = language_for_input_dim(params.input_size);
  if (!language.empty()) {
    lang = parse_language(language);
    if (input_dim(lang) != params.input_size)
      throw std::runtime_error("checkpoint input dimension " +
                               std::to_string(params.input_size) + " does not match " +
                               language);
  }
  log_config({{"command", "trace"},
              {"checkpoint", checkpoint},
              {"language", to_string(lang)},
              {"n", n},
              {"out", out_dir},
              {"rho_min", rho_min}});

  const std::vector<TraceRecord> trace = trace_sequence(params, lang, n);
  fs::create_directories(out_dir);
  write_trace_csv((fs::path(out_dir) / "trace_states.csv").string(),
                  (fs::path(out_dir) / "trace_predictions.csv").string(), trace);

  std::cout << "decoded: " << probe_failure_mode(params, lang, n) << "\n";
  const PhaseSegmentation seg = phase_boundaries(lang, n);
  for (const CounterUnit& unit : detect_counters(trace, seg, rho_min)) {
    std::cout << "counter unit " << unit.unit << ":";
    for (Direction dir : unit.phase_directions)
      std::cout << (dir == Direction::Up ? " up" : " down");
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Training and evaluation laboratory for LSTMs on the counting languages "
               "a^n b^n, a^n b^n c^n and a^n b^n c^n d^n"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Emit samples in the tabular input/target dump");
  std::string gen_language = "anbn";
  int gen_n = 0;
  int gen_count = 10;
  std::string gen_dist = "uniform";
  std::string gen_window = "1:50";
  std::int64_t gen_data_seed = 1;
  gen->add_option("--language", gen_language, "Language")->required();
  gen->add_option("--n", gen_n, "Emit the single sample with this n");
  gen->add_option("--count", gen_count, "Number of sampled strings when --n is absent");
  gen->add_option("--dist", gen_dist, "Length distribution for sampled strings");
  gen->add_option("--window", gen_window, "Length window LO:HI");
  gen->add_option("--data-seed", gen_data_seed, "Sampling seed");

  // train
  auto* train = app.add_subcommand("train", "Train one trial and record per-epoch results");
  CommonOptions train_opts;
  train_opts.attach(train);
  std::string train_out = "out";
  train->add_option("--out", train_out, "Output directory");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a grid of experiments");
  CommonOptions sweep_opts;
  sweep_opts.attach(sweep);
  std::string sweep_preset;
  std::string sweep_out = "sweep_out";
  int sweep_jobs = 1;
  sweep->add_option("--preset", sweep_preset, "distribution, window or capacity");
  sweep->add_option("--out", sweep_out, "Output directory");
  sweep->add_option("--jobs", sweep_jobs, "Parallel trials per cell");

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Error profile of a checkpoint");
  std::string eval_checkpoint;
  std::string eval_language;
  int eval_k = 5;
  int eval_max_n = 1000;
  evaluate_cmd->add_option("--checkpoint", eval_checkpoint, "Checkpoint path")->required();
  evaluate_cmd->add_option("--language", eval_language, "Language (default: from checkpoint)");
  evaluate_cmd->add_option("--k", eval_k, "Error-profile depth");
  evaluate_cmd->add_option("--max-n", eval_max_n, "Enumeration bound");

  // gradcheck
  auto* gradcheck = app.add_subcommand("gradcheck", "Compare BPTT against finite differences");
  std::string gc_language = "anbn";
  int gc_n = 3;
  int gc_hidden = 4;
  std::int64_t gc_seed = 1;
  double gc_eps = 1e-5;
  double gc_tol = 1e-5;
  gradcheck->add_option("--language", gc_language, "Language");
  gradcheck->add_option("--n", gc_n, "Sample parameter n");
  gradcheck->add_option("--hidden", gc_hidden, "Hidden units");
  gradcheck->add_option("--seed", gc_seed, "Init seed");
  gradcheck->add_option("--eps", gc_eps, "Finite-difference step");
  gradcheck->add_option("--tol", gc_tol, "Pass threshold");

  // trace
  auto* trace = app.add_subcommand("trace", "Record hidden/cell trajectories on a probe");
  std::string trace_checkpoint;
  std::string trace_language;
  int trace_n = 50;
  std::string trace_out = "trace_out";
  double trace_rho = 0.9;
  trace->add_option("--checkpoint", trace_checkpoint, "Checkpoint path")->required();
  trace->add_option("--language", trace_language, "Language (default: from checkpoint)");
  trace->add_option("--n", trace_n, "Probe parameter n");
  trace->add_option("--out", trace_out, "Output directory");
  trace->add_option("--rho-min", trace_rho, "Counter-detection threshold");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(gen_language, gen_n, gen_count, gen_dist, gen_window, gen_data_seed);
    if (train->parsed()) return cmd_train(train_opts, train_out);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, sweep_preset, sweep_out, sweep_jobs);
    if (evaluate_cmd->parsed())
      return cmd_evaluate(eval_checkpoint, eval_language, eval_k, eval_max_n);
    if (gradcheck->parsed())
      return cmd_gradcheck(gc_language, gc_n, gc_hidden, gc_seed, gc_eps, gc_tol);
    if (trace->parsed())
      return cmd_trace(trace_checkpoint, trace_language, trace_n, trace_out, trace_rho);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
