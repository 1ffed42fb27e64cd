#include "lstmlab/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace lstmlab {

namespace {

// Stream separator so the shuffle order is independent of the draws that
// built the training set, yet still a pure function of data_seed.
constexpr std::uint64_t kShuffleStream = 0x9e3779b97f4a7c15ull;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ':' || c == ',' || c == '.') c = '-';
  return s;
}

}  // namespace

std::string ExperimentConfig::cell_name() const {
  return to_string(language) + "_" + sanitize(to_string(distribution)) + "_" +
         std::to_string(window.lo) + "-" + std::to_string(window.hi) + "_h" +
         std::to_string(hidden_units);
}

std::vector<Sample> build_training_set(const ExperimentConfig& cfg) {
  Rng rng(static_cast<std::uint64_t>(cfg.data_seed));
  const LengthSampler sampler(cfg.distribution, cfg.window);
  std::vector<Sample> set;
  set.reserve(static_cast<std::size_t>(cfg.training_set_size));
  for (int i = 0; i < cfg.training_set_size; ++i)
    set.push_back(generate_sample(cfg.language, sampler(rng)));
  return set;
}

TrialResult run_trial(const ExperimentConfig& cfg, int trial_index) {
  const int d = input_dim(cfg.language);
  const std::uint64_t trial_seed =
      static_cast<std::uint64_t>(cfg.trial_seed_base) + static_cast<std::uint64_t>(trial_index);

  LstmParameters params;
  if (cfg.reseed == ReseedScope::All) {
    params = init_parameters(d, cfg.hidden_units, trial_seed);
  } else {
    // Shared non-recurrent tensors; only W_h* varies across trials.
    params = init_parameters(d, cfg.hidden_units, static_cast<std::uint64_t>(cfg.trial_seed_base));
    const double bound = 1.0 / std::sqrt(static_cast<double>(cfg.hidden_units));
    Rng rng(trial_seed ^ kShuffleStream);
    for (Matrix* m : {&params.w_hi, &params.w_hf, &params.w_hg, &params.w_ho})
      for (double& w : m->data) w = rng.next_double(-bound, bound);
  }

  OptimizerState opt = cfg.optimizer == OptimizerState::Rule::Adam
                           ? OptimizerState::adam(params, cfg.learning_rate)
                           : OptimizerState::sgd(params, cfg.learning_rate);

  std::vector<Sample> training_set = build_training_set(cfg);
  // Presentation order is data, not weights: it comes from data_seed and is
  // identical across trials so that trials differ only in initialization.
  Rng order_rng(static_cast<std::uint64_t>(cfg.data_seed) ^ kShuffleStream);
  Rng resample_rng(static_cast<std::uint64_t>(cfg.data_seed) + 1);
  const LengthSampler sampler(cfg.distribution, cfg.window);

  std::vector<std::size_t> order(training_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrialResult result;
  result.records.reserve(static_cast<std::size_t>(cfg.epochs));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.resample_per_epoch && epoch > 0) {
      training_set.clear();
      for (int i = 0; i < cfg.training_set_size; ++i)
        training_set.push_back(generate_sample(cfg.language, sampler(resample_rng)));
    }
    order_rng.shuffle(order);

    double loss_sum = 0.0;
    for (std::size_t idx : order) {
      auto [grad, loss] = backward(params, training_set[idx]);
      if (!std::isfinite(loss))
        throw std::runtime_error("non-finite training loss in cell " + cfg.cell_name() +
                                 ", trial " + std::to_string(trial_index) + ", epoch " +
                                 std::to_string(epoch));
      loss_sum += loss;
      apply_update(params, grad, opt);
    }

    EpochRecord record;
    record.trial = trial_index;
    record.epoch = epoch;
    record.training_loss = loss_sum / static_cast<double>(training_set.size());
    record.error_profile = evaluate(params, cfg.language, cfg.eval);
    record.error_profile.loss_at_eval = record.training_loss;
    result.records.push_back(std::move(record));
  }
  result.final_params = std::move(params);
  return result;
}

std::vector<int> capacity_grid(LanguageId lang) {
  switch (lang) {
    case LanguageId::AnBn: return {1, 2, 3, 36};
    case LanguageId::AnBnCn: return {2, 3, 4, 36};
    case LanguageId::AnBnCnDn: return {3, 4, 5, 36};
  }
  throw std::invalid_argument("capacity_grid: unknown language");
}

namespace {

void write_file_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw std::runtime_error("failed writing: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string trial_csv_header(int k) {
  std::string header = "trial,epoch,loss";
  for (int i = 1; i <= k; ++i) header += ",e" + std::to_string(i);
  for (int i = 1; i <= k; ++i) header += ",e" + std::to_string(i) + "_censored";
  return header;
}

}  // namespace

void write_trial_csv(const std::string& path, const std::vector<EpochRecord>& records,
                     int k) {
  std::string body = trial_csv_header(k) + "\n";
  for (const EpochRecord& r : records) {
    body += std::to_string(r.trial) + "," + std::to_string(r.epoch) + "," +
            format_double(r.training_loss);
    for (int i = 1; i <= k; ++i) {
      const auto e = r.error_profile.entry(i);
      body += ",";
      if (e) body += std::to_string(*e);
    }
    for (int i = 1; i <= k; ++i)
      body += r.error_profile.entry(i) ? ",0" : ",1";
    body += "\n";
  }
  write_file_atomically(path, body);
}

void write_aggregate_csv(const std::string& path,
                         const std::vector<std::vector<EpochRecord>>& trials, int k) {
  std::string body = "epoch";
  for (int i = 1; i <= k; ++i) body += ",mean_e" + std::to_string(i);
  for (int i = 1; i <= k; ++i) body += ",censored_trials_e" + std::to_string(i);
  body += "\n";

  std::size_t epochs = 0;
  for (const auto& t : trials) epochs = std::max(epochs, t.size());
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    body += std::to_string(epoch);
    std::string censored_cols;
    for (int i = 1; i <= k; ++i) {
      double sum = 0.0;
      int concrete = 0, censored = 0;
      for (const auto& t : trials) {
        if (epoch >= t.size()) continue;
        const auto e = t[epoch].error_profile.entry(i);
        if (e) {
          sum += *e;
          ++concrete;
        } else {
          ++censored;
        }
      }
      body += ",";
      if (concrete > 0) body += format_double(sum / concrete);
      censored_cols += "," + std::to_string(censored);
    }
    body += censored_cols + "\n";
  }
  write_file_atomically(path, body);
}

namespace {

std::vector<TrialResult> run_trials(const ExperimentConfig& cfg, int jobs) {
  std::vector<TrialResult> results(static_cast<std::size_t>(cfg.trials));
  if (jobs <= 1) {
    for (int i = 0; i < cfg.trials; ++i) results[static_cast<std::size_t>(i)] = run_trial(cfg, i);
    return results;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.trials));
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= cfg.trials) return;
      try {
        results[static_cast<std::size_t>(i)] = run_trial(cfg, i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min(jobs, cfg.trials);
  pool.reserve(static_cast<std::size_t>(n_threads));
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace

int run_sweep(const std::vector<ExperimentConfig>& grid, const std::string& out_dir,
              int jobs) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  int completed = 0;
  for (const ExperimentConfig& cfg : grid) {
    const fs::path cell_dir = fs::path(out_dir) / cfg.cell_name();
    try {
      fs::create_directories(cell_dir);
      write_file_atomically((cell_dir / "config.json").string(), config_to_json(cfg) + "\n");
      const std::vector<TrialResult> results = run_trials(cfg, jobs);
      std::vector<std::vector<EpochRecord>> record_sets;
      record_sets.reserve(results.size());
      for (std::size_t i = 0; i < results.size(); ++i) {
        write_trial_csv((cell_dir / ("trial_" + std::to_string(i) + ".csv")).string(),
                        results[i].records, cfg.eval.k);
        record_sets.push_back(results[i].records);
      }
      write_aggregate_csv((cell_dir / "aggregate.csv").string(), record_sets, cfg.eval.k);
      ++completed;
    } catch (const std::exception& e) {
      std::ofstream log(fs::path(out_dir) / "failures.txt", std::ios::app);
      log << cfg.cell_name() << ": " << e.what() << "\n";
    }
  }
  return completed;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["language"] = to_string(cfg.language);
  j["distribution"] = to_string(cfg.distribution);
  j["window"] = to_string(cfg.window);
  j["hidden_units"] = cfg.hidden_units;
  j["training_set_size"] = cfg.training_set_size;
  j["epochs"] = cfg.epochs;
  j["trials"] = cfg.trials;
  j["k"] = cfg.eval.k;
  j["max_n"] = cfg.eval.max_n;
  j["optimizer"] = cfg.optimizer == OptimizerState::Rule::Adam ? "adam" : "sgd";
  j["learning_rate"] = cfg.learning_rate;
  j["data_seed"] = cfg.data_seed;
  j["trial_seed_base"] = cfg.trial_seed_base;
  j["resample_per_epoch"] = cfg.resample_per_epoch;
  j["reseed"] = cfg.reseed == ReseedScope::All ? "all" : "recurrent";
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("unreadable config: ") + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("unreadable config: expected a JSON object");

  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "language") cfg.language = parse_language(value.get<std::string>());
    else if (key == "distribution") cfg.distribution = parse_distribution(value.get<std::string>());
    else if (key == "window") cfg.window = parse_window(value.get<std::string>());
    else if (key == "hidden_units") cfg.hidden_units = value.get<int>();
    else if (key == "training_set_size") cfg.training_set_size = value.get<int>();
    else if (key == "epochs") cfg.epochs = value.get<int>();
    else if (key == "trials") cfg.trials = value.get<int>();
    else if (key == "k") cfg.eval.k = value.get<int>();
    else if (key == "max_n") cfg.eval.max_n = value.get<int>();
    else if (key == "optimizer") {
      const std::string name = value.get<std::string>();
      if (name == "adam") cfg.optimizer = OptimizerState::Rule::Adam;
      else if (name == "sgd") cfg.optimizer = OptimizerState::Rule::Sgd;
      else throw std::runtime_error("unknown optimizer '" + name + "'");
    } else if (key == "learning_rate") cfg.learning_rate = value.get<double>();
    else if (key == "data_seed") cfg.data_seed = value.get<std::int64_t>();
    else if (key == "trial_seed_base") cfg.trial_seed_base = value.get<std::int64_t>();
    else if (key == "resample_per_epoch") cfg.resample_per_epoch = value.get<bool>();
    else if (key == "reseed") {
      const std::string name = value.get<std::string>();
      if (name == "all") cfg.reseed = ReseedScope::All;
      else if (name == "recurrent") cfg.reseed = ReseedScope::RecurrentOnly;
      else throw std::runtime_error("unknown reseed scope '" + name + "'");
    } else {
      throw std::runtime_error("unknown config key '" + key + "'");
    }
  }
  if (cfg.trials < 1) throw std::runtime_error("config: trials must be >= 1");
  if (cfg.training_set_size < 1) throw std::runtime_error("config: training_set_size must be >= 1");
  if (cfg.epochs < 0) throw std::runtime_error("config: epochs must be >= 0");
  if (cfg.hidden_units < 1) throw std::runtime_error("config: hidden_units must be >= 1");
  if (cfg.eval.k < 1 || cfg.eval.max_n < 1) throw std::runtime_error("config: k and max_n must be >= 1");
  if (!(cfg.learning_rate > 0)) throw std::runtime_error("config: learning_rate must be positive");
  return cfg;
}

}  // namespace lstmlab
