#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lstmlab/distributions.hpp"
#include "lstmlab/evaluation.hpp"
#include "lstmlab/languages.hpp"
#include "lstmlab/lstm.hpp"

namespace lstmlab {

/// Which tensors get fresh draws per trial: everything, or only the
/// recurrent matrices W_h* (input weights, biases and readout then stay
/// identical across trials).
enum class ReseedScope { All, RecurrentOnly };

/// One cell of a sweep grid.
struct ExperimentConfig {
  LanguageId language = LanguageId::AnBn;
  DistributionSpec distribution = DistributionSpec::uniform();
  LengthWindow window{1, 50};
  int hidden_units = 2;
  int training_set_size = 1000;
  int epochs = 100;
  int trials = 10;
  EvalConfig eval;
  OptimizerState::Rule optimizer = OptimizerState::Rule::Adam;
  double learning_rate = 1e-3;
  std::int64_t data_seed = 1;
  std::int64_t trial_seed_base = 1000;
  bool resample_per_epoch = false;  // fresh training set each epoch (ablation)
  ReseedScope reseed = ReseedScope::All;

  /// Short directory-safe identifier, e.g. "anbn_uniform_1-50_h2".
  std::string cell_name() const;
};

/// One row of the generalization graph.
struct EpochRecord {
  int trial = 0;
  int epoch = 0;
  double training_loss = 0.0;  // mean per-sequence loss seen during the epoch
  ErrorProfile error_profile;
};

struct TrialResult {
  std::vector<EpochRecord> records;
  LstmParameters final_params;
};

/// training_set_size samples with n drawn i.i.d. from the configured
/// distribution using data_seed. Fixed across trials and epochs.
std::vector<Sample> build_training_set(const ExperimentConfig& cfg);

/// Trains one freshly seeded network: per epoch, shuffle the training
/// set, one update per sample, then freeze and evaluate. Aborts with a
/// diagnostic on non-finite loss.
TrialResult run_trial(const ExperimentConfig& cfg, int trial_index);

/// Capacity sweep per language: {1,2,3,36}, {2,3,4,36}, {3,4,5,36}.
std::vector<int> capacity_grid(LanguageId lang);

/// Runs every cell of the grid (trials optionally in parallel) and writes
/// per-trial CSVs plus an aggregate CSV per cell under out_dir. A failed
/// cell is recorded in failures.txt and does not abort the sweep.
/// Returns the number of cells that completed.
int run_sweep(const std::vector<ExperimentConfig>& grid, const std::string& out_dir,
              int jobs = 1);

/// Per-trial records as CSV:
/// trial,epoch,loss,e1..ek,e1_censored..ek_censored. Censored slots hold
/// an empty value and a raised flag.
void write_trial_csv(const std::string& path, const std::vector<EpochRecord>& records,
                     int k);

/// Cross-trial aggregate per epoch:
/// epoch,mean_e1..mean_ek,censored_trials_e1..censored_trials_ek. Means
/// are taken over concrete values only; a slot censored in every trial
/// yields an empty mean.
void write_aggregate_csv(const std::string& path,
                         const std::vector<std::vector<EpochRecord>>& trials, int k);

/// Flat JSON document mirroring the ExperimentConfig field names.
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

}  // namespace lstmlab
