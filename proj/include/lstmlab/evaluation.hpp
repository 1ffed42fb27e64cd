#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lstmlab/languages.hpp"
#include "lstmlab/lstm.hpp"

namespace lstmlab {

struct EvalConfig {
  int k = 5;          // number of shortest failures to collect
  int max_n = 1000;   // enumeration bound; unfilled slots are censored

  EvalConfig() = default;
  EvalConfig(int k_, int max_n_);
};

/// The first k shortest failing n values, in increasing order. Slots the
/// enumeration never filled before reaching max_n are censored, never
/// encoded as sentinel numbers.
struct ErrorProfile {
  std::vector<int> failures;  // strictly increasing, size <= k
  int k = 5;
  int max_n = 1000;
  std::optional<double> loss_at_eval;

  int censored_count() const { return k - static_cast<int>(failures.size()); }

  /// e_i for i in [1, k]; nullopt when that slot is censored.
  std::optional<int> entry(int i) const {
    if (i < 1 || i > k) return std::nullopt;
    if (i > static_cast<int>(failures.size())) return std::nullopt;
    return failures[static_cast<std::size_t>(i - 1)];
  }
};

/// Runs the frozen network on generate_sample(lang, n) from the zero
/// state, decodes every timestep at threshold 0.5, and accepts iff every
/// position matches its target set.
bool accepts(const LstmParameters& p, LanguageId lang, int n);

/// Enumerates n = 1, 2, ... collecting failures until k of them are found
/// or n exceeds cfg.max_n. `accept` is any predicate on n.
ErrorProfile evaluate_with(const std::function<bool(int)>& accept, const EvalConfig& cfg);

/// evaluate_with over the real model.
ErrorProfile evaluate(const LstmParameters& p, LanguageId lang, const EvalConfig& cfg);

}  // namespace lstmlab
