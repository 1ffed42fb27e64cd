#include "lstmlab/evaluation.hpp"

#include <stdexcept>

namespace lstmlab {

EvalConfig::EvalConfig(int k_, int max_n_) : k(k_), max_n(max_n_) {
  if (k < 1) throw std::invalid_argument("EvalConfig: k must be >= 1");
  if (max_n < 1) throw std::invalid_argument("EvalConfig: max_n must be >= 1");
}

bool accepts(const LstmParameters& p, LanguageId lang, int n) {
  return predicts_targets(p, generate_sample(lang, n));
}

ErrorProfile evaluate_with(const std::function<bool(int)>& accept, const EvalConfig& cfg) {
  ErrorProfile profile;
  profile.k = cfg.k;
  profile.max_n = cfg.max_n;
  for (int n = 1; n <= cfg.max_n; ++n) {
    if (!accept(n)) {
      profile.failures.push_back(n);
      if (static_cast<int>(profile.failures.size()) == cfg.k) break;
    }
  }
  return profile;
}

ErrorProfile evaluate(const LstmParameters& p, LanguageId lang, const EvalConfig& cfg) {
  return evaluate_with([&](int n) { return accepts(p, lang, n); }, cfg);
}

}  // namespace lstmlab
