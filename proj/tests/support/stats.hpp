#pragma once

// Goodness-of-fit helpers for the sampling tests. Self-contained so the
// checks stay independent of the code under test.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lstmlab::testing {

/// Regularized upper incomplete gamma Q(a, x): series for the lower part
/// when x < a + 1, Lentz continued fraction otherwise.
inline double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - lg);
    return 1.0 - p;
  }
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - lg) * h;
}

struct GofResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
};

/// Pearson chi-square against expected probabilities. Bins with expected
/// count below min_expected are pooled left to right; a short tail folds
/// into the last kept bin.
inline GofResult chi_square_gof(const std::vector<std::int64_t>& observed,
                                const std::vector<double>& probabilities,
                                double min_expected = 5.0) {
  if (observed.size() != probabilities.size())
    throw std::invalid_argument("chi_square_gof: size mismatch");
  std::int64_t total = 0;
  for (std::int64_t o : observed) total += o;

  std::vector<std::pair<double, double>> pooled;  // (observed, expected)
  double acc_obs = 0.0, acc_exp = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    acc_obs += static_cast<double>(observed[i]);
    acc_exp += probabilities[i] * static_cast<double>(total);
    if (acc_exp >= min_expected) {
      pooled.emplace_back(acc_obs, acc_exp);
      acc_obs = acc_exp = 0.0;
    }
  }
  if (acc_exp > 0.0) {
    if (pooled.empty()) {
      pooled.emplace_back(acc_obs, acc_exp);
    } else {
      pooled.back().first += acc_obs;
      pooled.back().second += acc_exp;
    }
  }
  if (pooled.size() < 2) throw std::invalid_argument("chi_square_gof: too few bins");

  GofResult result;
  for (const auto& [obs, exp] : pooled) {
    const double diff = obs - exp;
    result.statistic += diff * diff / exp;
  }
  result.dof = static_cast<int>(pooled.size()) - 1;
  result.p_value = gamma_q(result.dof / 2.0, result.statistic / 2.0);
  return result;
}

}  // namespace lstmlab::testing
