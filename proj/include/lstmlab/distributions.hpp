#pragma once

#include <string>
#include <vector>

#include "lstmlab/rng.hpp"

namespace lstmlab {

/// Closed interval [lo, hi] of sequence parameters n drawn during training.
struct LengthWindow {
  int lo = 1;
  int hi = 1;

  LengthWindow() = default;
  LengthWindow(int lo_, int hi_);

  int span() const { return hi - lo + 1; }
  bool operator==(const LengthWindow&) const = default;
};

/// How n is drawn over a window: discrete uniform, or a Beta-Binomial on
/// {0..N} with N = hi - lo shifted to start at lo.
struct DistributionSpec {
  enum class Kind { Uniform, BetaBinomial };

  Kind kind = Kind::Uniform;
  double alpha = 0.0;
  double beta = 0.0;

  static DistributionSpec uniform();
  static DistributionSpec beta_binomial(double alpha, double beta);
  static DistributionSpec u_shaped();      // alpha = beta = 0.25
  static DistributionSpec right_tailed();  // alpha = 1, beta = 5
  static DistributionSpec left_tailed();   // alpha = 5, beta = 1

  bool operator==(const DistributionSpec&) const = default;
};

/// ln B(alpha, beta) via log-gamma. Rejects non-positive arguments.
double ln_beta(double alpha, double beta);

/// Probability of drawing n. Returns 0 outside the window support.
double pmf(const DistributionSpec& spec, const LengthWindow& window, int n);

/// pmf evaluated over the whole window, index 0 corresponding to n = lo.
std::vector<double> pmf_table(const DistributionSpec& spec, const LengthWindow& window);

/// Inverse-CDF sampler over a precomputed pmf table. Deterministic given
/// the caller's generator state.
class LengthSampler {
 public:
  LengthSampler(const DistributionSpec& spec, const LengthWindow& window);

  int operator()(Rng& rng) const;
  const std::vector<double>& pmf() const { return pmf_; }
  const LengthWindow& window() const { return window_; }

 private:
  LengthWindow window_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

/// One-shot convenience around LengthSampler.
int sample_length(const DistributionSpec& spec, const LengthWindow& window, Rng& rng);

/// Accepted forms: "uniform", "u-shaped", "right-tailed", "left-tailed",
/// "beta-binomial:ALPHA,BETA".
DistributionSpec parse_distribution(const std::string& text);
std::string to_string(const DistributionSpec& spec);

/// Accepted form: "LO:HI".
LengthWindow parse_window(const std::string& text);
std::string to_string(const LengthWindow& window);

}  // namespace lstmlab
