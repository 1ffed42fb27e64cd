#include "lstmlab/distributions.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lstmlab {

LengthWindow::LengthWindow(int lo_, int hi_) : lo(lo_), hi(hi_) {
  if (lo < 1 || hi < lo)
    throw std::invalid_argument("length window requires 1 <= lo <= hi, got [" +
                                std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
}

DistributionSpec DistributionSpec::uniform() { return {Kind::Uniform, 0.0, 0.0}; }

DistributionSpec DistributionSpec::beta_binomial(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("beta-binomial requires alpha > 0 and beta > 0");
  return {Kind::BetaBinomial, alpha, beta};
}

DistributionSpec DistributionSpec::u_shaped() { return beta_binomial(0.25, 0.25); }
DistributionSpec DistributionSpec::right_tailed() { return beta_binomial(1.0, 5.0); }
DistributionSpec DistributionSpec::left_tailed() { return beta_binomial(5.0, 1.0); }

double ln_beta(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("ln_beta requires positive arguments");
  return std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
}

namespace {

double ln_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double pmf(const DistributionSpec& spec, const LengthWindow& window, int n) {
  if (n < window.lo || n > window.hi) return 0.0;
  if (spec.kind == DistributionSpec::Kind::Uniform)
    return 1.0 / static_cast<double>(window.span());

  // BetaBin(N, alpha, beta) on x in {0..N}, shifted so that n = lo + x.
  const int N = window.hi - window.lo;
  const int x = n - window.lo;
  const double log_p = ln_choose(N, x) +
                       ln_beta(x + spec.alpha, N - x + spec.beta) -
                       ln_beta(spec.alpha, spec.beta);
  return std::exp(log_p);
}

std::vector<double> pmf_table(const DistributionSpec& spec, const LengthWindow& window) {
  std::vector<double> table(static_cast<std::size_t>(window.span()));
  for (int n = window.lo; n <= window.hi; ++n)
    table[static_cast<std::size_t>(n - window.lo)] = pmf(spec, window, n);
  return table;
}

LengthSampler::LengthSampler(const DistributionSpec& spec, const LengthWindow& window)
    : window_(window), pmf_(pmf_table(spec, window)) {
  cdf_.resize(pmf_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf_.size(); ++i) {
    acc += pmf_[i];
    cdf_[i] = acc;
  }
}

int LengthSampler::operator()(Rng& rng) const {
  const double u = rng.next_double();
  for (std::size_t i = 0; i < cdf_.size(); ++i)
    if (u < cdf_[i]) return window_.lo + static_cast<int>(i);
  return window_.hi;  // cdf tops out a hair below 1
}

int sample_length(const DistributionSpec& spec, const LengthWindow& window, Rng& rng) {
  return LengthSampler(spec, window)(rng);
}

DistributionSpec parse_distribution(const std::string& text) {
  if (text == "uniform") return DistributionSpec::uniform();
  if (text == "u-shaped") return DistributionSpec::u_shaped();
  if (text == "right-tailed") return DistributionSpec::right_tailed();
  if (text == "left-tailed") return DistributionSpec::left_tailed();
  const std::string prefix = "beta-binomial:";
  if (text.rfind(prefix, 0) == 0) {
    double alpha = 0.0, beta = 0.0;
    char trailing = 0;
    const int got = std::sscanf(text.c_str() + prefix.size(), "%lf,%lf%c", &alpha, &beta, &trailing);
    if (got != 2)
      throw std::invalid_argument("malformed distribution '" + text +
                                  "' (expected beta-binomial:ALPHA,BETA)");
    return DistributionSpec::beta_binomial(alpha, beta);
  }
  throw std::invalid_argument("unknown distribution '" + text +
                              "' (expected uniform, u-shaped, right-tailed, left-tailed "
                              "or beta-binomial:ALPHA,BETA)");
}

std::string to_string(const DistributionSpec& spec) {
  if (spec.kind == DistributionSpec::Kind::Uniform) return "uniform";
  if (spec == DistributionSpec::u_shaped()) return "u-shaped";
  if (spec == DistributionSpec::right_tailed()) return "right-tailed";
  if (spec == DistributionSpec::left_tailed()) return "left-tailed";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "beta-binomial:%g,%g", spec.alpha, spec.beta);
  return buf;
}

LengthWindow parse_window(const std::string& text) {
  int lo = 0, hi = 0;
  char trailing = 0;
  if (std::sscanf(text.c_str(), "%d:%d%c", &lo, &hi, &trailing) != 2)
    throw std::invalid_argument("malformed window '" + text + "' (expected LO:HI)");
  return LengthWindow(lo, hi);
}

std::string to_string(const LengthWindow& window) {
  return std::to_string(window.lo) + ":" + std::to_string(window.hi);
}

}  // namespace lstmlab
