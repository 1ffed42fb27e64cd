#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lstmlab/distributions.hpp"
#include "support/stats.hpp"

using namespace lstmlab;

namespace {

const std::vector<DistributionSpec> kRegimes = {
    DistributionSpec::uniform(), DistributionSpec::u_shaped(),
    DistributionSpec::right_tailed(), DistributionSpec::left_tailed()};

const std::vector<LengthWindow> kWindows = {LengthWindow(1, 30), LengthWindow(1, 50),
                                            LengthWindow(50, 100)};

}  // namespace

TEST_CASE("ln_beta against high-precision values") {
  CHECK(ln_beta(1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  // B(1, m) = 1/m
  CHECK(ln_beta(1.0, 5.0) ==
        doctest::Approx(-1.6094379124341003).epsilon(1e-12));
  CHECK(ln_beta(0.25, 0.25) ==
        doctest::Approx(2.0036801064714548).epsilon(1e-12));
  CHECK(ln_beta(2.5, 3.5) ==
        doctest::Approx(-3.3018352699620526).epsilon(1e-12));
  CHECK(ln_beta(5.0, 1.0) == doctest::Approx(std::log(0.2)).epsilon(1e-12));
}

TEST_CASE("ln_beta rejects non-positive arguments") {
  CHECK_THROWS_AS(ln_beta(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ln_beta(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("uniform pmf") {
  const LengthWindow w(1, 50);
  CHECK(pmf(DistributionSpec::uniform(), w, 25) == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(pmf(DistributionSpec::uniform(), w, 51) == 0.0);
  CHECK(pmf(DistributionSpec::uniform(), w, 0) == 0.0);
}

TEST_CASE("beta-binomial pmf closed-form and oracle values") {
  const LengthWindow w(1, 50);
  // alpha = 1: P(x = 0) = B(1, N + beta) / B(1, beta) = beta / (N + beta)
  CHECK(pmf(DistributionSpec::right_tailed(), w, 1) ==
        doctest::Approx(5.0 / 54.0).epsilon(1e-12));
  CHECK(pmf(DistributionSpec::u_shaped(), w, 25) ==
        doctest::Approx(0.0077458494802574832).epsilon(1e-10));
  CHECK(pmf(DistributionSpec::left_tailed(), LengthWindow(1, 30), 30) ==
        doctest::Approx(5.0 / 34.0).epsilon(1e-12));
  CHECK(pmf(DistributionSpec::u_shaped(), w, 0) == 0.0);
  CHECK(pmf(DistributionSpec::u_shaped(), w, 51) == 0.0);
}

TEST_CASE("pmf sums to one on every regime and window") {
  for (const auto& spec : kRegimes) {
    for (const auto& window : kWindows) {
      const std::vector<double> table = pmf_table(spec, window);
      const double total = std::accumulate(table.begin(), table.end(), 0.0);
      CHECK(std::fabs(total - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("symmetric parameters give symmetric pmfs") {
  for (double a : {0.25, 2.0}) {
    const DistributionSpec spec = DistributionSpec::beta_binomial(a, a);
    for (const auto& window : kWindows) {
      CHECK(std::fabs(pmf(spec, window, window.lo) - pmf(spec, window, window.hi)) < 1e-12);
    }
  }
}

TEST_CASE("shape checks: tails and the U") {
  for (const auto& window : kWindows) {
    const std::vector<double> right = pmf_table(DistributionSpec::right_tailed(), window);
    CHECK(std::max_element(right.begin(), right.end()) == right.begin());

    const std::vector<double> left = pmf_table(DistributionSpec::left_tailed(), window);
    CHECK(std::max_element(left.begin(), left.end()) == left.end() - 1);

    const std::vector<double> u = pmf_table(DistributionSpec::u_shaped(), window);
    const double mid = u[u.size() / 2];
    CHECK(u.front() > mid);
    CHECK(u.back() > mid);
  }
}

TEST_CASE("singleton window always returns its one value") {
  const LengthWindow w(7, 7);
  Rng rng(123);
  for (const auto& spec : kRegimes)
    for (int i = 0; i < 20; ++i) CHECK(sample_length(spec, w, rng) == 7);
}

TEST_CASE("sampling is deterministic given the seed and stays in support") {
  const LengthWindow w(1, 50);
  const LengthSampler sampler(DistributionSpec::u_shaped(), w);
  Rng rng_a(99), rng_b(99);
  for (int i = 0; i < 200; ++i) {
    const int a = sampler(rng_a);
    CHECK(a == sampler(rng_b));
    CHECK(a >= 1);
    CHECK(a <= 50);
  }
}

TEST_CASE("empirical frequency matches the pmf on a large uniform draw") {
  const LengthWindow w(1, 50);
  const LengthSampler sampler(DistributionSpec::uniform(), w);
  Rng rng(2024);
  int ones = 0;
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i)
    if (sampler(rng) == 1) ++ones;
  const double freq = static_cast<double>(ones) / draws;
  CHECK(std::fabs(freq - 0.02) < 0.001);
}

TEST_CASE("chi-square goodness of fit on U-shaped samples") {
  const LengthWindow w(1, 50);
  const LengthSampler sampler(DistributionSpec::u_shaped(), w);
  Rng rng(7);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(w.span()), 0);
  for (int i = 0; i < 100000; ++i) ++counts[static_cast<std::size_t>(sampler(rng) - 1)];
  const auto gof = testing::chi_square_gof(counts, sampler.pmf());
  CHECK(gof.p_value > 0.001);
}

TEST_CASE("gamma_q matches reference values") {
  CHECK(testing::gamma_q(24.5, 30.0) == doctest::Approx(0.1348643465253207).epsilon(1e-10));
  CHECK(testing::gamma_q(0.5, 1.2) == doctest::Approx(0.12133525035848208).epsilon(1e-10));
}

TEST_CASE("window validation and parsing") {
  CHECK_THROWS_AS(LengthWindow(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(LengthWindow(6, 5), std::invalid_argument);
  CHECK(parse_window("50:100") == LengthWindow(50, 100));
  CHECK_THROWS_AS(parse_window("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_window("5:4"), std::invalid_argument);
  CHECK(to_string(LengthWindow(1, 30)) == "1:30");
}

TEST_CASE("distribution string round trips") {
  CHECK(parse_distribution("uniform") == DistributionSpec::uniform());
  CHECK(parse_distribution("u-shaped") == DistributionSpec::u_shaped());
  CHECK(parse_distribution("right-tailed") == DistributionSpec::right_tailed());
  CHECK(parse_distribution("left-tailed") == DistributionSpec::left_tailed());
  CHECK(parse_distribution("beta-binomial:2.5,3") ==
        DistributionSpec::beta_binomial(2.5, 3.0));
  CHECK(to_string(DistributionSpec::u_shaped()) == "u-shaped");
  CHECK(parse_distribution(to_string(DistributionSpec::beta_binomial(2.5, 3.0))) ==
        DistributionSpec::beta_binomial(2.5, 3.0));
  CHECK_THROWS_AS(parse_distribution("gaussian"), std::invalid_argument);
  CHECK_THROWS_AS(parse_distribution("beta-binomial:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_distribution("beta-binomial:0,1"), std::invalid_argument);
}
