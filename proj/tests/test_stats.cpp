// Statistics toolbox: summaries, quantiles, Kolmogorov-Smirnov tests and
// least-squares fits against hand-computed oracles.

#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "bmc/rng.hpp"
#include "bmc/stats.hpp"

TEST_SUITE("stats") {

TEST_CASE("summarize on a hand-computed sample") {
  bmc::Summary s = bmc::summarize({1.0, 2.0, 3.0, 4.0});
  CHECK(s.n == 4);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(s.se == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(s.ci95_lo() < s.mean);
  CHECK(s.ci95_hi() > s.mean);
}

TEST_CASE("summarize of an empty sample is all zero") {
  bmc::Summary s = bmc::summarize({});
  CHECK(s.n == 0);
  CHECK(s.mean == 0.0);
}

TEST_CASE("median, odd and even lengths") {
  CHECK(bmc::median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(bmc::median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  CHECK_THROWS_AS(bmc::median({}), std::invalid_argument);
}

TEST_CASE("quantile interpolates") {
  std::vector<double> xs = {0.0, 1.0, 2.0, 3.0, 4.0};
  CHECK(bmc::quantile(xs, 0.0) == 0.0);
  CHECK(bmc::quantile(xs, 1.0) == 4.0);
  CHECK(bmc::quantile(xs, 0.5) == 2.0);
  CHECK(bmc::quantile(xs, 0.25) == 1.0);
  CHECK(bmc::quantile(xs, 0.375) == doctest::Approx(1.5));
}

TEST_CASE("kolmogorov tail endpoints") {
  CHECK(bmc::kolmogorov_tail(0.0) == 1.0);
  CHECK(bmc::kolmogorov_tail(1e9) == 0.0);
  // K(1.36) ~ 0.049 (the classical 5% point).
  CHECK(bmc::kolmogorov_tail(1.36) == doctest::Approx(0.049).epsilon(0.05));
}

TEST_CASE("two-sample KS accepts identical laws and rejects a shift") {
  bmc::RngStream rng(5, 1);
  std::vector<double> a, b, c;
  for (int i = 0; i < 4000; ++i) {
    a.push_back(rng.normal());
    b.push_back(rng.normal());
    c.push_back(rng.normal() + 0.5);
  }
  CHECK(!bmc::ks_two_sample(a, b).reject());
  CHECK(bmc::ks_two_sample(a, c).reject());
}

TEST_CASE("one-sample KS against the exact uniform CDF") {
  bmc::RngStream rng(5, 2);
  std::vector<double> u;
  for (int i = 0; i < 4000; ++i) u.push_back(rng.uniform());
  auto cdf = [](double x) { return x < 0 ? 0.0 : (x > 1 ? 1.0 : x); };
  CHECK(!bmc::ks_one_sample(u, cdf).reject());
  // Squaring the draws changes the law.
  for (double& x : u) x = x * x;
  CHECK(bmc::ks_one_sample(u, cdf).reject());
}

TEST_CASE("KS statistic bounds") {
  auto r = bmc::ks_two_sample({1.0, 2.0}, {10.0, 11.0});
  CHECK(r.statistic == doctest::Approx(1.0));
}

TEST_CASE("chi-square quantile sanity") {
  // Exact values: chi2_{0.999}(99) = 148.23, chi2_{0.95}(10) = 18.307.
  CHECK(bmc::chi_square_quantile(0.999, 99.0) == doctest::Approx(148.23).epsilon(0.01));
  CHECK(bmc::chi_square_quantile(0.95, 10.0) == doctest::Approx(18.307).epsilon(0.01));
}

TEST_CASE("line fit recovers exact slope and intercept") {
  std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
  std::vector<double> y;
  for (double xi : x) y.push_back(-0.5 * xi + 3.0);
  auto f = bmc::fit_line(x, y);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(bmc::fit_line({1.0}, {1.0}), std::invalid_argument);
}

}  // TEST_SUITE
