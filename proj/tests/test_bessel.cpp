// Squared-Bessel transitions: exact sampler laws, transition densities,
// path sampling and the dimension-change derivative.

#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "bmc/bessel.hpp"
#include "bmc/rng.hpp"
#include "bmc/stats.hpp"

using namespace bmc::bessel;

TEST_SUITE("bessel") {

TEST_CASE("zero is absorbing for dimension 0") {
  bmc::RngStream rng(1, 100);
  for (int i = 0; i < 200; ++i) CHECK(besq_transition_sample(0.0, 1.0, 0.0, rng) == 0.0);
}

TEST_CASE("t = 0 is the identity transition") {
  bmc::RngStream rng(1, 101);
  CHECK(besq_transition_sample(1.7, 0.0, 0.0, rng) == 1.7);
  CHECK(besq_transition_sample(1.7, 0.0, 3.0, rng) == 1.7);
}

TEST_CASE("input validation") {
  bmc::RngStream rng(1, 102);
  CHECK_THROWS(besq_transition_sample(-1.0, 1.0, 0.0, rng));
  CHECK_THROWS(besq_transition_sample(1.0, -1.0, 0.0, rng));
  CHECK_THROWS(besq_transition_sample(1.0, 1.0, -0.5, rng));
  CHECK_THROWS(besq_transition_density(-1.0, 1.0, 1.0, 0.0));
}

TEST_CASE("dimension-0 atom frequency is exp(-x/2t)") {
  bmc::RngStream rng(1, 103);
  const long n = 40000;
  long zeros = 0;
  for (long i = 0; i < n; ++i)
    if (besq_transition_sample(1.0, 1.0, 0.0, rng) == 0.0) ++zeros;
  double freq = static_cast<double>(zeros) / n;
  CHECK(freq == doctest::Approx(std::exp(-0.5)).epsilon(0.015));
}

TEST_CASE("transition mean is x + d t") {
  bmc::RngStream rng(1, 104);
  const long n = 200000;
  double s = 0.0;
  for (long i = 0; i < n; ++i) s += besq_transition_sample(1.0, 1.0, 3.0, rng);
  CHECK(s / n == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("transition density: atom mass and normalization") {
  auto q = besq_transition_density(1.0, 0.0, 1.0, 0.0);
  CHECK(q.atom == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

  // Continuous part + atom integrates to 1.  Substituting y = u^2 removes
  // the sqrt kink of the odd-dimension densities at the origin.
  for (auto [x, t, d] : std::vector<std::array<double, 3>>{
           {2.0, 0.5, 0.0}, {1.0, 1.0, 0.0}, {1.0, 1.0, 3.0}, {0.0, 1.0, 2.0}}) {
    const int n = 16000;
    const double hi = std::sqrt(80.0), h = hi / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      double u = i * h;
      double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      sum += w * besq_transition_density(x, u * u, t, d).density * 2.0 * u;
    }
    sum = sum * h / 3.0 + besq_transition_density(x, 0.0, t, d).atom;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("density from zero start reduces to the scaled chi-square") {
  // BESQ^3 from 0: Y_t = t * chi2_3, density y -> chi2_3(y/t)/t.
  for (double y : {0.5, 1.0, 3.0, 7.0}) {
    double t = 1.0;
    double chi2_3 = std::sqrt(y / t) * std::exp(-y / (2.0 * t)) /
                    std::sqrt(2.0 * M_PI);  // chi-square density, 3 dof
    CHECK(besq_transition_density(0.0, y, t, 3.0).density ==
          doctest::Approx(chi2_3 / t).epsilon(1e-10));
  }
}

TEST_CASE("log density matches the direct density") {
  auto q = besq_transition_density(1.0, 2.0, 1.0, 0.0);
  CHECK(std::exp(q.log_density) == doctest::Approx(q.density).epsilon(1e-12));
}

TEST_CASE("exact sampler agrees with Euler-Maruyama at step 1e-4") {
  const long n = 10000;
  std::vector<double> exact, euler;
  for (long i = 0; i < n; ++i) {
    bmc::RngStream r1(3, bmc::stream_id(40, 0, i));
    bmc::RngStream r2(3, bmc::stream_id(41, 0, i));
    exact.push_back(besq_transition_sample(1.0, 1.0, 0.0, r1));
    euler.push_back(besq_euler_maruyama(1.0, 1.0, 0.0, 1e-4, r2));
  }
  CHECK(!bmc::ks_two_sample(exact, euler).reject());
}

TEST_CASE("additivity: sum of independent BESQ0 draws vs summed start") {
  const long n = 10000;
  std::vector<double> sum3, single;
  for (long i = 0; i < n; ++i) {
    bmc::RngStream r1(4, bmc::stream_id(42, 0, i));
    bmc::RngStream r2(4, bmc::stream_id(43, 0, i));
    double s = besq_transition_sample(0.5, 1.0, 0.0, r1) +
               besq_transition_sample(0.7, 1.0, 0.0, r1) +
               besq_transition_sample(0.8, 1.0, 0.0, r1);
    sum3.push_back(s);
    single.push_back(besq_transition_sample(2.0, 1.0, 0.0, r2));
  }
  CHECK(!bmc::ks_two_sample(sum3, single).reject());
}

TEST_CASE("path from zero under dimension 0 is identically zero") {
  bmc::RngStream rng(5, 110);
  auto p = bessel_path_sample(0.0, 0.0, {0.5, 1.0, 2.0}, rng);
  for (double v : p.values) CHECK(v == 0.0);
  CHECK(p.touched_zero);
}

TEST_CASE("path absorption: a zero value stays zero afterwards") {
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(0.25 * i);
  for (long i = 0; i < 500; ++i) {
    bmc::RngStream rng(5, bmc::stream_id(44, 0, i));
    auto p = bessel_path_sample(0.7, 0.0, grid, rng);
    bool seen_zero = false;
    for (double v : p.values) {
      CHECK(v >= 0.0);
      if (seen_zero) CHECK(v == 0.0);
      if (v == 0.0) seen_zero = true;
    }
  }
}

TEST_CASE("path marginals: second moment and absorption mass at t=1") {
  const long n = 50000;
  double s2 = 0.0;
  long zeros = 0;
  for (long i = 0; i < n; ++i) {
    bmc::RngStream r3(6, bmc::stream_id(45, 0, i));
    bmc::RngStream r0(6, bmc::stream_id(46, 0, i));
    auto p3 = bessel_path_sample(1.0, 3.0, {1.0}, r3);
    auto p0 = bessel_path_sample(1.0, 0.0, {1.0}, r0);
    s2 += p3.values.back() * p3.values.back();
    if (p0.values.back() == 0.0) ++zeros;
  }
  CHECK(s2 / n == doctest::Approx(4.0).epsilon(0.02));
  CHECK(static_cast<double>(zeros) / n == doctest::Approx(std::exp(-0.5)).epsilon(0.015));
}

TEST_CASE("dimension-1 derivative is identically 1") {
  PathSample p;
  p.times = {0.0, 0.5, 1.0};
  p.values = {1.0, 0.3, 2.0};
  p.inv_square_integral = inv_square_integral_trapezoid(p.times, p.values);
  CHECK(rn_derivative_bessel(p, 1.0, 1.0, 1.0) == 1.0);
}

TEST_CASE("dimension-3 derivative on a constant path") {
  // a = 1 so the exponential factor has zero coefficient: the derivative
  // reduces to X_t/x = 1 exactly for a constant path.
  PathSample p;
  p.times = {0.0, 0.5, 1.0, 1.5, 2.0};
  p.values = {2.0, 2.0, 2.0, 2.0, 2.0};
  p.inv_square_integral = inv_square_integral_trapezoid(p.times, p.values);
  CHECK(rn_derivative_bessel(p, 2.0, 2.0, 3.0) == 1.0);
}

TEST_CASE("derivative rejects paths that touch zero") {
  PathSample p;
  p.times = {0.0, 0.5, 1.0};
  p.values = {1.0, 0.0, 0.5};
  p.touched_zero = true;
  p.inv_square_integral = inv_square_integral_trapezoid(p.times, p.values);
  CHECK_THROWS(rn_derivative_bessel(p, 1.0, 1.0, 3.0));
}

TEST_CASE("dimension transfer: E3[f] = E1[f RN, survive]") {
  // f = 1{X_1 < 2}, x = 1.  The dimension-1 side runs signed Brownian paths
  // with per-step positivity (bridge no-crossing) weights; RN for d=3 is
  // X_1/x with no integral term.
  const long n = 100000;
  double lhs = 0.0;
  for (long i = 0; i < n; ++i) {
    bmc::RngStream rng(7, bmc::stream_id(47, 0, i));
    lhs += besq_transition_sample(1.0, 1.0, 3.0, rng) < 4.0 ? 1.0 : 0.0;
  }
  lhs /= n;

  const int steps = 200;
  const double dt = 1.0 / steps;
  double rhs = 0.0;
  for (long i = 0; i < n; ++i) {
    bmc::RngStream rng(7, bmc::stream_id(48, 0, i));
    double w = 1.0, x = 1.0;
    for (int s = 0; s < steps && w > 0.0; ++s) {
      double xn = x + std::sqrt(dt) * rng.normal();
      if (xn <= 0.0) { w = 0.0; break; }
      w *= 1.0 - std::exp(-2.0 * x * xn / dt);
      x = xn;
    }
    if (w > 0.0 && x < 2.0) rhs += w * x;  // f * RN, RN = X_1/1
  }
  rhs /= n;
  CHECK(rhs == doctest::Approx(lhs).epsilon(0.02));
}

TEST_CASE("trapezoid inverse-square integral") {
  CHECK(inv_square_integral_trapezoid({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}) ==
        doctest::Approx(2.0));
  CHECK(std::isinf(inv_square_integral_trapezoid({0.0, 1.0}, {1.0, 0.0})));
}

}  // TEST_SUITE
