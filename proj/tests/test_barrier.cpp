// Barrier lab: closed forms, the angular density and its two representations,
// change-of-measure agreement and 3D-Bessel moment bounds.

#include <cmath>
#include <vector>

#include <doctest.h>

#include "bmc/barrier.hpp"
#include "bmc/stats.hpp"

using namespace bmc::barrier;

TEST_SUITE("barrier") {

TEST_CASE("linear barrier closed form") {
  CHECK(bm_linear_barrier_closed_form(1.0, 0.5) ==
        doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(bm_linear_barrier_closed_form(2.0, 1.0) ==
        doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-12));
  CHECK(bm_linear_barrier_closed_form(1e-9, 0.5) < 1e-8);
  CHECK_THROWS(bm_linear_barrier_closed_form(-1.0, 0.5));
  CHECK_THROWS(bm_linear_barrier_closed_form(1.0, 0.0));
}

TEST_CASE("Monte Carlo linear barrier matches the closed form") {
  BarrierSpec spec;
  spec.kind = BarrierSpec::Kind::linear;
  spec.mode = BarrierSpec::Mode::continuous_supremum;
  spec.slope = 0.5;
  spec.intercept = 1.0;
  spec.horizon = 40.0;
  auto v = mc_barrier_probability(spec, 40000, 0.05, 42, 1);
  CHECK(v.estimate == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(0.03));
  CHECK(v.ci_lo <= v.estimate);
  CHECK(v.ci_hi >= v.estimate);
  CHECK(v.n_samples == 40000);
}

TEST_CASE("a very high barrier is almost never crossed") {
  BarrierSpec spec;
  spec.slope = 1.0;
  spec.intercept = 30.0;
  spec.horizon = 20.0;
  auto v = mc_barrier_probability(spec, 2000, 0.05, 42, 1);
  CHECK(v.estimate > 0.999);
}

TEST_CASE("angle density: uniform limit and pinned value") {
  for (double th : {-2.0, 0.0, 1.5}) {
    CHECK(angle_density(th, 0.3, 60.0) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-10));
  }
  CHECK(angle_density(0.0, 0.0, 2.0) == doctest::Approx(0.282129).epsilon(1e-5));
}

TEST_CASE("Fourier and wrapped-Gaussian forms agree to 1e-10") {
  for (double t : {0.5, 1.0, 2.5, 5.0}) {
    for (int i = 0; i < 200; ++i) {
      double th = -M_PI + 2.0 * M_PI * i / 200.0;
      CHECK(std::fabs(angle_density(th, 0.4, t) - angle_density_wrapped(th, 0.4, t)) < 1e-10);
    }
  }
}

TEST_CASE("angle density integrates to one") {
  for (double t : {0.5, 1.5, 4.0}) {
    const int n = 2000;
    double h = 2.0 * M_PI / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      sum += w * angle_density(-M_PI + i * h, 0.0, t);
    }
    CHECK(sum * h / 3.0 == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("deviation from uniform is within the stated bound") {
  double bound = angle_density_error_bound(1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    double th = -M_PI + 2.0 * M_PI * i / 1000.0;
    worst = std::max(worst, std::fabs(angle_density(th, 0.0, 1.0) - 1.0 / (2.0 * M_PI)));
  }
  CHECK(worst <= bound);
  CHECK(angle_density_error_bound(5.0) < angle_density_error_bound(0.5));
}

TEST_CASE("change of measure: zero functional gives zero on both sides") {
  auto v = change_of_measure_check(1.5, 1.0, 4.0, PathFunctional::zero, 0.0, 2000, 42, 1);
  CHECK(v.estimate == 0.0);
  CHECK(v.target == 0.0);
  CHECK(v.pass);
}

TEST_CASE("change of measure: unit functional agrees within 3 pooled SEs") {
  auto v = change_of_measure_check(1.5, 1.0, 4.0, PathFunctional::one, 0.0, 8000, 42, 1);
  CHECK(v.pass);
  // The constant-functional side is exact quadrature: true value 2.39237.
  CHECK(v.estimate == doctest::Approx(2.39237).epsilon(1e-3));
}

TEST_CASE("3D-Bessel moments: inverse moment, square bound, survival trend") {
  auto b = bessel3_moment_check(0.0, {10.0, 100.0}, {1.0, 2.0, 4.0}, 20000, 42, 1);
  CHECK(b.inv_first_moment.estimate ==
        doctest::Approx(std::sqrt(2.0 / (M_PI * 100.0))).epsilon(0.03));
  CHECK(b.inv_first_moment.pass);
  for (const auto& v : b.inv_second_moment) CHECK(v.pass);
  REQUIRE(b.survival.size() == 3);
  CHECK(b.survival[0].estimate <= b.survival[1].estimate + 0.02);
  CHECK(b.survival[1].estimate <= b.survival[2].estimate + 0.02);
  for (const auto& v : b.survival) {
    CHECK(v.estimate >= 0.0);
    CHECK(v.estimate <= 1.0);
  }
}

TEST_CASE("conditioned excursion statistic is a bounded discrepancy") {
  auto r = continuity_lemma_experiment(std::exp(-1.0), std::exp(-3.5), 150, 42, 0, 1);
  CHECK(r.statistic >= 0.0);
  CHECK(r.statistic <= 2.0);
  CHECK(r.conditioned_samples >= 150);
  REQUIRE(r.quadrant_freq.size() == 4);
  double total = 0.0;
  for (double f : r.quadrant_freq) total += f;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  // Rotational symmetry of the unconditioned exit angle, 3 sigma.
  for (double f : r.quadrant_freq) CHECK(std::fabs(f - 0.25) < 3.0 * 0.05);
}

TEST_CASE("deterministic across worker counts") {
  BarrierSpec spec;
  spec.slope = 0.5;
  spec.intercept = 1.0;
  spec.horizon = 10.0;
  auto a = mc_barrier_probability(spec, 4000, 0.05, 7, 1);
  auto b = mc_barrier_probability(spec, 4000, 0.05, 7, 4);
  CHECK(a.estimate == b.estimate);
}

}  // TEST_SUITE
