// Lattice local times: counting identities, centered statistics and the
// leading-order growth of the sup local time.

#include <cmath>
#include <vector>

#include <doctest.h>

#include "bmc/stats.hpp"
#include "bmc/thickpoints.hpp"

using namespace bmc::thickpoints;

TEST_SUITE("thickpoints") {

TEST_CASE("size guards") {
  CHECK_THROWS(srw_local_time_field(4, 1, 0));
  CHECK_THROWS(srw_local_time_field(8192, 1, 0));
}

TEST_CASE("counting identity and origin visit, exact per run") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    auto run = srw_local_time_field(32, 5, trial);
    CHECK(run.at(0, 0) >= 1);
    std::uint64_t total = 0;
    std::uint32_t sup = 0;
    for (std::uint32_t l : run.ell) {
      total += l;
      sup = std::max(sup, l);
    }
    CHECK(total == run.walk_length);
    CHECK(sup == run.sup_ell);
  }
}

TEST_CASE("determinism per (seed, N, trial)") {
  auto a = srw_local_time_field(64, 9, 3);
  auto b = srw_local_time_field(64, 9, 3);
  CHECK(a.walk_length == b.walk_length);
  CHECK(a.ell == b.ell);
  auto c = srw_local_time_field(64, 9, 4);
  CHECK(a.ell != c.ell);
}

TEST_CASE("centered statistic arithmetic") {
  auto run = srw_local_time_field(128, 2, 0);
  double expected = std::sqrt(static_cast<double>(run.sup_ell)) -
                    2.0 / std::sqrt(M_PI) * std::log(128.0) +
                    1.0 / std::sqrt(M_PI) * std::log(std::log(128.0));
  CHECK(run.s_stat == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("threshold counts are nonincreasing in the threshold") {
  std::vector<double> thresholds = {-4.0, -2.0, 0.0, 2.0, 4.0};
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    auto run = srw_local_time_field(64, 11, trial);
    auto counts = threshold_counts(run, thresholds);
    REQUIRE(counts.size() == thresholds.size());
    for (std::size_t i = 1; i < counts.size(); ++i) CHECK(counts[i] <= counts[i - 1]);
    CHECK(counts.front() <= static_cast<long>(run.ell.size()));
  }
}

TEST_CASE("ensemble is parallel-stable") {
  auto e1 = lattice_ensemble(32, 16, 13, 1);
  auto e4 = lattice_ensemble(32, 16, 13, 4);
  REQUIRE(e1.size() == 16);
  REQUIRE(e4.size() == 16);
  for (std::size_t i = 0; i < e1.size(); ++i) {
    CHECK(e1[i].walk_length == e4[i].walk_length);
    CHECK(e1[i].sup_ell == e4[i].sup_ell);
  }
}

TEST_CASE("mean origin local time grows linearly in log N") {
  // Green-function-at-origin trend: mean ell_0 ~ c log N + b at desk scale,
  // so the three-size line fit reproduces the middle point closely.
  std::vector<double> logs, means;
  for (int N : {32, 64, 128}) {
    auto runs = lattice_ensemble(N, 1000, 17, 1);
    double s = 0.0;
    for (const auto& r : runs) s += r.at(0, 0);
    logs.push_back(std::log(static_cast<double>(N)));
    means.push_back(s / runs.size());
  }
  CHECK(means[0] < means[1]);
  CHECK(means[1] < means[2]);
  auto fit = bmc::fit_line(logs, means);
  CHECK(fit.slope > 0.0);
  CHECK(fit.slope * logs[1] + fit.intercept == doctest::Approx(means[1]).epsilon(0.15));
}

TEST_CASE("trend table: positive statistics and the asymptote scale") {
  std::vector<std::vector<LatticeRun>> ensembles;
  for (int N : {64, 128}) ensembles.push_back(lattice_ensemble(N, 20, 19, 1));
  auto trend = erdos_taylor_trend(ensembles);
  REQUIRE(trend.size() == 2);
  for (const auto& p : trend) {
    CHECK(p.r_stat > 0.0);
    // Desk-scale values sit within a factor ~2 of the limit 4/pi.
    CHECK(p.r_stat > 0.4);
    CHECK(p.r_stat < 2.5);
    CHECK(p.s_iqr >= 0.0);
    CHECK(p.trials == 20);
  }
}

}  // TEST_SUITE
