#include "bmc/thickpoints.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bmc/parallel.hpp"
#include "bmc/stats.hpp"

namespace bmc::thickpoints {

namespace {
constexpr std::uint64_t kLatticePurpose = 20;
const double kInvSqrtPi = 0.5641895835477563;  // 1/sqrt(pi)
}  // namespace

LatticeRun srw_local_time_field(int N, std::uint64_t seed, std::uint64_t trial) {
  if (N < 8) throw std::domain_error("srw_local_time_field: N must be >= 8");
  if (N > 4096) throw std::domain_error("srw_local_time_field: N > 4096 exceeds the memory guard");
  LatticeRun run;
  run.N = N;
  run.seed = seed;
  run.trial = trial;
  const int side = 2 * N + 1;
  run.ell.assign(static_cast<std::size_t>(side) * side, 0u);
  RngStream rng(seed, stream_id(kLatticePurpose, trial, static_cast<std::uint64_t>(N)));
  int x = 0, y = 0;
  for (;;) {
    ++run.ell[static_cast<std::size_t>(y + N) * side + (x + N)];
    ++run.walk_length;
    std::uint32_t r = rng.next_u32() & 3u;
    switch (r) {
      case 0: ++x; break;
      case 1: --x; break;
      case 2: ++y; break;
      default: --y; break;
    }
    if (x < -N || x > N || y < -N || y > N) break;
  }
  run.sup_ell = *std::max_element(run.ell.begin(), run.ell.end());
  double logN = std::log(static_cast<double>(N));
  run.s_stat = std::sqrt(static_cast<double>(run.sup_ell)) -
               2.0 * kInvSqrtPi * logN + kInvSqrtPi * std::log(logN);
  return run;
}

std::vector<LatticeRun> lattice_ensemble(int N, long trials, std::uint64_t seed,
                                         unsigned workers) {
  std::vector<LatticeRun> runs(trials);
  parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
    runs[t] = srw_local_time_field(N, seed, t);
  });
  return runs;
}

std::vector<long> threshold_counts(const LatticeRun& run,
                                   const std::vector<double>& thresholds) {
  double shift = 2.0 * kInvSqrtPi * std::log(static_cast<double>(run.N));
  std::vector<long> counts(thresholds.size(), 0);
  for (std::uint32_t l : run.ell) {
    if (l == 0) continue;
    double v = std::sqrt(static_cast<double>(l)) - shift;
    for (std::size_t i = 0; i < thresholds.size(); ++i)
      if (v > thresholds[i]) ++counts[i];
  }
  return counts;
}

std::vector<TrendPoint> erdos_taylor_trend(
    const std::vector<std::vector<LatticeRun>>& ensembles) {
  std::vector<TrendPoint> out;
  for (const auto& runs : ensembles) {
    if (runs.empty()) throw std::invalid_argument("erdos_taylor_trend: empty ensemble");
    TrendPoint p;
    p.N = runs.front().N;
    p.trials = static_cast<long>(runs.size());
    double logN = std::log(static_cast<double>(p.N));
    double mean_sup = 0.0;
    std::vector<double> ss;
    ss.reserve(runs.size());
    for (const auto& r : runs) {
      mean_sup += static_cast<double>(r.sup_ell);
      ss.push_back(r.s_stat);
    }
    mean_sup /= runs.size();
    p.r_stat = mean_sup / (logN * logN);
    p.s_median = median(ss);
    p.s_iqr = quantile(ss, 0.75) - quantile(ss, 0.25);
    out.push_back(p);
  }
  return out;
}

}  // namespace bmc::thickpoints
