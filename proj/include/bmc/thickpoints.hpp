#pragma once
// Local times of planar simple random walk killed on exiting [-N, N]^2:
// sup local-time growth and the centered sup-sqrt statistic.

#include <cstdint>
#include <vector>

#include "bmc/rng.hpp"

namespace bmc::thickpoints {

struct LatticeRun {
  int N = 0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::vector<std::uint32_t> ell;  // row-major over [-N,N]^2, side 2N+1
  std::uint64_t walk_length = 0;   // steps before exit = sum of ell
  std::uint32_t sup_ell = 0;
  double s_stat = 0.0;  // max sqrt(ell) - 2/sqrt(pi) log N + 1/sqrt(pi) log log N

  std::uint32_t at(int x, int y) const {
    return ell[static_cast<std::size_t>(y + N) * (2 * N + 1) + (x + N)];
  }
};

// Walk from the origin until first exit; counts visits per site (the starting
// visit included).  Throws for N < 8 or N > 4096 (memory guard).
LatticeRun srw_local_time_field(int N, std::uint64_t seed, std::uint64_t trial);

// Trials run in parallel, keyed by trial index.
std::vector<LatticeRun> lattice_ensemble(int N, long trials, std::uint64_t seed,
                                         unsigned workers);

// Counts of sites with sqrt(ell) - 2/sqrt(pi) log N > a, per threshold.
std::vector<long> threshold_counts(const LatticeRun& run,
                                   const std::vector<double>& thresholds);

struct TrendPoint {
  int N = 0;
  double r_stat = 0.0;       // mean sup ell / (log N)^2
  double s_median = 0.0;     // median of the centered statistic
  double s_iqr = 0.0;
  long trials = 0;
};

// R_N = mean[sup ell]/(log N)^2 per lattice size; asymptote 4/pi.
std::vector<TrendPoint> erdos_taylor_trend(const std::vector<std::vector<LatticeRun>>& ensembles);

}  // namespace bmc::thickpoints
