#pragma once
// Deterministic parallel Monte Carlo reduction: each path draws from its own
// (seed, stream) pair and chunk sums are combined in index order, so the
// result is independent of the worker count.

#include <cstdint>
#include <vector>

#include "bmc/parallel.hpp"
#include "bmc/rng.hpp"
#include "bmc/stats.hpp"

namespace bmc {

template <typename F>
Summary mc_mean(long n_paths, unsigned workers, std::uint64_t seed,
                std::uint64_t purpose, std::uint64_t replicate, F&& path_value) {
  const long chunk = 256;
  const long n_chunks = (n_paths + chunk - 1) / chunk;
  struct Acc { double sum = 0.0, sum2 = 0.0; };
  std::vector<Acc> accs(n_chunks);
  parallel_for(static_cast<std::size_t>(n_chunks), workers, [&](std::size_t c) {
    long lo = static_cast<long>(c) * chunk;
    long hi = std::min(n_paths, lo + chunk);
    Acc a;
    for (long i = lo; i < hi; ++i) {
      RngStream rng(seed, stream_id(purpose, replicate, static_cast<std::uint64_t>(i)));
      double v = path_value(rng, i);
      a.sum += v;
      a.sum2 += v * v;
    }
    accs[c] = a;
  });
  double sum = 0.0, sum2 = 0.0;
  for (const Acc& a : accs) { sum += a.sum; sum2 += a.sum2; }
  Summary s;
  s.n = static_cast<std::size_t>(n_paths);
  s.mean = sum / n_paths;
  double var = (sum2 - sum * sum / n_paths) / std::max<long>(1, n_paths - 1);
  s.sd = std::sqrt(std::max(0.0, var));
  s.se = s.sd / std::sqrt(static_cast<double>(n_paths));
  return s;
}

}  // namespace bmc
