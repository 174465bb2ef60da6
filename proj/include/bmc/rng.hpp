#pragma once
// Counter-based pseudo-random streams (Philox4x32-10).
//
// Every stochastic routine in this library draws from an RngStream identified
// by a (seed, stream_id) pair.  Streams with distinct ids are statistically
// independent and each stream is a pure function of (seed, stream_id, draw
// index), so results are reproducible regardless of thread scheduling.

#include <cmath>
#include <cstdint>

namespace bmc {

namespace detail {

struct Philox4x32 {
  // key = seed, high counter words = stream id, low words = block index.
  uint32_t key0, key1;
  uint32_t ctr0, ctr1, ctr2, ctr3;

  static inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
    uint64_t p = static_cast<uint64_t>(a) * b;
    hi = static_cast<uint32_t>(p >> 32);
    lo = static_cast<uint32_t>(p);
  }

  void block(uint32_t out[4]) const {
    constexpr uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    uint32_t c0 = ctr0, c1 = ctr1, c2 = ctr2, c3 = ctr3;
    uint32_t k0 = key0, k1 = key1;
    for (int round = 0; round < 10; ++round) {
      uint32_t hi0, lo0, hi1, lo1;
      mulhilo(M0, c0, hi0, lo0);
      mulhilo(M1, c2, hi1, lo1);
      uint32_t n0 = hi1 ^ c1 ^ k0;
      uint32_t n1 = lo1;
      uint32_t n2 = hi0 ^ c3 ^ k1;
      uint32_t n3 = lo0;
      c0 = n0; c1 = n1; c2 = n2; c3 = n3;
      k0 += W0; k1 += W1;
    }
    out[0] = c0; out[1] = c1; out[2] = c2; out[3] = c3;
  }
};

}  // namespace detail

class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream_id) {
    eng_.key0 = static_cast<uint32_t>(seed);
    eng_.key1 = static_cast<uint32_t>(seed >> 32);
    eng_.ctr2 = static_cast<uint32_t>(stream_id);
    eng_.ctr3 = static_cast<uint32_t>(stream_id >> 32);
    eng_.ctr0 = eng_.ctr1 = 0;
    pos_ = 4;
    have_spare_normal_ = false;
  }

  uint32_t next_u32() {
    if (pos_ == 4) {
      eng_.block(buf_);
      pos_ = 0;
      // 64-bit block index; low word wraps into the high word.
      if (++eng_.ctr0 == 0) ++eng_.ctr1;
    }
    return buf_[pos_++];
  }

  uint64_t next_u64() {
    uint64_t hi = next_u32();
    uint64_t lo = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1].
  double uniform_pos() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_spare_normal_) {
      have_spare_normal_ = false;
      return spare_normal_;
    }
    double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    double theta = 6.283185307179586476925286766559 * uniform();
    spare_normal_ = r * std::sin(theta);
    have_spare_normal_ = true;
    return r * std::cos(theta);
  }

  double exponential(double mean) { return -mean * std::log(uniform_pos()); }

  // Marsaglia-Tsang; exact for all shape > 0.
  double gamma(double shape, double scale) {
    if (shape <= 0.0) return 0.0;  // Gamma(0) is the unit mass at zero.
    if (shape < 1.0) {
      double u = uniform_pos();
      return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = uniform_pos();
      double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return scale * d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
  }

  double chi_squared(double dof) { return gamma(0.5 * dof, 2.0); }

  // Exact Poisson: multiplication method below 60, Hormann's PTRS above.
  long poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 60.0) {
      double limit = std::exp(-mean);
      long k = 0;
      double prod = uniform_pos();
      while (prod > limit) {
        ++k;
        prod *= uniform_pos();
      }
      return k;
    }
    return poisson_ptrs(mean);
  }

 private:
  long poisson_ptrs(double mean) {
    double slam = std::sqrt(mean);
    double loglam = std::log(mean);
    double b = 0.931 + 2.53 * slam;
    double a = -0.059 + 0.02483 * b;
    double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      double u = uniform() - 0.5;
      double v = uniform_pos();
      double us = 0.5 - std::fabs(u);
      double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
      if (us >= 0.07 && v <= vr) return static_cast<long>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
          kf * loglam - mean - std::lgamma(kf + 1.0))
        return static_cast<long>(kf);
    }
  }

  detail::Philox4x32 eng_;
  uint32_t buf_[4];
  int pos_;
  bool have_spare_normal_;
  double spare_normal_ = 0.0;
};

// Stream-id layout used across the library: a 16-bit purpose tag, a 24-bit
// replicate index and a 24-bit task index.  Keeping allocation centralized
// guarantees no two logical tasks ever share a stream.
inline uint64_t stream_id(uint64_t purpose, uint64_t replicate, uint64_t task) {
  return (purpose << 48) | ((replicate & 0xFFFFFFULL) << 24) | (task & 0xFFFFFFULL);
}

}  // namespace bmc
