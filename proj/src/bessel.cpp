#include "bmc/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bmc/special.hpp"

namespace bmc::bessel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log of the continuous part of the BESQ^d transition density, x > 0, y > 0.
double besq_log_density_cont(double x, double y, double t, double d) {
  double nu = 0.5 * d - 1.0;
  double z = std::sqrt(x * y) / t;
  return -std::log(2.0 * t) + 0.5 * nu * (std::log(y) - std::log(x)) -
         (x + y) / (2.0 * t) + log_modified_bessel_i(nu, z);
}

double besq_log_density_from_zero(double y, double t, double d) {
  // central case: Gamma(d/2, 2t)
  double hd = 0.5 * d;
  return (hd - 1.0) * std::log(y) - y / (2.0 * t) - hd * std::log(2.0 * t) -
         std::lgamma(hd);
}

}  // namespace

void BridgeSpec::validate() const {
  if (u < 0.0 || v < 0.0) throw std::domain_error("BridgeSpec: endpoints must be >= 0");
  if (!(T > 0.0)) throw std::domain_error("BridgeSpec: duration must be > 0");
  double prev = 0.0;
  for (double t : grid) {
    if (!(t > prev) || !(t < T))
      throw std::domain_error("BridgeSpec: grid must be strictly increasing inside (0, T)");
    prev = t;
  }
}

double besq_transition_sample(double x, double t, double d, RngStream& rng) {
  if (x < 0.0) throw std::domain_error("besq_transition_sample: x < 0");
  if (t < 0.0) throw std::domain_error("besq_transition_sample: t < 0");
  if (d < 0.0) throw std::domain_error("besq_transition_sample: d < 0");
  if (t == 0.0) return x;
  if (d >= 1.0) {
    double z = rng.normal();
    double w = std::sqrt(x) + std::sqrt(t) * z;
    double y = w * w;
    if (d > 1.0) y += t * rng.chi_squared(d - 1.0);
    return y;
  }
  long n = rng.poisson(x / (2.0 * t));
  double shape = 0.5 * d + static_cast<double>(n);
  if (shape == 0.0) return 0.0;
  return rng.gamma(shape, 2.0 * t);
}

BesqDensity besq_transition_density(double x, double y, double t, double d) {
  if (x < 0.0 || y < 0.0) throw std::domain_error("besq_transition_density: negative argument");
  if (!(t > 0.0)) throw std::domain_error("besq_transition_density: t must be > 0");
  if (d < 0.0) throw std::domain_error("besq_transition_density: d < 0");
  BesqDensity out;
  if (d == 0.0) out.atom = std::exp(-x / (2.0 * t));
  if (y == 0.0) {
    double nu = 0.5 * d - 1.0;
    if (nu > 0.0) {
      out.log_density = -kInf;
      out.density = 0.0;
    } else if (nu == 0.0) {
      out.log_density = -x / (2.0 * t) - std::log(2.0 * t);
      out.density = std::exp(out.log_density);
    } else if (d == 0.0) {
      // I_{-1} = I_1 ~ z/2 cancels the y^{-1/2} factor: finite boundary limit.
      if (x == 0.0) {
        out.log_density = -kInf;
        out.density = 0.0;
      } else {
        out.log_density = std::log(x / (4.0 * t * t)) - x / (2.0 * t);
        out.density = std::exp(out.log_density);
      }
    } else {
      out.log_density = kInf;  // y^{nu} blow-up for non-integer nu < 0
      out.density = kInf;
    }
    return out;
  }
  if (x == 0.0) {
    if (d == 0.0) {
      out.log_density = -kInf;
      out.density = 0.0;
      return out;
    }
    out.log_density = besq_log_density_from_zero(y, t, d);
  } else {
    out.log_density = besq_log_density_cont(x, y, t, d);
  }
  out.density = std::exp(out.log_density);
  return out;
}

PathSample bessel_path_sample(double r0, double d, const std::vector<double>& times,
                              RngStream& rng) {
  if (r0 < 0.0) throw std::domain_error("bessel_path_sample: r0 < 0");
  if (d < 0.0) throw std::domain_error("bessel_path_sample: d < 0");
  PathSample p;
  p.times.push_back(0.0);
  p.values.push_back(r0);
  double prev_t = 0.0;
  double sq = r0 * r0;
  for (double t : times) {
    if (t < prev_t) throw std::domain_error("bessel_path_sample: times must be increasing");
    if (t > prev_t) sq = besq_transition_sample(sq, t - prev_t, d, rng);
    p.times.push_back(t);
    p.values.push_back(std::sqrt(sq));
    prev_t = t;
  }
  p.inv_square_integral = inv_square_integral_trapezoid(p.times, p.values);
  p.touched_zero = !std::isfinite(*p.inv_square_integral);
  return p;
}

double besq_bridge_step_to_zero(double x, double dt, double rem, double delta,
                                RngStream& rng) {
  if (x < 0.0 || dt <= 0.0 || rem < 0.0 || delta < 0.0)
    throw std::domain_error("besq_bridge_step_to_zero: invalid arguments");
  if (rem == 0.0) return 0.0;
  double lambda = (x / (2.0 * dt)) * (rem / (rem + dt));
  long n = rng.poisson(lambda);
  double shape = 0.5 * delta + static_cast<double>(n);
  if (shape == 0.0) return 0.0;
  double scale = 2.0 * dt * rem / (dt + rem);
  return rng.gamma(shape, scale);
}

long sample_bridge_component_count(double z, RngStream& rng) {
  if (!(z > 0.0)) throw std::domain_error("sample_bridge_component_count: z must be > 0");
  double half = 0.5 * z;
  if (half < 1e-6) return 1;  // n = 1 carries all but O(z^2) of the mass
  double lz = std::log(half);
  long mode = std::max<long>(1, static_cast<long>(half));
  long spread = static_cast<long>(15.0 * std::sqrt(static_cast<double>(mode)) + 10.0);
  long lo = std::max<long>(1, mode - spread);
  long hi = mode + spread;
  std::vector<double> lw(hi - lo + 1);
  double lmax = -kInf;
  for (long n = lo; n <= hi; ++n) {
    double l = (2.0 * n - 1.0) * lz - std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(n));
    lw[n - lo] = l;
    lmax = std::max(lmax, l);
  }
  double total = 0.0;
  for (double& l : lw) {
    l = std::exp(l - lmax);
    total += l;
  }
  // The normalized weights must reproduce I_1(z); a mismatch indicates the
  // window truncated real mass or a parameterization error.
  double logsum = lmax + std::log(total);
  double ref = log_modified_bessel_i(1.0, z);
  if (!(std::fabs(logsum - ref) < 1e-6))
    throw std::runtime_error("sample_bridge_component_count: mixture normalization failure");
  double u = rng.uniform() * total;
  for (long n = lo; n <= hi; ++n) {
    u -= lw[n - lo];
    if (u <= 0.0) return n;
  }
  return hi;
}

namespace {

// Numeric-inversion draw from p(w) ~ q_dt^0(x, w) * q_rem^0(w, y2), w > 0.
double markov_interior_step(double x, double dt, double rem, double y2, RngStream& rng) {
  double S = dt + rem;
  double m0 = x + (y2 - x) * (dt / S);
  double theta = 2.0 * dt * rem / S;
  double sigma = std::sqrt(4.0 * std::max(m0, theta) * dt * rem / S) + theta;
  auto logp = [&](double w) {
    return besq_log_density_cont(x, w, dt, 0.0) + besq_log_density_cont(w, y2, rem, 0.0);
  };
  double lo = std::max(1e-300, m0 - 12.0 * sigma);
  double hi = m0 + 12.0 * sigma;
  double lp_mid = logp(std::max(m0, 0.5 * (lo + hi)));
  for (int tries = 0; tries < 60; ++tries) {
    bool ok = true;
    if (logp(hi) > lp_mid - 34.0) { hi += 6.0 * sigma; ok = false; }
    if (lo > 1e-12 * sigma && logp(lo) > lp_mid - 34.0) { lo = std::max(1e-300, lo - 6.0 * sigma); ok = false; }
    if (ok) break;
  }
  constexpr int kN = 1536;
  double h = (hi - lo) / kN;
  std::vector<double> lps(kN + 1);
  double lmax = -kInf;
  for (int i = 0; i <= kN; ++i) {
    lps[i] = logp(lo + i * h);
    lmax = std::max(lmax, lps[i]);
  }
  std::vector<double> cum(kN + 1, 0.0);
  for (int i = 1; i <= kN; ++i) {
    double f0 = std::exp(lps[i - 1] - lmax);
    double f1 = std::exp(lps[i] - lmax);
    cum[i] = cum[i - 1] + 0.5 * (f0 + f1) * h;
  }
  double u = rng.uniform_pos() * cum[kN];
  auto it = std::lower_bound(cum.begin(), cum.end(), u);
  int i = std::max<int>(1, static_cast<int>(it - cum.begin()));
  double c0 = cum[i - 1], c1 = cum[i];
  double frac = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
  return lo + (i - 1 + frac) * h;
}

std::vector<double> full_grid(const BridgeSpec& spec) {
  std::vector<double> t;
  t.reserve(spec.grid.size() + 2);
  t.push_back(0.0);
  t.insert(t.end(), spec.grid.begin(), spec.grid.end());
  t.push_back(spec.T);
  return t;
}

PathSample bridge_markov(const BridgeSpec& spec, RngStream& rng);

// Descending-to-zero squared bridge of dimension delta sampled sequentially on
// interior times of [0, T]; returns squared values aligned with `times`.
std::vector<double> squared_bridge_to_zero(double x0, double T, double delta,
                                           const std::vector<double>& times,
                                           RngStream& rng) {
  std::vector<double> sq(times.size(), 0.0);
  double x = x0;
  double prev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    double dt = times[i] - prev;
    double rem = T - times[i];
    x = (dt > 0.0) ? besq_bridge_step_to_zero(x, dt, rem, delta, rng) : x;
    sq[i] = x;
    prev = times[i];
  }
  return sq;
}

PathSample bridge_pitman(const BridgeSpec& spec, RngStream& rng) {
  PathSample p;
  p.times = full_grid(spec);
  std::size_t m = spec.grid.size();
  std::vector<double> sq(m, 0.0);

  if (spec.u > 0.0) {
    auto part = squared_bridge_to_zero(spec.u * spec.u, spec.T, 0.0, spec.grid, rng);
    for (std::size_t i = 0; i < m; ++i) sq[i] += part[i];
  }
  if (spec.v > 0.0) {
    // time reversal: the descending bridge from v sampled at T - t.
    std::vector<double> rev(m);
    for (std::size_t i = 0; i < m; ++i) rev[i] = spec.T - spec.grid[m - 1 - i];
    auto part = squared_bridge_to_zero(spec.v * spec.v, spec.T, 0.0, rev, rng);
    for (std::size_t i = 0; i < m; ++i) sq[i] += part[m - 1 - i];
  }
  if (spec.u > 0.0 && spec.v > 0.0) {
    double z = spec.u * spec.v / spec.T;
    long n = sample_bridge_component_count(z, rng);
    auto part = squared_bridge_to_zero(0.0, spec.T, 4.0 * static_cast<double>(n),
                                       spec.grid, rng);
    for (std::size_t i = 0; i < m; ++i) sq[i] += part[i];
  }

  p.values.resize(m + 2);
  p.values.front() = spec.u;
  for (std::size_t i = 0; i < m; ++i) p.values[i + 1] = std::sqrt(sq[i]);
  p.values.back() = spec.v;
  return p;
}

PathSample bridge_markov(const BridgeSpec& spec, RngStream& rng) {
  if (spec.u == 0.0 && spec.v > 0.0) {
    // An absorbed start cannot be stepped forward; sample the reversed bridge.
    BridgeSpec rev;
    rev.u = spec.v;
    rev.v = spec.u;
    rev.T = spec.T;
    rev.grid.resize(spec.grid.size());
    for (std::size_t i = 0; i < spec.grid.size(); ++i)
      rev.grid[i] = spec.T - spec.grid[spec.grid.size() - 1 - i];
    PathSample back = bridge_markov(rev, rng);
    PathSample p;
    p.times = full_grid(spec);
    p.values.assign(back.values.rbegin(), back.values.rend());
    return p;
  }
  PathSample p;
  p.times = full_grid(spec);
  p.values.resize(p.times.size());
  p.values.front() = spec.u;
  p.values.back() = spec.v;
  double x = spec.u * spec.u;
  double y2 = spec.v * spec.v;
  for (std::size_t i = 1; i + 1 < p.times.size(); ++i) {
    double dt = p.times[i] - p.times[i - 1];
    double rem = spec.T - p.times[i];
    if (spec.v == 0.0) {
      x = besq_bridge_step_to_zero(x, dt, rem, 0.0, rng);
    } else if (x == 0.0) {
      throw std::logic_error("bridge_markov: absorbed before a positive endpoint");
    } else {
      x = markov_interior_step(x, dt, rem, y2, rng);
    }
    p.values[i] = std::sqrt(x);
  }
  return p;
}

}  // namespace

PathSample bessel_bridge_0dim_sample(const BridgeSpec& spec, RngStream& rng,
                                     BridgeMethod method) {
  spec.validate();
  if (spec.u == 0.0 && spec.v == 0.0) {
    PathSample p;
    p.times = full_grid(spec);
    p.values.assign(p.times.size(), 0.0);
    p.touched_zero = true;
    return p;
  }
  return method == BridgeMethod::pitman ? bridge_pitman(spec, rng)
                                        : bridge_markov(spec, rng);
}

double inv_square_integral_trapezoid(const std::vector<double>& times,
                                     const std::vector<double>& values) {
  if (times.size() != values.size() || times.size() < 2)
    throw std::invalid_argument("inv_square_integral_trapezoid: bad path");
  double acc = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    double a = values[i - 1], b = values[i];
    if (a <= 0.0 || b <= 0.0) return kInf;
    acc += 0.5 * (1.0 / (a * a) + 1.0 / (b * b)) * (times[i] - times[i - 1]);
  }
  return acc;
}

double rn_derivative_bessel(const PathSample& path, double x, double t, double d) {
  if (!(x > 0.0) || !(t > 0.0)) throw std::domain_error("rn_derivative_bessel: need x, t > 0");
  if (d < 0.0) throw std::domain_error("rn_derivative_bessel: d < 0");
  if (path.times.size() < 2 || path.times.size() != path.values.size())
    throw std::invalid_argument("rn_derivative_bessel: bad path");
  // locate t on the path grid
  std::size_t idx = path.times.size();
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    if (std::fabs(path.times[i] - t) <= 1e-12 * std::max(1.0, t)) { idx = i; break; }
  }
  if (idx == path.times.size())
    throw std::invalid_argument("rn_derivative_bessel: t not on the path grid");
  for (std::size_t i = 0; i <= idx; ++i)
    if (path.values[i] <= 0.0)
      throw std::domain_error("rn_derivative_bessel: path touches 0 before t");
  double a = (d - 1.0) / 2.0;
  if (a == 0.0) return 1.0;
  double integral;
  if (idx + 1 == path.times.size() && path.inv_square_integral)
    integral = *path.inv_square_integral;
  else
    integral = inv_square_integral_trapezoid(
        std::vector<double>(path.times.begin(), path.times.begin() + idx + 1),
        std::vector<double>(path.values.begin(), path.values.begin() + idx + 1));
  double xt = path.values[idx];
  return std::pow(xt / x, a) * std::exp(-0.5 * a * (a - 1.0) * integral);
}

double besq_euler_maruyama(double x, double t, double d, double step, RngStream& rng) {
  if (x < 0.0 || t < 0.0 || d < 0.0 || !(step > 0.0))
    throw std::domain_error("besq_euler_maruyama: invalid arguments");
  long n = static_cast<long>(std::llround(t / step));
  double sqrt_step = std::sqrt(step);
  double y = x;
  for (long i = 0; i < n; ++i) {
    if (y <= 0.0 && d == 0.0) return 0.0;  // absorbed
    y += d * step + 2.0 * std::sqrt(std::max(y, 0.0)) * sqrt_step * rng.normal();
    if (y < 0.0) y = 0.0;
  }
  return y;
}

}  // namespace bmc::bessel
