#pragma once
// Bessel processes of dimension d >= 0: exact squared-Bessel transition
// sampling and densities, zero-dimensional Bessel bridges (two independent
// constructions), and the absolute-continuity functional between dimensions.

#include <optional>
#include <stdexcept>
#include <vector>

#include "bmc/rng.hpp"

namespace bmc::bessel {

struct BesselParams {
  double d = 0.0;  // dimension
  double a = -0.5; // index, a = (d-1)/2 exactly

  static BesselParams from_dimension(double dim) {
    if (dim < 0.0) throw std::domain_error("BesselParams: dimension must be >= 0");
    return BesselParams{dim, (dim - 1.0) / 2.0};
  }
};

struct BridgeSpec {
  double u = 0.0;            // start value (not squared)
  double v = 0.0;            // end value
  double T = 1.0;            // duration
  std::vector<double> grid;  // strictly increasing evaluation times in (0, T)

  void validate() const;
};

struct PathSample {
  std::vector<double> times;
  std::vector<double> values;
  // Accumulated trapezoidal int_0^t ds / X_s^2; infinity if the path touches 0.
  std::optional<double> inv_square_integral;
  bool touched_zero = false;
};

enum class BridgeMethod { markov_bridge, pitman };

struct BesqDensity {
  double density = 0.0;      // continuous part at y
  double log_density = 0.0;  // log of the continuous part (-inf when density 0)
  double atom = 0.0;         // point mass at y = 0 (nonzero only for d = 0)
};

// Exact draw of BESQ^d_t started at x.  t = 0 returns x unchanged.
double besq_transition_sample(double x, double t, double d, RngStream& rng);

BesqDensity besq_transition_density(double x, double y, double t, double d);

// Sequential exact transitions of the (non-squared) Bessel process on `times`
// (increasing, starting from 0 implicitly; r0 is the time-0 value).
PathSample bessel_path_sample(double r0, double d, const std::vector<double>& times,
                              RngStream& rng);

// Zero-dimensional Bessel bridge from u to v over [0, T], evaluated on
// spec.grid plus the pinned endpoints.  Both methods produce the same law:
//   markov_bridge — sequential sampling from the conditioned transition
//     density on squared values, with numeric inversion for interior targets;
//   pitman — additive decomposition into two descending zero-dimensional
//     squared bridges plus a squared bridge of dimension 4N from 0 to 0,
//     where N is drawn from the normalized count mixture (N >= 1 iff uv > 0).
PathSample bessel_bridge_0dim_sample(const BridgeSpec& spec, RngStream& rng,
                                     BridgeMethod method = BridgeMethod::markov_bridge);

// (X_t/x)^a * exp(-a(a-1)/2 * int_0^t ds/X_s^2), a = (d-1)/2.  Throws if the
// path touches 0 on [0, t].
double rn_derivative_bessel(const PathSample& path, double x, double t, double d);

// Euler-Maruyama discretization of dY = d*ds + 2 sqrt(Y) dW with absorption at
// 0 when d = 0; biased reference sampler used by equivalence tests.
double besq_euler_maruyama(double x, double t, double d, double step, RngStream& rng);

// --- building blocks shared with the local-time cascade ---

// One conditioned squared-Bessel step of length dt toward an endpoint pinned
// at 0 after a further `rem` of time, for any dimension delta >= 0.  Exact:
// N ~ Poisson((x/2dt) * rem/(rem+dt)), w ~ Gamma(delta/2 + N, 2 dt rem/(dt+rem)).
double besq_bridge_step_to_zero(double x, double dt, double rem, double delta,
                                RngStream& rng);

// Count mixture for the bridge decomposition: P(N=n) proportional to
// (z/2)^{2n-1} / (n! Gamma(n)) for n >= 1, normalized by I_1(z).
long sample_bridge_component_count(double z, RngStream& rng);

// Trapezoidal int ds / X_s^2 over a sampled path; +inf if any value is 0.
double inv_square_integral_trapezoid(const std::vector<double>& times,
                                     const std::vector<double>& values);

}  // namespace bmc::bessel
