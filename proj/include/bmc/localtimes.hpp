#pragma once
// Planar Brownian motion killed at domain exit, circle local-time and annulus
// occupation estimators, the exact radial local-time cascade, and the
// bridge-interpolated radial field.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bmc/rng.hpp"

namespace bmc::localtimes {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double dist(Point a, Point b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

class Domain {
 public:
  enum class Shape { disc, square };

  static Domain disc(Point center, double radius);
  static Domain square(Point center, double half_side);

  Shape shape() const { return shape_; }
  Point center() const { return center_; }
  double radius() const { return size_; }     // disc radius or square half-side
  double diameter() const;
  bool contains(Point p) const;
  // Distance from an interior point to the boundary (>= 0 inside).
  double boundary_distance(Point p) const;
  // Conformal radius CR(p, D): closed form for the disc, cached numeric
  // Green-function limit for the square.
  double conformal_radius(Point p) const;
  // Green function (2D potential-theoretic normalization G = -log|x-y| + harmonic).
  double green(Point a, Point b) const;

  std::string describe() const;

 private:
  Shape shape_ = Shape::disc;
  Point center_{};
  double size_ = 1.0;
};

struct RadialProfile {
  Point center{};
  int n0 = 0;     // outermost dyadic index, radius e^{-n0}
  int depth = 0;  // number of cascade steps below the seed
  std::vector<double> L;  // L[j] = local time at radius e^{-(n0+j)}, size depth+1
  double seed = 0.0;      // L[0] as drawn
  // Interpolated radial field: h_times[i] in [n0, n0+depth] (log-radius s),
  // h_values[i] the field value; integer s match sqrt(e^s L) exactly.
  std::vector<double> h_times;
  std::vector<double> h_values;
  int k_x = 0;  // smallest n >= 0 with e^{-n} <= |center - x0| (set by callers)
};

struct PathRecord {
  double dt = 0.0;
  double exit_time = 0.0;
  Point exit_position{};
  std::uint64_t steps = 0;
  std::vector<Point> positions;  // populated only when storage was requested
};

// Visitor receives each step's endpoint and the step duration; called before
// exit is resolved for the final (possibly corrected) step.
using StepVisitor = std::function<void(Point, double)>;

// Gaussian increments of variance dt per coordinate, killed at the first exit
// with the Brownian-bridge crossing correction against the nearest boundary.
PathRecord simulate_path_until_exit(const Domain& domain, Point start, double dt,
                                    RngStream& rng, bool store_positions = false,
                                    const StepVisitor* visitor = nullptr);

// Streaming occupation accumulator for a circular shell of radius eps and
// half-width r around x: estimate = occupation / (2r).
class ShellAccumulator {
 public:
  ShellAccumulator(Point x, double eps, double half_width);
  void add(Point p, double dt);
  double local_time() const { return occupation_ / (2.0 * half_width_); }
  std::uint64_t hits() const { return hits_; }

 private:
  Point x_;
  double lo_, hi_, half_width_;
  double occupation_ = 0.0;
  std::uint64_t hits_ = 0;
};

// Occupation of the annulus {eps <= |p - x| <= e*eps}.
class AnnulusAccumulator {
 public:
  AnnulusAccumulator(Point x, double eps);
  void add(Point p, double dt);
  double occupation() const { return occupation_; }

 private:
  Point x_;
  double lo_, hi_;
  double occupation_ = 0.0;
};

// Post-hoc estimators over a stored path (zero when the shell/annulus is not
// entirely inside the domain, matching the local-time convention).
double circle_local_time_estimate(const PathRecord& path, const Domain& domain,
                                  Point x, double eps, double half_width);
double annulus_occupation(const PathRecord& path, const Domain& domain, Point x,
                          double eps);

// Default shell half-width r = eps/|log eps|.
inline double default_shell_half_width(double eps) { return eps / std::fabs(std::log(eps)); }

// Exact cascade of L_{x, e^{-(n0+j)}} under the radial Markov structure:
// exponential seed at radius e^{-n0} (mean 2 e^{-n0} log(R e^{n0}) unless
// overridden), then unit-time dimension-0 Bessel transitions of sqrt(e^s L).
RadialProfile exact_radial_cascade(Point x, double R, int n0, int depth,
                                   RngStream& rng,
                                   std::optional<double> seed_mean_override = {});

// Fills h on a sub-grid of `subdiv` intervals per unit log-radius by
// independent zero-dimensional Bessel bridges between consecutive dyadic
// values.
RadialProfile h_field_interpolate(RadialProfile profile, RngStream& rng,
                                  int subdiv = 8);

struct HittingEstimate {
  double probability = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double prediction = 0.0;  // G_D(x0, x)/|log eps|
  long n_paths = 0;
};

// P_{x0}(hit D(x, eps) before exiting the domain).  For eps far below the
// step resolution the estimator switches to exact annulus-crossing odds once
// the path reaches a resolvable intermediate circle.
HittingEstimate hitting_probability_estimate(const Domain& domain, Point x0, Point x,
                                             double eps, long n_paths, RngStream& rng,
                                             double dt = 0.0);

// JSON serialization (documented schema; see README).
std::string radial_profile_to_json(const RadialProfile& p, const Domain& domain);
RadialProfile radial_profile_from_json(const std::string& text);
std::string path_record_summary_json(const PathRecord& p, const Domain& domain);

}  // namespace bmc::localtimes
