#include "bmc/localtimes.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "bmc/bessel.hpp"

namespace bmc::localtimes {

namespace {

// Green function of the square via the reflection-image lattice; the four
// images per cell form a quadrupole, so the truncated sum converges absolutely.
double square_green_raw(Point c, double half, Point a, Point b) {
  double S = 2.0 * half;
  double ax = a.x - (c.x - half), ay = a.y - (c.y - half);
  double bx = b.x - (c.x - half), by = b.y - (c.y - half);
  constexpr int K = 48;
  double g = 0.0;
  for (int k = -K; k <= K; ++k) {
    double xp = 2.0 * k * S + bx;
    double xm = 2.0 * k * S - bx;
    for (int l = -K; l <= K; ++l) {
      double yp = 2.0 * l * S + by;
      double ym = 2.0 * l * S - by;
      auto term = [&](double ix, double iy) {
        double dx = ax - ix, dy = ay - iy;
        return 0.5 * std::log(dx * dx + dy * dy);
      };
      g += -term(xp, yp) + term(xm, yp) + term(xp, ym) - term(xm, ym);
    }
  }
  return g;
}

struct PointKey {
  double x, y;
  bool operator==(const PointKey& o) const { return x == o.x && y == o.y; }
};
struct PointKeyHash {
  std::size_t operator()(const PointKey& k) const {
    std::hash<double> h;
    return h(k.x) * 1000003u ^ h(k.y);
  }
};

}  // namespace

Domain Domain::disc(Point center, double radius) {
  if (!(radius > 0.0)) throw std::domain_error("Domain::disc: radius must be > 0");
  Domain d;
  d.shape_ = Shape::disc;
  d.center_ = center;
  d.size_ = radius;
  return d;
}

Domain Domain::square(Point center, double half_side) {
  if (!(half_side > 0.0)) throw std::domain_error("Domain::square: half-side must be > 0");
  Domain d;
  d.shape_ = Shape::square;
  d.center_ = center;
  d.size_ = half_side;
  return d;
}

double Domain::diameter() const {
  return shape_ == Shape::disc ? 2.0 * size_ : 2.0 * size_ * std::sqrt(2.0);
}

bool Domain::contains(Point p) const {
  if (shape_ == Shape::disc) return dist(p, center_) < size_;
  return std::fabs(p.x - center_.x) < size_ && std::fabs(p.y - center_.y) < size_;
}

double Domain::boundary_distance(Point p) const {
  if (shape_ == Shape::disc) return size_ - dist(p, center_);
  double dx = size_ - std::fabs(p.x - center_.x);
  double dy = size_ - std::fabs(p.y - center_.y);
  return std::min(dx, dy);
}

double Domain::conformal_radius(Point p) const {
  if (!contains(p)) throw std::domain_error("conformal_radius: point outside the domain");
  if (shape_ == Shape::disc) {
    double r = dist(p, center_);
    return (size_ * size_ - r * r) / size_;
  }
  static std::mutex mu;
  static std::unordered_map<PointKey, double, PointKeyHash> cache;
  PointKey key{(p.x - center_.x) / size_, (p.y - center_.y) / size_};
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second * size_;
  }
  // log CR = 4-point average of G(p, p + delta e) + log(delta); the gradient
  // and curvature of the harmonic remainder cancel in the average.
  Domain unit = Domain::square(Point{0.0, 0.0}, 1.0);
  Point q{key.x, key.y};
  double delta = 1e-4 * std::max(0.05, unit.boundary_distance(q));
  double acc = 0.0;
  const double dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (auto& e : dirs) {
    Point r{q.x + delta * e[0], q.y + delta * e[1]};
    acc += square_green_raw(Point{0.0, 0.0}, 1.0, q, r) + std::log(delta);
  }
  double cr = std::exp(acc / 4.0);
  {
    std::lock_guard<std::mutex> lk(mu);
    cache.emplace(key, cr);
  }
  return cr * size_;
}

double Domain::green(Point a, Point b) const {
  if (shape_ == Shape::disc) {
    std::complex<double> za(a.x - center_.x, a.y - center_.y);
    std::complex<double> zb(b.x - center_.x, b.y - center_.y);
    double R = size_;
    return std::log(std::abs(R * R - std::conj(za) * zb) / (R * std::abs(za - zb)));
  }
  return square_green_raw(center_, size_, a, b);
}

std::string Domain::describe() const {
  std::ostringstream os;
  os << (shape_ == Shape::disc ? "disc" : "square") << "(center=(" << center_.x << ","
     << center_.y << "),size=" << size_ << ")";
  return os.str();
}

PathRecord simulate_path_until_exit(const Domain& domain, Point start, double dt,
                                    RngStream& rng, bool store_positions,
                                    const StepVisitor* visitor) {
  if (!domain.contains(start))
    throw std::domain_error("simulate_path_until_exit: start outside the domain");
  double bd0 = domain.boundary_distance(start);
  if (dt >= bd0 * bd0)
    throw std::domain_error("simulate_path_until_exit: dt too coarse for the start position");
  PathRecord rec;
  rec.dt = dt;
  double sd = std::sqrt(dt);
  Point p = start;
  double d1 = bd0;
  double t = 0.0;
  if (store_positions) rec.positions.push_back(p);
  for (;;) {
    Point q{p.x + sd * rng.normal(), p.y + sd * rng.normal()};
    t += dt;
    ++rec.steps;
    if (visitor) (*visitor)(q, dt);
    if (store_positions) rec.positions.push_back(q);
    if (!domain.contains(q)) {
      rec.exit_time = t;
      rec.exit_position = q;
      return rec;
    }
    double d2 = domain.boundary_distance(q);
    // Brownian-bridge excursion beyond the nearest face/tangent line.
    if (rng.uniform() < std::exp(-2.0 * d1 * d2 / dt)) {
      rec.exit_time = t - 0.5 * dt;
      rec.exit_position = q;
      return rec;
    }
    p = q;
    d1 = d2;
  }
}

ShellAccumulator::ShellAccumulator(Point x, double eps, double half_width)
    : x_(x), lo_(eps - half_width), hi_(eps + half_width), half_width_(half_width) {
  if (!(half_width > 0.0) || !(half_width < eps))
    throw std::domain_error("ShellAccumulator: need 0 < half-width < eps");
}

void ShellAccumulator::add(Point p, double dt) {
  double r = dist(p, x_);
  if (r >= lo_ && r <= hi_) {
    occupation_ += dt;
    ++hits_;
  }
}

AnnulusAccumulator::AnnulusAccumulator(Point x, double eps)
    : x_(x), lo_(eps), hi_(std::exp(1.0) * eps) {
  if (!(eps > 0.0)) throw std::domain_error("AnnulusAccumulator: eps must be > 0");
}

void AnnulusAccumulator::add(Point p, double dt) {
  double r = dist(p, x_);
  if (r >= lo_ && r <= hi_) occupation_ += dt;
}

double circle_local_time_estimate(const PathRecord& path, const Domain& domain,
                                  Point x, double eps, double half_width) {
  // Convention: circles not entirely inside the domain carry local time 0.
  if (domain.boundary_distance(x) <= eps + half_width) return 0.0;
  ShellAccumulator acc(x, eps, half_width);
  for (const Point& p : path.positions) acc.add(p, path.dt);
  return acc.local_time();
}

double annulus_occupation(const PathRecord& path, const Domain& domain, Point x,
                          double eps) {
  if (domain.boundary_distance(x) <= std::exp(1.0) * eps) return 0.0;
  AnnulusAccumulator acc(x, eps);
  for (const Point& p : path.positions) acc.add(p, path.dt);
  return acc.occupation();
}

RadialProfile exact_radial_cascade(Point x, double R, int n0, int depth, RngStream& rng,
                                   std::optional<double> seed_mean_override) {
  double eps0 = std::exp(-static_cast<double>(n0));
  if (!(eps0 < R)) throw std::domain_error("exact_radial_cascade: need e^{-n0} < R");
  if (depth < 0) throw std::domain_error("exact_radial_cascade: negative depth");
  double mean = seed_mean_override ? *seed_mean_override
                                   : 2.0 * eps0 * std::log(R / eps0);
  RadialProfile prof;
  prof.center = x;
  prof.n0 = n0;
  prof.depth = depth;
  prof.L.resize(depth + 1);
  prof.seed = rng.exponential(mean);
  prof.L[0] = prof.seed;
  double sq = std::exp(static_cast<double>(n0)) * prof.L[0];  // (sqrt(e^s L))^2 at s = n0
  for (int j = 1; j <= depth; ++j) {
    sq = bessel::besq_transition_sample(sq, 1.0, 0.0, rng);
    prof.L[j] = sq * std::exp(-static_cast<double>(n0 + j));
  }
  return prof;
}

RadialProfile h_field_interpolate(RadialProfile profile, RngStream& rng, int subdiv) {
  if (profile.L.empty()) throw std::domain_error("h_field_interpolate: L not populated");
  if (subdiv < 1) throw std::domain_error("h_field_interpolate: subdiv must be >= 1");
  profile.h_times.clear();
  profile.h_values.clear();
  auto x_at = [&](int j) {
    return std::sqrt(std::exp(static_cast<double>(profile.n0 + j)) * profile.L[j]);
  };
  profile.h_times.push_back(profile.n0);
  profile.h_values.push_back(x_at(0));
  for (int j = 0; j < profile.depth; ++j) {
    bessel::BridgeSpec spec;
    spec.u = x_at(j);
    spec.v = x_at(j + 1);
    spec.T = 1.0;
    for (int i = 1; i < subdiv; ++i)
      spec.grid.push_back(static_cast<double>(i) / subdiv);
    auto path = bessel::bessel_bridge_0dim_sample(spec, rng, bessel::BridgeMethod::pitman);
    for (std::size_t i = 1; i < path.times.size(); ++i) {
      profile.h_times.push_back(profile.n0 + j + path.times[i]);
      profile.h_values.push_back(path.values[i]);
    }
  }
  return profile;
}

HittingEstimate hitting_probability_estimate(const Domain& domain, Point x0, Point x,
                                             double eps, long n_paths, RngStream& rng,
                                             double dt) {
  if (!domain.contains(x0) || !domain.contains(x))
    throw std::domain_error("hitting_probability_estimate: points must be inside the domain");
  HittingEstimate est;
  est.n_paths = n_paths;
  est.prediction = domain.green(x0, x) / std::fabs(std::log(eps));
  double d0 = dist(x0, x);
  if (d0 <= eps) {
    est.probability = est.ci_lo = est.ci_hi = 1.0;
    return est;
  }
  if (dt <= 0.0) dt = 1e-6 * domain.diameter() * domain.diameter();
  double sd = std::sqrt(dt);
  bool direct = eps >= 25.0 * sd;
  // Splitting circles for sub-resolution targets: once the path reaches
  // rho_in, the exact annulus odds decide a hit before returning to rho_out.
  double rho_in = std::min(25.0 * sd * 2.0, 0.3 * d0);
  double rho_out = std::exp(0.5) * rho_in;
  double p_split = direct ? 1.0 : 0.5 / std::log(rho_out / eps);
  long hits = 0;
  for (long i = 0; i < n_paths; ++i) {
    Point p = x0;
    double bd1 = domain.boundary_distance(p);
    double target1 = dist(p, x) - (direct ? eps : rho_in);
    bool armed = true;
    bool hit = false;
    for (;;) {
      Point q{p.x + sd * rng.normal(), p.y + sd * rng.normal()};
      if (!domain.contains(q)) break;
      double bd2 = domain.boundary_distance(q);
      if (rng.uniform() < std::exp(-2.0 * bd1 * bd2 / dt)) break;
      double rq = dist(q, x);
      double target2 = rq - (direct ? eps : rho_in);
      bool reached = target2 <= 0.0;
      if (!reached && armed && target1 > 0.0 &&
          rng.uniform() < std::exp(-2.0 * target1 * target2 / dt))
        reached = true;
      if (reached && armed) {
        if (direct || rng.uniform() < p_split) { hit = true; break; }
        armed = false;
      }
      if (!armed && rq >= rho_out) armed = true;
      p = q;
      bd1 = bd2;
      target1 = target2;
    }
    if (hit) ++hits;
  }
  double phat = static_cast<double>(hits) / n_paths;
  double se = std::sqrt(std::max(phat * (1.0 - phat), 1e-12) / n_paths);
  est.probability = phat;
  est.ci_lo = phat - 1.959963984540054 * se;
  est.ci_hi = phat + 1.959963984540054 * se;
  return est;
}

std::string radial_profile_to_json(const RadialProfile& p, const Domain& domain) {
  nlohmann::json j;
  j["schema"] = "radial_profile/1";
  j["center"] = {p.center.x, p.center.y};
  j["n0"] = p.n0;
  j["depth"] = p.depth;
  j["L"] = p.L;
  j["seed"] = p.seed;
  j["k_x"] = p.k_x;
  j["domain"] = domain.describe();
  if (!p.h_times.empty()) {
    j["h_times"] = p.h_times;
    j["h_values"] = p.h_values;
  }
  return j.dump();
}

RadialProfile radial_profile_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RadialProfile p;
  p.center = Point{j.at("center")[0].get<double>(), j.at("center")[1].get<double>()};
  p.n0 = j.at("n0").get<int>();
  p.depth = j.at("depth").get<int>();
  p.L = j.at("L").get<std::vector<double>>();
  p.seed = j.at("seed").get<double>();
  p.k_x = j.at("k_x").get<int>();
  if (j.contains("h_times")) {
    p.h_times = j.at("h_times").get<std::vector<double>>();
    p.h_values = j.at("h_values").get<std::vector<double>>();
  }
  return p;
}

std::string path_record_summary_json(const PathRecord& p, const Domain& domain) {
  nlohmann::json j;
  j["schema"] = "path_record_summary/1";
  j["dt"] = p.dt;
  j["steps"] = p.steps;
  j["exit_time"] = p.exit_time;
  j["exit_position"] = {p.exit_position.x, p.exit_position.y};
  j["domain"] = domain.describe();
  return j.dump();
}

}  // namespace bmc::localtimes
