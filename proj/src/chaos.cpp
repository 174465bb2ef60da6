#include "bmc/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bmc/parallel.hpp"
#include "bmc/rng.hpp"

namespace bmc::chaos {

namespace {
constexpr std::uint64_t kChaosPurpose = 3;
}

double eps_gamma(double gamma) {
  if (!(gamma < 2.0)) throw std::domain_error("eps_gamma: gamma must be < 2");
  return std::exp(-std::exp(2.0 / (2.0 - gamma)));
}

double measure_subcritical_mass(double s, double gamma, double eps, double area) {
  double k = std::fabs(std::log(eps));
  return std::sqrt(k) * std::exp(-0.5 * gamma * gamma * k) * std::exp(gamma * s) * area;
}

double measure_seneta_heyde_mass(double s, double eps, double area) {
  double k = std::fabs(std::log(eps));
  return std::sqrt(k) * measure_subcritical_mass(s, 2.0, eps, area);
}

double measure_derivative_mass(double s, double eps, double area) {
  double k = std::fabs(std::log(eps));
  return std::sqrt(k) * eps * eps * (-s + 2.0 * k) * std::exp(2.0 * s) * area;
}

double measure_derivative_restricted_mass(double s_tau, double s_tau_R, double eps,
                                          double beta, bool good, double area) {
  if (!good) return 0.0;
  double k = std::fabs(std::log(eps));
  return std::sqrt(k) * eps * eps * (-s_tau_R + 2.0 * k + beta) *
         std::exp(2.0 * s_tau) * area;
}

GoodEventFlags good_event_masks(const localtimes::RadialProfile& profile, int k,
                                double beta, double M, localtimes::Point x0) {
  if (profile.h_times.empty())
    throw std::domain_error("good_event_masks: interpolated field not populated");
  GoodEventFlags f;
  f.G = true;
  f.Gp = true;
  double from = static_cast<double>(profile.k_x);
  double to = static_cast<double>(k);
  for (std::size_t i = 0; i < profile.h_times.size(); ++i) {
    double s = profile.h_times[i];
    if (s < from - 1e-12 || s > to + 1e-12) continue;
    double h = profile.h_values[i];
    double barrier = 2.0 * s + beta;
    if (h > barrier) f.G = false;
    double lg = std::log(2.0 + s);
    if (h > barrier - std::sqrt(std::max(s, 0.0)) / (M * lg * lg)) f.Gp = false;
    if (!f.G && !f.Gp) break;
  }
  f.far = localtimes::dist(profile.center, x0) >= 1.0 / M;
  return f;
}

int ChaosParams::max_k() const {
  if (k_values.empty()) throw std::domain_error("ChaosParams: empty depth grid");
  return *std::max_element(k_values.begin(), k_values.end());
}

double ChaosParams::grid_spacing() const {
  double eps = std::exp(-static_cast<double>(max_k()));
  double fine = eps * std::fabs(std::log(eps));
  double cap = domain.diameter() / static_cast<double>(max_cells_per_side);
  return std::max(fine, cap);
}

ChaosField cascade_chaos_run(const ChaosParams& params, std::uint64_t seed,
                             std::uint64_t run_index, unsigned workers) {
  ChaosField field;
  field.params = params;
  field.seed = seed;
  field.run_index = run_index;

  const auto& dom = params.domain;
  double s = params.grid_spacing();
  // Enclosing box: radius for the disc, half-side for the square.
  double ext = dom.radius();
  int side = static_cast<int>(std::floor(2.0 * ext / s));
  double x_lo = dom.center().x - 0.5 * side * s;
  double y_lo = dom.center().y - 0.5 * side * s;
  int kmax = params.max_k();
  double R = dom.diameter();

  field.cells.resize(static_cast<std::size_t>(side) * side);
  parallel_for(field.cells.size(), workers, [&](std::size_t idx) {
    int i = static_cast<int>(idx) % side;
    int j = static_cast<int>(idx) / side;
    ChaosCell cell;
    cell.center = localtimes::Point{x_lo + (i + 0.5) * s, y_lo + (j + 0.5) * s};
    cell.area = s * s;
    double d = localtimes::dist(cell.center, params.x0);
    // cell square entirely inside the domain, and distinct from the origin
    bool inside = dom.contains(cell.center) &&
                  dom.boundary_distance(cell.center) >= s * 0.7071067811865476;
    if (!inside || d <= 0.0) {
      cell.included = false;
      field.cells[idx] = cell;
      return;
    }
    cell.included = true;
    cell.k_x = d >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log(d) - 1e-12));
    RngStream rng(seed, stream_id(kChaosPurpose, run_index, idx));
    auto prof = localtimes::exact_radial_cascade(cell.center, R, cell.k_x,
                                                 kmax - cell.k_x, rng);
    prof.k_x = cell.k_x;
    prof = localtimes::h_field_interpolate(std::move(prof), rng, params.h_subdiv);
    cell.sqrt_l_over_eps.resize(params.k_values.size());
    cell.G.resize(params.k_values.size());
    cell.Gp.resize(params.k_values.size());
    for (std::size_t ki = 0; ki < params.k_values.size(); ++ki) {
      int k = params.k_values[ki];
      if (k < cell.k_x) {
        cell.sqrt_l_over_eps[ki] = 0.0;
        cell.G[ki] = cell.Gp[ki] = 0;
        continue;
      }
      int j2 = k - cell.k_x;
      cell.sqrt_l_over_eps[ki] =
          std::sqrt(std::exp(static_cast<double>(k)) * prof.L[j2]);
      auto flags = good_event_masks(prof, k, params.beta, params.M, params.x0);
      cell.G[ki] = flags.G ? 1 : 0;
      cell.Gp[ki] = flags.Gp ? 1 : 0;
      cell.far = flags.far;
    }
    field.cells[idx] = cell;
  });
  return field;
}

RunTotals run_totals(const ChaosField& field) {
  const auto& P = field.params;
  RunTotals t;
  t.ks = P.k_values;
  t.gammas = P.gammas;
  std::size_t nk = P.k_values.size(), ng = P.gammas.size();
  t.m_g2.assign(nk, 0.0);
  t.m_sh.assign(nk, 0.0);
  t.mu.assign(nk, 0.0);
  t.mhat.assign(nk, 0.0);
  t.mhathat.assign(nk, 0.0);
  t.muhat.assign(nk, 0.0);
  t.muhathat.assign(nk, 0.0);
  t.m_sub.assign(nk * ng, 0.0);
  t.mhat_sub.assign(nk * ng, 0.0);
  for (const auto& cell : field.cells) {
    if (!cell.included) continue;
    for (std::size_t ki = 0; ki < nk; ++ki) {
      double eps = std::exp(-static_cast<double>(P.k_values[ki]));
      double s = cell.sqrt_l_over_eps[ki];
      bool g = cell.G[ki] != 0;
      bool gp = cell.Gp[ki] != 0;
      double m2 = measure_subcritical_mass(s, 2.0, eps, cell.area);
      double msh = measure_seneta_heyde_mass(s, eps, cell.area);
      t.m_g2[ki] += m2;
      t.m_sh[ki] += msh;
      t.mu[ki] += measure_derivative_mass(s, eps, cell.area);
      if (g) t.mhat[ki] += msh;
      if (gp && cell.far) t.mhathat[ki] += msh;
      t.muhat[ki] += measure_derivative_restricted_mass(s, s, eps, P.beta, g, cell.area);
      t.muhathat[ki] +=
          measure_derivative_restricted_mass(s, s, eps, P.beta, gp && cell.far, cell.area);
      for (std::size_t gi = 0; gi < ng; ++gi) {
        double msub = measure_subcritical_mass(s, P.gammas[gi], eps, cell.area);
        t.m_sub[ki * ng + gi] += msub;
        if (g) t.mhat_sub[ki * ng + gi] += msub;
      }
    }
  }
  return t;
}

}  // namespace bmc::chaos
