#pragma once
// Multiplicative-chaos measure approximations built from radial local-time
// profiles: subcritical, square-root-log-normalized critical, and derivative
// families, together with barrier-restricted variants and convergence
// diagnostics.

#include <cstdint>
#include <vector>

#include "bmc/localtimes.hpp"

namespace bmc::chaos {

// exp(-exp(2/(2-gamma))); the scale below which the subcritical comparison
// regime applies.
double eps_gamma(double gamma);

// Per-cell masses; `s` denotes sqrt(L/eps) for the cell.
double measure_subcritical_mass(double s, double gamma, double eps, double area);
double measure_seneta_heyde_mass(double s, double eps, double area);
double measure_derivative_mass(double s, double eps, double area);
// Restricted derivative mass: linear factor from the tau_{x,R}-stopped value
// (plus the beta shift), exponential factor from the tau-stopped value.
double measure_derivative_restricted_mass(double s_tau, double s_tau_R, double eps,
                                          double beta, bool good, double area);

struct GoodEventFlags {
  bool G = false;    // h stays below 2s + beta on [k_x, k]
  bool Gp = false;   // second layer: barrier lowered by sqrt(s)/(M log(2+s)^2)
  bool far = false;  // |x - x0| >= 1/M
};

// Evaluates the barrier events on the interpolated field of `profile`
// restricted to s in [k_x, k].
GoodEventFlags good_event_masks(const localtimes::RadialProfile& profile, int k,
                                double beta, double M, localtimes::Point x0);

struct ChaosParams {
  double beta = 6.0;
  double M = 10.0;
  std::vector<int> k_values = {6, 7, 8, 9, 10, 11, 12};  // eps = e^{-k}
  std::vector<double> gammas = {1.0, 1.5, 1.8};
  localtimes::Domain domain = localtimes::Domain::disc({0.0, 0.0}, 1.0);
  localtimes::Point x0{0.0, 0.0};
  int max_cells_per_side = 64;  // cap on mesh resolution (see README)
  int h_subdiv = 8;

  int max_k() const;
  // Mesh spacing: the finer of eps*|log eps| at the deepest level and the cap.
  double grid_spacing() const;
};

struct ChaosCell {
  localtimes::Point center;
  double area = 0.0;
  int k_x = 0;
  bool included = false;
  bool far = false;
  // Indexed by position in params.k_values:
  std::vector<double> sqrt_l_over_eps;
  std::vector<char> G, Gp;
};

struct ChaosField {
  ChaosParams params;
  std::uint64_t seed = 0;
  std::uint64_t run_index = 0;
  std::vector<ChaosCell> cells;
};

// One full marginal-law ensemble member: every included mesh cell gets an
// independent radial cascade and interpolated field.
ChaosField cascade_chaos_run(const ChaosParams& params, std::uint64_t seed,
                             std::uint64_t run_index, unsigned workers);

// Region totals per depth (and per gamma for the subcritical family).
struct RunTotals {
  std::vector<int> ks;
  std::vector<double> gammas;
  std::vector<double> m_g2;      // subcritical mass at gamma = 2
  std::vector<double> m_sh;      // sqrt|log eps| * m_g2
  std::vector<double> mu;        // derivative mass (signed)
  std::vector<double> mhat;      // critical mass on G
  std::vector<double> mhathat;   // ... on G' and the distance filter
  std::vector<double> muhat;     // restricted derivative mass (beta-shifted)
  std::vector<double> muhathat;
  std::vector<double> m_sub;     // [k][gamma] subcritical
  std::vector<double> mhat_sub;  // [k][gamma] subcritical on G
  double sub(const std::vector<double>& v, std::size_t ki, std::size_t gi) const {
    return v[ki * gammas.size() + gi];
  }
};

RunTotals run_totals(const ChaosField& field);

}  // namespace bmc::chaos
