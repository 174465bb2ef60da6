#pragma once
// Small statistics toolbox: moment summaries, Kolmogorov-Smirnov tests,
// chi-square quantiles and least-squares slopes.  Verification routines all
// test at significance 0.001 unless stated otherwise.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bmc {

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;

  double ci95_lo() const { return mean - 1.959963984540054 * se; }
  double ci95_hi() const { return mean + 1.959963984540054 * se; }
};

inline Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.n = xs.size();
  if (s.n == 0) return s;
  double m = 0.0;
  for (double x : xs) m += x;
  m /= s.n;
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  v = s.n > 1 ? v / (s.n - 1) : 0.0;
  s.mean = m;
  s.sd = std::sqrt(v);
  s.se = s.sd / std::sqrt(static_cast<double>(s.n));
  return s;
}

inline double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of empty sample");
  std::sort(xs.begin(), xs.end());
  std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(xs.begin(), xs.end());
  double pos = q * (xs.size() - 1);
  std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= xs.size()) return xs.back();
  double frac = pos - i;
  return xs[i] * (1.0 - frac) + xs[i + 1] * frac;
}

// P(K > lambda) for the Kolmogorov distribution.
inline double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

struct KsResult {
  double statistic = 0.0;  // sup |F1 - F2|
  double p_value = 1.0;    // asymptotic
  bool reject(double alpha = 1e-3) const { return p_value < alpha; }
};

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
  }
  double ne = double(a.size()) * b.size() / (a.size() + b.size());
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_tail(std::sqrt(ne) * d);
  return r;
}

inline KsResult ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(a.begin(), a.end());
  double d = 0.0;
  std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    double f = cdf(a[i]);
    d = std::max(d, std::fabs(f - double(i) / n));
    d = std::max(d, std::fabs(f - double(i + 1) / n));
  }
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_tail(std::sqrt(double(n)) * d);
  return r;
}

// Wilson-Hilferty approximation; adequate for the coarse gate levels used here.
inline double chi_square_quantile(double p, double dof) {
  // inverse standard normal via Acklam's rational approximation
  auto inv_norm = [](double q) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    double plow = 0.02425;
    if (q < plow) {
      double u = std::sqrt(-2.0 * std::log(q));
      return (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
             ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }
    if (q > 1.0 - plow) {
      double u = std::sqrt(-2.0 * std::log(1.0 - q));
      return -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
             ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }
    double u = q - 0.5, t = u * u;
    return (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) * u /
           (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
  };
  double z = inv_norm(p);
  double h = 2.0 / (9.0 * dof);
  double w = 1.0 - h + z * std::sqrt(h);
  return dof * w * w * w;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need matching samples, n >= 2");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
  mx /= x.size();
  my /= y.size();
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

}  // namespace bmc
