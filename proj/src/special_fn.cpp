#include "harmex/special_fn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "harmex/gauss.hpp"

namespace harmex {

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("log_gamma: argument must be positive");
  // glibc lgamma is accurate to a few ulp on (0, inf); the sign output is
  // irrelevant for positive arguments.
  return std::lgamma(x);
}

double GammaRatioSpec::log_value(int k) const {
  double sum = 0.0;
  for (double s : numerator_shifts) sum += log_gamma(s + k);
  for (double s : denominator_shifts) sum -= log_gamma(s + k);
  return sum;
}

double GammaRatioSpec::operator()(int k) const { return std::exp(log_value(k)); }

double frac_deriv_multiplier(int k, double t, int n) {
  if (k < 0 || n < 2) throw std::domain_error("frac_deriv_multiplier: need k >= 0, n >= 2");
  const double half_n = 0.5 * n;
  if (!(k + t + half_n > 0.0) || !(t + half_n > 0.0)) {
    throw std::domain_error("frac_deriv_multiplier: Gamma pole (need k+t+n/2 > 0 and t+n/2 > 0)");
  }
  return std::exp(log_gamma(k + t + half_n) - log_gamma(k + half_n) - log_gamma(t + half_n));
}

double kernel_coefficient(int k, double alpha, int n) {
  if (!(alpha > -1.0)) throw std::domain_error("kernel_coefficient: alpha must exceed -1");
  if (k < 0 || n < 2) throw std::domain_error("kernel_coefficient: need k >= 0, n >= 2");
  const double half_n = 0.5 * n;
  return 2.0 * std::exp(log_gamma(alpha + 1.0 + k + half_n) - log_gamma(alpha + 1.0) -
                        log_gamma(k + half_n));
}

double zonal_dimension(int k, int n) {
  if (k < 0 || n < 2) throw std::domain_error("zonal_dimension: need k >= 0, n >= 2");
  if (k == 0) return 1.0;
  if (n == 2) return 2.0;
  // (2k+n-2)/(n-2) * binom(k+n-3, k)
  const double log_binom = log_gamma(k + n - 2.0) - log_gamma(k + 1.0) - log_gamma(n - 2.0);
  return (2.0 * k + n - 2.0) / (n - 2.0) * std::exp(log_binom);
}

void zonal_values(int n, double s, std::span<double> out) {
  if (n < 2) throw std::domain_error("zonal_values: dimension must be at least 2");
  if (!(std::abs(s) <= 1.0)) throw std::domain_error("zonal_values: cosine outside [-1, 1]");
  const std::size_t count = out.size();
  if (count == 0) return;
  out[0] = 1.0;
  if (count == 1) return;
  if (n == 2) {
    // Z_k = 2 T_k(s)
    double tm1 = 1.0;
    double t = s;
    out[1] = 2.0 * t;
    for (std::size_t k = 2; k < count; ++k) {
      const double next = 2.0 * s * t - tm1;
      tm1 = t;
      t = next;
      out[k] = 2.0 * t;
    }
    return;
  }
  // Gegenbauer C_k^lambda, lambda = (n-2)/2, then Z_k = (k + lambda)/lambda C_k.
  const double lambda = 0.5 * (n - 2);
  double cm1 = 1.0;
  double c = 2.0 * lambda * s;
  out[1] = (1.0 + lambda) / lambda * c;
  for (std::size_t k = 2; k < count; ++k) {
    const double kk = static_cast<double>(k);
    const double next = (2.0 * (kk + lambda - 1.0) * s * c - (kk + 2.0 * lambda - 2.0) * cm1) / kk;
    cm1 = c;
    c = next;
    out[k] = (kk + lambda) / lambda * c;
  }
}

double zonal_value(int k, int n, double s) {
  if (k < 0) throw std::domain_error("zonal_value: degree must be nonnegative");
  std::vector<double> buf(static_cast<std::size_t>(k) + 1);
  zonal_values(n, s, buf);
  return buf.back();
}

namespace {

constexpr int kPanelPoints = 20;
constexpr int kEndPoints = 40;
constexpr double kBoundaryClip = 1e-12;

// Integral of (1-u)^alpha u^e over [lo, hi] with panels whose widths double
// leftward from hi, starting at first_width.
double graded_from_right(double lo, double hi, double first_width, double alpha, double e) {
  auto integrand = [alpha, e](double u) { return std::pow(1.0 - u, alpha) * std::pow(u, e); };
  double sum = 0.0;
  double right = hi;
  double width = first_width;
  while (right > lo) {
    const double left = std::max(lo, right - width);
    if (left == 0.0 && e < 64.0 && e != std::floor(e)) {
      sum += integrate_power_left([alpha](double u) { return std::pow(1.0 - u, alpha); }, right, e,
                                  kEndPoints);
    } else {
      sum += integrate_gauss(integrand, left, right, kPanelPoints);
    }
    right = left;
    width *= 2.0;
  }
  return sum;
}

}  // namespace

double radial_moment(int k, double alpha, int n, const IntervalSet& L) {
  if (!(alpha > -1.0)) throw std::domain_error("radial_moment: alpha must exceed -1");
  if (k < 0 || n < 2) throw std::domain_error("radial_moment: need k >= 0, n >= 2");
  const double e = k + 0.5 * n - 1.0;  // exponent of u after u = rho^2
  const double scale = 1.0 / (e + 1.0);
  double total = 0.0;
  for (const auto& part : L.intervals()) {
    const double lo = part.lo * part.lo;
    if (part.hi > 1.0 - kBoundaryClip) {
      const double end = std::min(1.0 - lo, scale);
      // v = 1 - u on [0, end]: v^alpha (1-v)^e
      total += integrate_power_left([e](double v) { return std::pow(1.0 - v, e); }, end, alpha,
                                    kEndPoints);
      if (1.0 - end > lo) total += graded_from_right(lo, 1.0 - end, end, alpha, e);
    } else {
      const double hi = part.hi * part.hi;
      const double first = std::min({hi - lo, 1.0 - hi, scale});
      total += graded_from_right(lo, hi, first, alpha, e);
    }
  }
  return 0.5 * total;
}

}  // namespace harmex
