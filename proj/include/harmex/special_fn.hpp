#ifndef HARMEX_SPECIAL_FN_HPP
#define HARMEX_SPECIAL_FN_HPP

#include <span>
#include <vector>

#include "harmex/interval_set.hpp"

namespace harmex {

/// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

/// Ratio prod_i Gamma(k + num_i) / prod_j Gamma(k + den_j) for integer degree k.
///
/// Every Gamma argument must be strictly positive; the ratio is formed from
/// log-Gamma differences so degrees in the thousands do not overflow.
struct GammaRatioSpec {
  std::vector<double> numerator_shifts;
  std::vector<double> denominator_shifts;

  double log_value(int k) const;
  double operator()(int k) const;
};

/// Multiplier of the degree-k component under the fractional derivative of
/// order t in dimension n: Gamma(k+t+n/2) / (Gamma(k+n/2) Gamma(t+n/2)).
double frac_deriv_multiplier(int k, double t, int n);

/// Degree-k coefficient of the weighted harmonic Bergman kernel,
/// 2 Gamma(alpha+1+k+n/2) / (Gamma(alpha+1) Gamma(k+n/2)), alpha > -1.
double kernel_coefficient(int k, double alpha, int n);

/// Dimension of the space of degree-k spherical harmonics on S^{n-1}.
double zonal_dimension(int k, int n);

/// Zonal harmonic of degree k as a function of the cosine s = <x', y'>,
/// normalized for the probability surface measure (so Z_k(1) equals
/// zonal_dimension(k, n) and Z_k reproduces degree-k harmonics).
double zonal_value(int k, int n, double s);

/// Fills out[k] = Z_k(s) for k = 0 .. out.size()-1 in one recurrence pass.
void zonal_values(int n, double s, std::span<double> out);

/// Integral over L of (1-rho^2)^alpha rho^{2k+n-1} d rho.
///
/// Computed after the substitution u = rho^2 with composite Gauss rules
/// graded toward the right end of every interval; an interval reaching
/// the boundary (right end above 1 - 1e-12) gets a Gauss-Jacobi end panel
/// that absorbs (1-u)^alpha.
double radial_moment(int k, double alpha, int n, const IntervalSet& L);

}  // namespace harmex

#endif  // HARMEX_SPECIAL_FN_HPP
