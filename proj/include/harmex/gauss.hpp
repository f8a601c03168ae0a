#ifndef HARMEX_GAUSS_HPP
#define HARMEX_GAUSS_HPP

#include <cmath>
#include <vector>

namespace harmex {

/// Nodes and weights of an interpolatory rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b on [-1, 1], a, b > -1.
///
/// Nodes come from the Golub-Welsch eigenproblem and are polished by Newton
/// steps on the Jacobi recurrence; weights use the closed-form Christoffel
/// numbers. Rules are cached process-wide and the returned reference stays
/// valid for the lifetime of the program.
const GaussRule& gauss_jacobi(int npts, double a, double b);

/// Gauss-Legendre rule on [-1, 1] (cached).
inline const GaussRule& gauss_legendre(int npts) { return gauss_jacobi(npts, 0.0, 0.0); }

/// Integrates f over [lo, hi] with an npts-point Gauss-Legendre rule.
template <class F>
double integrate_gauss(F&& f, double lo, double hi, int npts) {
  const GaussRule& rule = gauss_legendre(npts);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

/// Integrates g(x) * x^power over [0, hi] with the singular factor absorbed
/// into a Gauss-Jacobi rule.
template <class F>
double integrate_power_left(F&& g, double hi, double power, int npts) {
  // x = hi (1 + y) / 2,  x^power = (hi/2)^power (1 + y)^power
  const GaussRule& rule = gauss_jacobi(npts, 0.0, power);
  const double half = 0.5 * hi;
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    sum += rule.weights[i] * g(half * (1.0 + rule.nodes[i]));
  }
  return sum * std::pow(half, power + 1.0);
}

}  // namespace harmex

#endif  // HARMEX_GAUSS_HPP
