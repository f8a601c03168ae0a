#ifndef HARMEX_QUADRATURE_HPP
#define HARMEX_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "harmex/gauss.hpp"
#include "harmex/geometry.hpp"

namespace harmex {

enum class Convergence { converged, divergent, inconclusive };

std::string to_string(Convergence c);

/// Normalizer c_n of the probability measure on S^{n-1} in the polar angle:
/// int_S g(<x', e>) dsigma = c_n int_0^pi g(cos t) sin^{n-2} t dt.
double sphere_normalizer(int n);

/// One-dimensional rule for zonal integrands over S^{n-1}.
///
/// n = 2 is the trapezoid rule on the circle (exact for trigonometric
/// polynomials below the node count); n >= 3 is Gauss-Jacobi in s = cos(theta)
/// with weight (1-s^2)^{(n-3)/2}. Weights sum to one.
struct SphereRule {
  int n = 2;
  int degree = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Rule integrating zonal polynomials up to `degree` exactly.
  static SphereRule make(int n, int degree);

  template <class G>
  double integrate(G&& g) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * g(nodes[i]);
    return sum;
  }
};

/// int_S g(<x', y0>) dsigma(x') with a rule of the given degree.
double sphere_integral(const std::function<double(double)>& g, int n, int degree);

/// Composite Gauss-Legendre rule in the polar angle on [0, pi].
///
/// Panels double in width away from theta = 0 starting at a scale tied to
/// the radial gap (where zonal kernels concentrate), then continue with
/// uniform panels fine enough for the declared polynomial degree. Weights
/// include c_n sin^{n-2}(theta), so they sum to one.
class AngularRule {
 public:
  static AngularRule for_radius(int n, double gap, int degree, int points_per_panel = 8);

  int dimension() const { return n_; }
  const std::vector<Angle>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }

  /// int_S |f|^p dsigma from node values. When the values change sign, the
  /// zero between two nodes is located with f and the panel containing it is
  /// re-integrated on both sides, so |f| kinks do not spoil the rule.
  double mean_abs_pow(std::span<const double> values, double p,
                      const std::function<double(const Angle&)>& f) const;

  /// max |f| over the sphere: node maximum refined by a bracketing
  /// minimization, plus the two poles.
  double max_abs(std::span<const double> values,
                 const std::function<double(const Angle&)>& f) const;

 private:
  int n_ = 2;
  int points_per_panel_ = 8;
  std::vector<double> panel_edges_;
  std::vector<Angle> nodes_;
  std::vector<double> weights_;

  double panel_integral(double lo, double hi, double p,
                        const std::function<double(const Angle&)>& f) const;
};

/// Tuning of the boundary-clustered radial grid.
struct RadialGridSpec {
  int levels = 40;          // J: dyadic annuli [1-2^-j, 1-2^-j-1)
  int panels = 8;           // M: panels (and profile nodes) per annulus
  int points = 4;           // Gauss points per panel
  int tail_annuli = 5;      // T: annuli used by tail diagnostics

  RadialGridSpec refined() const { return {levels + 10, 2 * panels, points, tail_annuli}; }
};

/// Boundary-clustered sample points in [0, 1).
///
/// Profile nodes are the panel endpoints 1 - 2^-j (1 - m/(2M)), m = 0..M-1,
/// for every annulus j < J, plus the final point 1 - 2^-J. Integration uses
/// Gauss points inside each panel, in the gap variable 1 - r.
class RadialGrid {
 public:
  explicit RadialGrid(RadialGridSpec spec = {});

  const RadialGridSpec& spec() const { return spec_; }
  int levels() const { return spec_.levels; }
  int tail_annuli() const { return spec_.tail_annuli; }

  const std::vector<Radius>& nodes() const { return nodes_; }
  /// Annulus index of a profile node (the final node belongs to annulus J).
  int node_annulus(std::size_t i) const;

  const std::vector<Radius>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  int points_per_annulus() const { return spec_.panels * spec_.points; }
  /// Gap at the outer edge of the grid, 2^-J.
  double last_gap() const { return std::ldexp(1.0, -spec_.levels); }

 private:
  RadialGridSpec spec_;
  std::vector<Radius> nodes_;
  std::vector<Radius> points_;
  std::vector<double> weights_;
};

/// Result of a radial integral over [0, 1).
struct RadialIntegral {
  double value = 0.0;
  double tail = 0.0;                   // contribution credited to [1 - 2^-J, 1)
  std::vector<double> annulus_sums;    // per dyadic annulus
  double decay_ratio = 0.0;            // fitted geometric ratio of the last T sums
  Convergence status = Convergence::converged;
};

/// Geometric ratio fitted (least squares on logs) to a run of contributions.
double fitted_decay_ratio(std::span<const double> contributions);

/// Tail rule: all zero or ratio < 0.95 converges, ratio > 0.98 diverges,
/// anything in between is inconclusive.
Convergence classify_tail(std::span<const double> contributions);

/// int_0^1 h(r) (1-r)^gamma dr from values of h at the grid's Gauss points.
///
/// The piece beyond the last annulus is credited as h(last point) times the
/// exact integral of the weight. For gamma <= -1 a nonvanishing h near the
/// boundary makes the result divergent regardless of the partial sums.
RadialIntegral radial_integral(std::span<const double> h_at_points, double gamma,
                               const RadialGrid& grid);

template <class H>
RadialIntegral radial_integral(H&& h, double gamma, const RadialGrid& grid) {
  std::vector<double> values;
  values.reserve(grid.points().size());
  for (const auto& r : grid.points()) values.push_back(h(r));
  return radial_integral(std::span<const double>(values), gamma, grid);
}

/// int_{lo}^{hi} h(g) g^gamma dg over a gap range, with panels in geometric
/// progression (two per octave) from hi down to lo. When lo is 0 the panels
/// stop at hi * 2^-depth and a Gauss-Jacobi piece covers the rest.
double integrate_gap_power(const std::function<double(double)>& h, double lo, double hi,
                           double gamma, int depth = 64, int points = 8);

/// int_{|w| <= r_max} (slice) (1-|w|)^alpha dw where slice(rho) is a sphere
/// average at radius rho; dw = rho^{n-1} d rho dsigma (ball mass 1/n).
double ball_integral(const std::function<double(const Radius&)>& slice, int n, double alpha,
                     const Radius& r_max, int points = 8);

}  // namespace harmex

#endif  // HARMEX_QUADRATURE_HPP
