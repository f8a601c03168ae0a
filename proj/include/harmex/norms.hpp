#ifndef HARMEX_NORMS_HPP
#define HARMEX_NORMS_HPP

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harmex/geometry.hpp"
#include "harmex/harmonic_model.hpp"
#include "harmex/quadrature.hpp"

namespace harmex {

enum class Family { A_p_alpha, A_inf_alpha, B_pq, B_inf_q, B_p_inf, M_beta_alpha, M_p_beta_alpha };

std::string to_string(Family family);
/// Throws std::invalid_argument for an unknown name.
Family family_from_string(const std::string& name);

/// A function space and its parameters.
///
/// A_p_alpha: (int_B |f|^p (1-|x|)^alpha dx)^{1/p}
/// A_inf_alpha: sup |f(x)| (1-|x|)^alpha
/// B_pq: (int_0^1 M_q(f,r)^p (1-r)^{alpha p - 1} dr)^{1/p}
/// B_inf_q: sup_r M_q(f,r) (1-r)^alpha
/// B_p_inf: B_pq with q = infinity
/// M_beta_alpha: sup_r (1-r)^beta A_alpha(f,r)
/// M_p_beta_alpha: (int_0^1 (1-r)^{beta p - 1} A_alpha(f,r)^p dr)^{1/p}
struct SpaceParams {
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  Family family = Family::B_pq;
  double p = 1.0;
  double q = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  double t = std::numeric_limits<double>::quiet_NaN();  // unset unless a theorem needs it

  static SpaceParams A(double p, double alpha);
  static SpaceParams A_inf(double alpha);
  static SpaceParams B(double p, double q, double alpha);
  static SpaceParams B_inf(double q, double alpha);
  static SpaceParams B_p_inf(double p, double alpha);
  static SpaceParams M(double alpha, double beta);
  static SpaceParams M_p(double p, double alpha, double beta);

  /// Throws std::invalid_argument naming the violated range.
  void validate() const;
  std::string label() const;
};

void to_json(nlohmann::json& j, const SpaceParams& params);
void from_json(const nlohmann::json& j, SpaceParams& params);

/// A norm value or a tagged divergence.
struct NormResult {
  double value = 0.0;
  Convergence status = Convergence::converged;
  double tail_ratio = 0.0;  // fitted growth/decay per annulus near r = 1

  bool finite() const { return status == Convergence::converged; }
};

/// Nonnegative function of the radius sampled at the profile nodes of a grid.
struct RadialProfile {
  RadialGridSpec grid;
  std::vector<Radius> radii;
  std::vector<double> values;

  /// Largest value and its node index.
  double max() const;
  std::size_t argmax() const;
  /// Largest value over the nodes of annulus j.
  double annulus_max(const RadialGrid& g, int j) const;
};

/// M_p(f, r); p = infinity gives the maximum over the sphere.
double integral_mean(const HarmonicFunction& f, double p, const Radius& r);
double integral_mean(const ZonalExpansion& f, double p, double r);

/// M_p(f, r) at each radius, evaluated in parallel.
std::vector<double> integral_means(const HarmonicFunction& f, double p, std::span<const Radius> radii);

/// r -> (1-r)^alpha M_p(f, r) at the grid nodes.
RadialProfile weighted_mean_profile(const HarmonicFunction& f, double p, double alpha, const RadialGrid& grid);

/// r -> A_alpha(f, r) = int_{|w| <= r} |f(w)| (1-|w|)^alpha dw at the grid nodes.
RadialProfile ball_average_profile(const HarmonicFunction& f, double alpha, const RadialGrid& grid);

/// Cumulative A_alpha at the nodes from M_1 at the grid's Gauss points.
std::vector<double> cumulative_ball_average(std::span<const double> m1_at_points, int n, double alpha,
                                            const RadialGrid& grid);

/// A_alpha at every Gauss point of the grid, from M_1 there: node value plus
/// the integral of the panel's interpolant of the integrand.
std::vector<double> ball_average_at_points(std::span<const double> m1_at_points, int n, double alpha,
                                           const RadialGrid& grid);

/// A_alpha(f, r) at an arbitrary radius from the cumulative node values:
/// the last node inside r plus a Gauss rule over the remaining slice.
double ball_average_at(const HarmonicFunction& f, double alpha, const RadialGrid& grid,
                       std::span<const double> node_values, const Radius& r);

/// Norm of f in the given space. Divergence is reported, never thrown.
NormResult space_norm(const HarmonicFunction& f, const SpaceParams& params, const RadialGrid& grid = RadialGrid());
NormResult space_norm(const ZonalExpansion& f, const SpaceParams& params, const RadialGrid& grid = RadialGrid());

/// sup over r of a profile that is sampled at the grid nodes, refined by a
/// bracketing search in the panels around the best node. `eval` computes
/// the profile at an arbitrary radius. The tail status is divergent when
/// the annulus maxima keep growing geometrically.
NormResult profile_sup(const RadialProfile& profile, const RadialGrid& grid,
                       const std::function<double(const Radius&)>& eval);

}  // namespace harmex

#endif  // HARMEX_NORMS_HPP
