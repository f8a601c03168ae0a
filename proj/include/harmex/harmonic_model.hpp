#ifndef HARMEX_HARMONIC_MODEL_HPP
#define HARMEX_HARMONIC_MODEL_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harmex/geometry.hpp"

namespace harmex {

class AngularRule;

/// Truncated Taylor series c[0] + c[1] tau + ... + c[order] tau^order.
struct Jet {
  static constexpr int kMaxOrder = 10;
  int order = 0;
  std::array<double, kMaxOrder + 1> c{};
};

Jet operator*(const Jet& a, const Jet& b);
Jet operator+(const Jet& a, const Jet& b);
Jet operator*(double s, const Jet& a);
/// a^e for a jet with positive constant term.
Jet pow(const Jet& a, double e);

/// (r d/dr)^j P(r, s) for j = 0..out.size()-1, where P is the Poisson kernel
/// (1 - r^2) / (1 - 2 r s + r^2)^{n/2}. The radius carries its gap and the
/// cosine enters through the versine, so nothing cancels near r = 1, s = 1.
void poisson_radial_derivatives(int n, const Radius& r, double versine, std::span<double> out);

/// Harmonic function on the unit ball in R^n given by a finite zonal expansion
/// f(r x') = sum_{k <= K} a_k r^k Z_k(<x', pole>).
class ZonalExpansion {
 public:
  ZonalExpansion() = default;
  /// Pole defaults to the last coordinate vector e_n.
  ZonalExpansion(int n, std::vector<double> coeffs, std::vector<double> pole = {});

  int dimension() const { return n_; }
  /// Truncation degree K (-1 for the zero expansion).
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  const std::vector<double>& pole() const { return pole_; }
  double coefficient(int k) const { return k >= 0 && k <= degree() ? coeffs_[k] : 0.0; }

  /// sum a_k r^k Z_k(s), ascending in k.
  double operator()(double r, double s) const;
  /// Value at a point of the ball given in Cartesian coordinates.
  double at_point(std::span<const double> x) const;

  /// The coefficients a_k r^k, for repeated evaluation on one sphere.
  std::vector<double> radial_coefficients(double r) const;

 private:
  int n_ = 2;
  std::vector<double> coeffs_;
  std::vector<double> pole_;
};

/// sum_k c_k Z_k(s) in dimension n (ascending order, one recurrence pass).
double zonal_sum(int n, std::span<const double> c, double s);

double evaluate(const ZonalExpansion& f, double r, double s);

/// Coefficientwise multiplier Gamma(k+t+n/2) / (Gamma(k+n/2) Gamma(t+n/2)).
ZonalExpansion fractional_derivative(const ZonalExpansion& f, double t);

/// Weighted Bergman kernel Q_alpha(., y) truncated at degree K.
ZonalExpansion bergman_kernel(int n, double alpha, std::span<const double> y, int K);

/// Smallest K with sum_{k > K} kernel_coefficient(k, alpha, n) Z_k(1) rho_max^k < tol.
int truncation_degree(int n, double alpha, double rho_max, double tol);

/// scale * sum_k Gamma(k+a)/Gamma(k+n/2) (rho0 r)^k Z_k(s), summed in closed form.
///
/// For n = 2 this is a complex power of 1 - z. In higher dimensions the
/// Gamma ratio is written as a polynomial in k times a Beta integral, so the
/// sum becomes a polynomial in r d/dr applied to the Poisson kernel and, when
/// a - n/2 is not a nonnegative integer, averaged over r -> u r against a
/// Beta density. Both routes work from the gap 1 - rho0 r and the versine of
/// the angle, which keeps the evaluation accurate at gaps far below machine
/// epsilon.
class GammaRatioSeries {
 public:
  enum class Route { automatic, radial_derivatives };

  GammaRatioSeries(int n, double scale, double a, double rho0 = 1.0, Route route = Route::automatic);

  int dimension() const { return n_; }
  double scale() const { return scale_; }
  double shift() const { return a_; }
  double rho0() const { return rho0_.value; }

  double coefficient(int k) const;
  double operator()(const Radius& r, const Angle& angle) const;
  /// Gap of the effective radius rho0 r, where the function concentrates.
  double effective_gap(const Radius& r) const { return scaled(rho0_, r).gap; }

 private:
  int n_;
  double scale_;
  double a_;
  Radius rho0_;
  Route route_;
  bool use_complex_ = false;
  bool integral_ = false;
  double a_prime_ = 0.0;                // shift left in the Beta integral
  double beta_norm_ = 1.0;              // 1 / Gamma(n/2 - a')
  std::vector<double> r_poly_;          // p_j in sum_j p_j (r d/dr)^j

  double differential_part(const Radius& t, double versine) const;
  double complex_route(const Radius& t, const Angle& angle) const;
  double integral_route(const Radius& t, const Angle& angle) const;
};

/// A harmonic function given by an optional closed-form series plus a finite
/// zonal correction with the same pole.
class HarmonicFunction {
 public:
  HarmonicFunction() = default;
  explicit HarmonicFunction(ZonalExpansion finite);
  HarmonicFunction(GammaRatioSeries series, ZonalExpansion finite);

  int dimension() const { return finite_.dimension(); }
  bool is_finite() const { return !series_.has_value(); }
  const std::optional<GammaRatioSeries>& series() const { return series_; }
  const ZonalExpansion& finite() const { return finite_; }

  double coefficient(int k) const;
  double operator()(const Radius& r, const Angle& angle) const;

  /// Gap that sets the width of the angular peak at radius r (1 when the
  /// function has no boundary concentration).
  double concentration_gap(const Radius& r) const;
  /// Polynomial degree the angular rule must resolve.
  int angular_degree() const { return finite_reach_ ? 0 : std::max(finite_.degree(), 0); }

  /// Declares that the finite part behaves like a kernel with pole radius
  /// `reach`: its coefficients decay like reach^k, so at radius r it peaks
  /// with width about 1 - reach r instead of oscillating at its full degree.
  HarmonicFunction with_finite_reach(const Radius& reach) const;

  /// Values at the nodes of an angular rule on the sphere of radius r.
  void sample(const Radius& r, const AngularRule& rule, std::vector<double>& out) const;

  HarmonicFunction minus(const ZonalExpansion& g) const;
  /// Truncated expansion of degree K.
  ZonalExpansion truncated(int K) const;

 private:
  std::optional<GammaRatioSeries> series_;
  ZonalExpansion finite_;
  std::optional<Radius> finite_reach_;
};

/// Declarative description of a test function.
struct TestFunctionSpec {
  enum class Kind { poisson, q_kernel, p_alpha, polynomial, random };

  Kind kind = Kind::poisson;
  int n = 2;
  int K = 200;                   // truncation degree for expansion()
  double beta = 0.0;             // q_kernel order
  double rho0 = 1.0;             // q_kernel pole radius
  double alpha = 1.0;            // p_alpha order
  std::vector<double> coeffs;    // polynomial
  std::uint64_t seed = 0;        // random
  double decay = 1.0;            // random

  static TestFunctionSpec poisson(int n, int K = 200);
  static TestFunctionSpec q_kernel(int n, double beta, double rho0 = 1.0, int K = 200);
  static TestFunctionSpec p_alpha(int n, double alpha, int K = 200);
  static TestFunctionSpec polynomial(int n, std::vector<double> coeffs);
  static TestFunctionSpec random(int n, int K, std::uint64_t seed, double decay);

  /// Throws std::invalid_argument when parameters are out of range.
  void validate() const;
  /// Exact function (closed-form series for kernel families).
  HarmonicFunction function() const;
  /// Expansion truncated at degree K.
  ZonalExpansion expansion() const;
  double coefficient(int k) const;
  std::string label() const;
};

std::string to_string(TestFunctionSpec::Kind kind);
void to_json(nlohmann::json& j, const TestFunctionSpec& spec);
void from_json(const nlohmann::json& j, TestFunctionSpec& spec);

}  // namespace harmex

#endif  // HARMEX_HARMONIC_MODEL_HPP
