#ifndef HARMEX_VERIFY_HPP
#define HARMEX_VERIFY_HPP

#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harmex/geometry.hpp"
#include "harmex/harmonic_model.hpp"
#include "harmex/interval_set.hpp"
#include "harmex/norms.hpp"

namespace harmex {

/// Outcome of one inequality or identity check.
///
/// For identities max_violation is the largest error. For claims of the
/// form "LHS <= C RHS" fitted_C is the largest observed ratio and
/// max_violation its relative change under one refinement.
struct CheckReport {
  std::string check;
  std::string params;
  double max_violation = 0.0;
  double fitted_C = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  bool pass = false;
  std::map<std::string, double> extra;
};

void to_json(nlohmann::json& j, const CheckReport& report);
/// "check,params,max_violation,fitted_C,pass"
std::string csv_header();
std::string csv_row(const CheckReport& report);

struct SamplePoint {
  Radius r;
  Angle angle;  // angle to the pole of the expansion
};

/// Reproducible random points with |x| <= r_max.
std::vector<SamplePoint> random_points(int count, double r_max, std::uint64_t seed);

/// Truncated Poisson expansion against (1-r^2)/|x - e|^n at random points
/// with |x| <= r_max; K comes from truncation_degree(n, 0, r_max, 1e-12).
/// The violation is relative to max(1, |P|).
CheckReport check_poisson_closed_form(int n, int count, double r_max, std::uint64_t seed, double tol = 1e-9);

/// kernel_coefficient * radial_moment over [0, 1) against 1 for k <= K.
CheckReport check_partition_of_unity(int n, double alpha, int K, double tol = 1e-10);

/// f(x) against the weighted Bergman integral of f over the ball, computed
/// by quadrature in (rho, y'). extra["coefficient_route"] holds the largest
/// difference between f and its coefficient-space reproduction.
CheckReport check_reproducing(const ZonalExpansion& f, double alpha, std::span<const SamplePoint> points,
                              double tol = 1e-8);

/// Kernel estimates. Part 1 (param = alpha > 0): the two-term pointwise
/// bound on |Q_alpha|. Part 2 (param = beta > -1): the sphere integral of
/// |Q_beta|. Part 3 (param = m > n - 1): the sphere integral of
/// |r x' - y'|^{-m}. The constant is fitted on a box of (r rho, theta),
/// then again on a box reaching twice as deep toward the boundary.
CheckReport check_lemma1(int part, double param, int n, double stability = 0.2);

/// Fitted constant of one part on a box whose gaps run down to 2^-depth.
double lemma1_constant(int part, double param, int n, int depth, int theta_steps);

/// Increasing function G(r) = h(1-r) (1-r)^power, power <= 0, with h smooth
/// between the break points (given in the gap variable 1 - r).
struct IncreasingFunction {
  std::string name;
  std::function<double(double)> h;
  double power = 0.0;
  std::vector<double> breaks;

  double operator()(double r) const { return h(1.0 - r) * std::pow(1.0 - r, power); }

  static IncreasingFunction constant(double c);
  static IncreasingFunction identity();
  static IncreasingFunction step(double r0);
  static IncreasingFunction blow_up(double a);
  static IncreasingFunction zero();
};

/// Both sides of the p <= 1 estimate for one G. Throws std::invalid_argument
/// when G decreases somewhere or the parameters are out of range.
std::pair<double, double> lemma2_sides(const IncreasingFunction& G, double beta, double s, double gamma, double p,
                                       int points = 8);
CheckReport check_lemma2(std::span<const IncreasingFunction> family, double beta, double s, double gamma, double p,
                         double stability = 0.2);

/// sup phi (1-r)^beta and beta int phi (1-r)^{beta-1}.
std::pair<double, double> lemma3_sides(const IncreasingFunction& phi, double beta, int nodes_per_octave = 8);
CheckReport check_lemma3(std::span<const IncreasingFunction> family, double beta, double stability = 0.2);

/// ||f||^p_{B^{inf,q}_alpha} <= alpha p ||f||^p_{B^{p,q}_alpha}.
CheckReport check_embedding(const HarmonicFunction& f, double p, double q, double alpha,
                            const RadialGrid& grid = RadialGrid(), double tol = 1e-10);

/// Quantities computed by dense polar sums at n = 2.
struct BruteForceQuery {
  enum class Kind { mean, ball_norm, ball_average, kernel_integral };

  Kind kind = Kind::mean;
  double p = 1.0;
  double alpha = 0.0;
  double r = 0.0;      // mean and ball_average radius; kernel_integral |x|
  double theta = 0.0;  // kernel_integral angle of x
  IntervalSet L = IntervalSet::whole();

  static BruteForceQuery mean(double p, double r);
  static BruteForceQuery ball_norm(double p, double alpha);
  static BruteForceQuery ball_average(double alpha, double r);
  /// int_L int_S (1-rho^2)^alpha Q_alpha(x, rho y') f(rho y') rho d rho d sigma(y').
  static BruteForceQuery kernel_integral(double alpha, const IntervalSet& L, double r, double theta);
};

/// Midpoint sums on an N x N polar grid and on 2N x 2N, combined by one
/// Richardson step; mean uses one circle sum of 256 N midpoints. Throws
/// std::invalid_argument for N < 16 or n != 2.
double bruteforce_oracle_n2(const TestFunctionSpec& spec, const BruteForceQuery& query, int resolution = 256);

}  // namespace harmex

#endif  // HARMEX_VERIFY_HPP
