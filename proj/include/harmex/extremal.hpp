#ifndef HARMEX_EXTREMAL_HPP
#define HARMEX_EXTREMAL_HPP

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harmex/harmonic_model.hpp"
#include "harmex/interval_set.hpp"
#include "harmex/norms.hpp"
#include "harmex/quadrature.hpp"

namespace harmex {

enum class Theorem { T3, T4, T5, T6, Tfinal };

std::string to_string(Theorem theorem);
/// Throws std::invalid_argument for an unknown tag.
Theorem theorem_from_string(const std::string& tag);

/// {r : g(r) >= epsilon}, with g interpolated linearly in log(1-r) between
/// profile nodes. When the last node is in the set, the set runs on to 1.
IntervalSet level_set(const RadialProfile& profile, double epsilon);

/// int_L (1-r)^{-1} dr = sum ln((1-a_i)/(1-b_i)); divergent when L reaches 1.
NormResult log_measure(const IntervalSet& L);

/// Tail rule for the logarithmic integral: L misses the last T annuli.
bool tail_criterion(const IntervalSet& L, const RadialGrid& grid);

/// Smallest epsilon in [lo, hi] (log-scale bisection) for which `holds`
/// is true, assuming it is monotone in epsilon. Returns hi when it never
/// holds below hi.
double bisect_threshold(const std::function<bool(double)>& holds, double lo, double hi, int steps = 40);

struct Threshold {
  double epsilon_star = 0.0;     // limsup estimate of the profile at r -> 1
  double grid_threshold = 0.0;   // smallest bisection epsilon meeting the criterion
  std::vector<double> tail_maxima;
  double tail_ratio = 0.0;
  bool bounded = true;           // false when the tail maxima keep growing
};

/// Threshold for the logarithmic criterion. The bisection answer is
/// reported as grid_threshold; epsilon_star is 0 when the tail maxima decay
/// geometrically, otherwise their Aitken limit (floored at `floor`).
Threshold s2_threshold(const RadialProfile& profile, const RadialGrid& grid,
                       const std::function<bool(double)>& criterion = {}, double floor = 1e-12, int steps = 40);

struct Diagnostic {
  Convergence status = Convergence::converged;
  double value = 0.0;
  std::vector<double> annulus_sums;
  double ratio = 0.0;
};

/// Outer integral of (int_L (1-r)^{t-alpha} (1-r rho)^{-(t+1)} dr)^p
/// against (1-rho)^{p alpha - 1}, L the level set of the profile.
Diagnostic finiteness_diagnostic_T4(const RadialProfile& profile, double alpha, double t, double p,
                                    double epsilon, const RadialGrid& grid);

/// Outer integral of (int_L (1-r rho)^{-(alpha+1)} dr)^p against
/// (1-rho)^{alpha p - 1}, L the level set of the (M_inf) profile.
Diagnostic finiteness_diagnostic_T6(const RadialProfile& profile, double alpha, double p, double epsilon,
                                    const RadialGrid& grid);

/// phi_L(r) = int_L (1 - r rho)^{-(1+alpha)} d rho in closed form.
double phi_integral(const IntervalSet& L, double alpha, const Radius& r);

/// w_k = kernel_coefficient(k, order, n) radial_moment(k, order, n, L), k = 0..K.
std::vector<double> split_multipliers(int n, double order, const IntervalSet& L, int K);

struct Split {
  ZonalExpansion f1;
  HarmonicFunction f2;
  std::vector<double> w;
  bool capped = false;     // f1 truncated at the degree cap before its terms decayed
  Radius reach{1.0, 0.0};  // pole radius that f1 behaves like
};

/// f1 = sum a_k w_k r^k Z_k, f2 = f - f1, with kernel order `order`.
/// Finite expansions split exactly; series are split until the terms of f1
/// fall below tol relative to their largest, or at max_degree.
Split split_decomposition(const HarmonicFunction& f, double order, const IntervalSet& L, int max_degree = 1500,
                          double tol = 1e-14);
Split split_decomposition(const ZonalExpansion& f, double order, const IntervalSet& L);

/// Parameters of one theorem.
struct TheoremParams {
  double alpha = 1.0;
  double p = 1.0;
  double t = std::numeric_limits<double>::quiet_NaN();  // T4 kernel order; alpha + 1/2 when unset
  double beta = 1.0;                                    // Tfinal

  /// Throws std::invalid_argument when out of the theorem's range.
  void validate(Theorem theorem) const;
  double kernel_order(Theorem theorem) const;
};

struct DistanceOptions {
  RadialGridSpec grid;
  int max_degree = 1500;
  /// Multiples of epsilon_star tried for the split (when epsilon_star > 0).
  std::vector<double> factors{1.05, 1.1, 1.25, 1.5, 2.0, 3.0, 5.0};
  /// Decades below the profile maximum tried when epsilon_star = 0.
  int decades = 12;
};

/// One epsilon of the upper-bound construction.
struct EpsilonRow {
  double epsilon = 0.0;
  IntervalSet level;
  bool admissible = false;          // the theorem's finiteness criterion holds
  int degree = -1;                  // degree of f1
  bool capped = false;
  double f2_norm = 0.0;             // ambient norm of f - f1
  Convergence f2_status = Convergence::converged;
  NormResult f1_small;              // small-space norm of f1
  double lower_bound_violation = 0.0;  // max of profile(f) - ||f2|| - profile(f1) on L
  double majorant = std::numeric_limits<double>::quiet_NaN();  // T5/T6
  double psi_sup = std::numeric_limits<double>::quiet_NaN();   // T5/T6
  Convergence psi_status = Convergence::converged;
  Diagnostic diagnostic;            // T4/T6
};

struct DistancePair {
  Theorem theorem = Theorem::T3;
  TheoremParams params;
  std::string function;
  bool rejected = false;
  std::string note;
  double ambient_norm = 0.0;
  double s2_estimate = 0.0;
  double epsilon_star = 0.0;
  double s1_upper = 0.0;
  double best_epsilon = 0.0;
  IntervalSet level_set;
  std::vector<double> tail_maxima;
  std::vector<EpsilonRow> rows;

  /// s1_upper / epsilon_star (NaN when epsilon_star is 0).
  double ratio() const;
};

DistancePair distance_report(const TestFunctionSpec& spec, Theorem theorem, const TheoremParams& params,
                             const DistanceOptions& options = {});

void to_json(nlohmann::json& j, const DistancePair& pair);

}  // namespace harmex

#endif  // HARMEX_EXTREMAL_HPP
