#include "harmex/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "harmex/gauss.hpp"
#include "harmex/parallel.hpp"
#include "harmex/special_fn.hpp"

namespace harmex {

namespace {

constexpr std::pair<Theorem, const char*> kTheoremNames[] = {
    {Theorem::T3, "T3"}, {Theorem::T4, "T4"}, {Theorem::T5, "T5"}, {Theorem::T6, "T6"}, {Theorem::Tfinal, "Tfinal"},
};

// Inner integrals of the T4/T6 diagnostics, raised to p, against
// (1-rho)^{p alpha - 1} over the grid.
template <class Inner>
Diagnostic outer_integral(const IntervalSet& L, double alpha, double p, const RadialGrid& grid, Inner&& inner) {
  Diagnostic out;
  if (L.empty()) {
    out.annulus_sums.assign(static_cast<std::size_t>(grid.levels()), 0.0);
    return out;
  }
  std::vector<double> h(grid.points().size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::pow(inner(grid.points()[i]), p);
  const auto res = radial_integral(std::span<const double>(h), p * alpha - 1.0, grid);
  out.status = res.status;
  out.value = res.value;
  out.annulus_sums = res.annulus_sums;
  out.ratio = res.decay_ratio;
  return out;
}

// Profile value at an arbitrary gap, linear in log(gap) between nodes and
// constant beyond the last node.
double interpolate_profile(const RadialProfile& profile, double gap) {
  const auto& radii = profile.radii;
  if (gap >= radii.front().gap) return profile.values.front();
  if (gap <= radii.back().gap) return profile.values.back();
  std::size_t i = 0;
  std::size_t j = radii.size() - 1;
  while (j - i > 1) {
    const std::size_t m = (i + j) / 2;
    if (radii[m].gap >= gap) i = m; else j = m;
  }
  const double x0 = std::log(radii[i].gap);
  const double x1 = std::log(radii[j].gap);
  const double lambda = (std::log(gap) - x0) / (x1 - x0);
  return profile.values[i] + lambda * (profile.values[j] - profile.values[i]);
}

// Angular rules and values of f at a fixed list of radii, reused for every
// function of the form f_weight * f + g with a finite expansion g.
class Samples {
 public:
  Samples(const HarmonicFunction& f, std::span<const Radius> radii, bool with_values)
      : f_(f), radii_(radii.begin(), radii.end()), rules_(radii.size()), values_(radii.size()) {
    parallel_for(radii_.size(), [&](std::size_t i) {
      rules_[i] = AngularRule::for_radius(f_.dimension(), f_.concentration_gap(radii_[i]), f_.angular_degree());
      if (with_values) f_.sample(radii_[i], rules_[i], values_[i]);
    });
    with_values_ = with_values;
  }

  double mean(std::size_t i, double p, double f_weight, const ZonalExpansion* g) const {
    if (f_weight != 0.0 && !with_values_) throw std::logic_error("Samples: values of f were not sampled");
    const Radius& r = radii_[i];
    const AngularRule& rule = rules_[i];
    const int n = f_.dimension();
    std::vector<double> rc;
    if (g != nullptr && g->degree() >= 0) rc = g->radial_coefficients(r.value);
    std::vector<double> values(rule.size(), 0.0);
    for (std::size_t j = 0; j < rule.size(); ++j) {
      double v = f_weight != 0.0 ? f_weight * values_[i][j] : 0.0;
      if (!rc.empty()) v += zonal_sum(n, rc, rule.nodes()[j].cos);
      values[j] = v;
    }
    auto at = [&](const Angle& a) {
      double v = f_weight != 0.0 ? f_weight * f_(r, a) : 0.0;
      if (!rc.empty()) v += zonal_sum(n, rc, a.cos);
      return v;
    };
    if (std::isinf(p)) return rule.max_abs(values, at);
    return std::pow(rule.mean_abs_pow(values, p, at), 1.0 / p);
  }

  std::vector<double> means(double p, double f_weight, const ZonalExpansion* g) const {
    std::vector<double> out(radii_.size());
    parallel_for(out.size(), [&](std::size_t i) { out[i] = mean(i, p, f_weight, g); });
    return out;
  }

 private:
  const HarmonicFunction& f_;
  std::vector<Radius> radii_;
  std::vector<AngularRule> rules_;
  std::vector<std::vector<double>> values_;
  bool with_values_ = false;
};

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return nullptr;
}

nlohmann::json intervals_json(const IntervalSet& L) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& iv : L.intervals()) out.push_back({iv.lo, iv.hi});
  return out;
}

}  // namespace

std::string to_string(Theorem theorem) {
  for (const auto& [t, name] : kTheoremNames) {
    if (t == theorem) return name;
  }
  return "unknown";
}

Theorem theorem_from_string(const std::string& tag) {
  for (const auto& [t, name] : kTheoremNames) {
    if (tag == name) return t;
  }
  throw std::invalid_argument("unknown theorem tag '" + tag + "'");
}

IntervalSet level_set(const RadialProfile& profile, double epsilon) {
  if (!(epsilon > 0.0)) throw std::domain_error("level_set: epsilon must be positive");
  IntervalSet out;
  const auto& g = profile.values;
  const auto& radii = profile.radii;
  if (g.empty()) return out;
  double start = g[0] >= epsilon ? radii[0].value : -1.0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const bool in0 = g[i] >= epsilon;
    const bool in1 = g[i + 1] >= epsilon;
    if (in0 == in1) continue;
    const double x0 = std::log(radii[i].gap);
    const double x1 = std::log(radii[i + 1].gap);
    const double lambda = (epsilon - g[i]) / (g[i + 1] - g[i]);
    const double crossing = 1.0 - std::exp(x0 + lambda * (x1 - x0));
    if (in1) {
      start = crossing;
    } else {
      out.add(start, crossing);
      start = -1.0;
    }
  }
  if (g.back() >= epsilon) out.add(start, 1.0);
  return out;
}

NormResult log_measure(const IntervalSet& L) {
  NormResult out;
  if (L.reaches_boundary()) {
    out.status = Convergence::divergent;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  for (const auto& iv : L.intervals()) out.value += std::log((1.0 - iv.lo) / (1.0 - iv.hi));
  return out;
}

bool tail_criterion(const IntervalSet& L, const RadialGrid& grid) {
  const double cut = 1.0 - std::ldexp(1.0, -(grid.levels() - grid.tail_annuli()));
  return L.intersected(IntervalSet{{cut, 1.0}}).empty();
}

double bisect_threshold(const std::function<bool(double)>& holds, double lo, double hi, int steps) {
  if (!(lo > 0.0 && hi >= lo)) throw std::domain_error("bisect_threshold: need 0 < lo <= hi");
  if (holds(lo)) return lo;
  if (!holds(hi)) return hi;
  double a = std::log(lo);
  double b = std::log(hi);
  for (int s = 0; s < steps; ++s) {
    const double mid = 0.5 * (a + b);
    if (holds(std::exp(mid))) b = mid; else a = mid;
  }
  return std::exp(b);
}

Threshold s2_threshold(const RadialProfile& profile, const RadialGrid& grid,
                       const std::function<bool(double)>& criterion, double floor, int steps) {
  if (profile.values.size() != grid.nodes().size()) {
    throw std::domain_error("s2_threshold: profile does not cover the grid's tail annuli");
  }
  Threshold out;
  const int J = grid.levels();
  const int T = grid.tail_annuli();
  for (int j = J - T; j < J; ++j) out.tail_maxima.push_back(profile.annulus_max(grid, j));
  out.tail_maxima.back() = std::max(out.tail_maxima.back(), profile.values.back());

  const double gmax = profile.max();
  if (gmax <= 0.0) return out;
  auto holds = criterion ? criterion : [&](double eps) { return tail_criterion(level_set(profile, eps), grid); };
  out.grid_threshold = bisect_threshold(holds, floor, std::max(gmax * (1.0 + 1e-9), floor), steps);

  const auto& m = out.tail_maxima;
  out.tail_ratio = fitted_decay_ratio(m);
  if (out.tail_ratio < 0.95) {
    out.epsilon_star = 0.0;
  } else if (out.tail_ratio > 1.02) {
    out.bounded = false;
    out.epsilon_star = m.back();
  } else {
    // Aitken's delta-squared limit of the last three annulus maxima.
    const double d1 = m[m.size() - 2] - m[m.size() - 3];
    const double d2 = m.back() - m[m.size() - 2];
    double limit = m.back();
    if (d2 != d1 && std::abs(d2) < std::abs(d1)) limit = m.back() - d2 * d2 / (d2 - d1);
    const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
    if (!(limit >= 0.5 * *lo && limit <= 1.5 * *hi)) limit = m.back();
    out.epsilon_star = limit;
  }
  if (out.epsilon_star < floor) out.epsilon_star = 0.0;
  return out;
}

Diagnostic finiteness_diagnostic_T4(const RadialProfile& profile, double alpha, double t, double p,
                                    double epsilon, const RadialGrid& grid) {
  if (!(t > alpha - 1.0)) throw std::domain_error("finiteness_diagnostic_T4: need t > alpha - 1");
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("finiteness_diagnostic_T4: need 0 < p <= 1");
  const IntervalSet L = level_set(profile, epsilon);
  return outer_integral(L, alpha, p, grid, [&](const Radius& rho) {
    // u = 1 - r; 1 - r rho = (1 - rho) + rho u.
    auto kernel = [&](double u) { return std::pow(rho.gap + rho.value * u, -(t + 1.0)); };
    double sum = 0.0;
    for (const auto& iv : L.intervals()) {
      const double lo = iv.hi >= 1.0 ? 0.0 : 1.0 - iv.hi;
      sum += integrate_gap_power(kernel, lo, 1.0 - iv.lo, t - alpha);
    }
    return sum;
  });
}

double phi_integral(const IntervalSet& L, double alpha, const Radius& r) {
  double sum = 0.0;
  for (const auto& iv : L.intervals()) {
    if (r.value < 1e-8) {
      sum += (iv.hi - iv.lo) * (1.0 + (1.0 + alpha) * r.value * 0.5 * (iv.lo + iv.hi));
      continue;
    }
    // (1 - r b)^{-alpha} - (1 - r a)^{-alpha}, with 1 - r b in gap form.
    const double gap_b = r.gap + r.value * (1.0 - iv.hi);
    const double gap_a = r.gap + r.value * (1.0 - iv.lo);
    const double x = -alpha * std::log(gap_b);
    const double y = -alpha * std::log(gap_a);
    sum += std::exp(y) * std::expm1(x - y) / (alpha * r.value);
  }
  return sum;
}

Diagnostic finiteness_diagnostic_T6(const RadialProfile& profile, double alpha, double p, double epsilon,
                                    const RadialGrid& grid) {
  if (!(alpha > 0.0)) throw std::domain_error("finiteness_diagnostic_T6: alpha must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("finiteness_diagnostic_T6: need 0 < p <= 1");
  const IntervalSet L = level_set(profile, epsilon);
  return outer_integral(L, alpha, p, grid, [&](const Radius& rho) { return phi_integral(L, alpha, rho); });
}

std::vector<double> split_multipliers(int n, double order, const IntervalSet& L, int K) {
  std::vector<double> w(std::max(K, -1) + 1, 0.0);
  if (L.empty()) return w;
  for (int k = 0; k <= K; ++k) w[k] = kernel_coefficient(k, order, n) * radial_moment(k, order, n, L);
  return w;
}

Split split_decomposition(const HarmonicFunction& f, double order, const IntervalSet& L, int max_degree, double tol) {
  if (!(order > -1.0)) throw std::domain_error("split_decomposition: kernel order must exceed -1");
  const int n = f.dimension();
  Split out;
  std::vector<double> c;
  if (f.is_finite()) {
    const int K = f.finite().degree();
    out.w = split_multipliers(n, order, L, K);
    for (int k = 0; k <= K; ++k) c.push_back(f.coefficient(k) * out.w[k]);
  } else if (!L.empty()) {
    double largest = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    bool done = false;
    for (int k = 0; k <= max_degree && !done; ++k) {
      const double w = kernel_coefficient(k, order, n) * radial_moment(k, order, n, L);
      out.w.push_back(w);
      c.push_back(f.coefficient(k) * w);
      const double term = std::abs(c.back()) * zonal_dimension(k, n);
      largest = std::max(largest, term);
      done = k >= 8 && term <= tol * largest && term <= previous;
      previous = term;
    }
    out.capped = !done;
  }
  const int K = static_cast<int>(c.size()) - 1;
  out.f1 = ZonalExpansion(n, std::move(c), f.finite().pole());
  const double reach_gap = L.empty() ? 1.0 : std::max(1.0 - L.sup(), 1.0 / (K + 1.0));
  out.reach = Radius{1.0 - reach_gap, reach_gap};
  out.f2 = f.minus(out.f1);
  if (!f.is_finite()) out.f2 = out.f2.with_finite_reach(out.reach);
  return out;
}

Split split_decomposition(const ZonalExpansion& f, double order, const IntervalSet& L) {
  return split_decomposition(HarmonicFunction(f), order, L);
}

void TheoremParams::validate(Theorem theorem) const {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
  };
  const std::string name = to_string(theorem);
  switch (theorem) {
    case Theorem::T3:
    case Theorem::T5:
      require(alpha > 0.0, name + ": alpha must be > 0");
      require(p >= 1.0 && std::isfinite(p), name + ": p must lie in [1, inf)");
      break;
    case Theorem::T4:
      require(alpha > 0.0, name + ": alpha must be > 0");
      require(p > 0.0 && p <= 1.0, name + ": p must lie in (0, 1]");
      require(kernel_order(theorem) > alpha - 1.0, name + ": t must exceed alpha - 1");
      break;
    case Theorem::T6:
      require(alpha > 0.0, name + ": alpha must be > 0");
      require(p > 0.0 && p <= 1.0, name + ": p must lie in (0, 1]");
      break;
    case Theorem::Tfinal:
      require(alpha > -1.0, name + ": alpha must be > -1");
      require(beta > 0.0, name + ": beta must be > 0");
      require(p >= 1.0 && std::isfinite(p), name + ": p must lie in [1, inf)");
      break;
  }
}

double TheoremParams::kernel_order(Theorem theorem) const {
  switch (theorem) {
    case Theorem::T4:
      return std::isnan(t) ? alpha + 0.5 : t;
    case Theorem::Tfinal:
      return alpha + beta + 1.0;
    default:
      return alpha;
  }
}

double DistancePair::ratio() const {
  if (!(epsilon_star > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return s1_upper / epsilon_star;
}

DistancePair distance_report(const TestFunctionSpec& spec, Theorem theorem, const TheoremParams& params,
                             const DistanceOptions& options) {
  spec.validate();
  params.validate(theorem);
  const RadialGrid grid(options.grid);
  const HarmonicFunction f = spec.function();
  const int n = f.dimension();
  const double alpha = params.alpha;
  const double p = params.p;
  const double order = params.kernel_order(theorem);
  const bool ball = theorem == Theorem::Tfinal;
  const bool sup_mean = theorem == Theorem::T5 || theorem == Theorem::T6;
  const double q = sup_mean ? SpaceParams::kInf : 1.0;
  const double weight = ball ? params.beta : alpha;

  DistancePair out;
  out.theorem = theorem;
  out.params = params;
  out.function = spec.label();

  const auto& nodes = grid.nodes();
  const auto& points = grid.points();
  const Samples at_nodes(f, nodes, !ball);
  const Samples at_points(f, points, ball);

  // Profile of f - g (f_weight = 1) or of g alone (f_weight = 0).
  auto profile_of = [&](double f_weight, const ZonalExpansion* g) {
    RadialProfile prof{grid.spec(), nodes, {}};
    if (ball) {
      const auto m1 = at_points.means(1.0, f_weight, g);
      prof.values = cumulative_ball_average(m1, n, alpha, grid);
    } else {
      prof.values = at_nodes.means(q, f_weight, g);
    }
    for (std::size_t i = 0; i < prof.values.size(); ++i) prof.values[i] *= std::pow(nodes[i].gap, weight);
    return prof;
  };
  // The profile of h at any radius, for refining a sup.
  auto sup_of = [&](const RadialProfile& prof, const HarmonicFunction& h) {
    if (ball) {
      auto A = prof.values;
      for (std::size_t i = 0; i < A.size(); ++i) A[i] /= std::pow(nodes[i].gap, weight);
      return profile_sup(prof, grid, [&](const Radius& r) {
        return std::pow(r.gap, weight) * ball_average_at(h, alpha, grid, A, r);
      });
    }
    return profile_sup(prof, grid, [&](const Radius& r) { return std::pow(r.gap, weight) * integral_mean(h, q, r); });
  };

  const RadialProfile profile = profile_of(1.0, nullptr);

  auto diagnostic_at = [&](double eps) {
    return theorem == Theorem::T4 ? finiteness_diagnostic_T4(profile, alpha, order, p, eps, grid)
                                  : finiteness_diagnostic_T6(profile, alpha, p, eps, grid);
  };
  std::function<bool(double)> criterion;
  if (theorem == Theorem::T4 || theorem == Theorem::T6) {
    criterion = [&](double eps) { return diagnostic_at(eps).status == Convergence::converged; };
  }
  const Threshold threshold = s2_threshold(profile, grid, criterion);
  out.tail_maxima = threshold.tail_maxima;
  out.s2_estimate = threshold.grid_threshold;
  out.epsilon_star = threshold.epsilon_star;
  if (!threshold.bounded) {
    out.rejected = true;
    out.note = "profile grows toward the boundary: f is not in the ambient space";
    out.ambient_norm = std::numeric_limits<double>::infinity();
    return out;
  }
  out.ambient_norm = sup_of(profile, f).value;

  std::vector<double> epsilons;
  if (out.epsilon_star > 0.0) {
    for (double factor : options.factors) epsilons.push_back(factor * out.epsilon_star);
  } else {
    for (int d = 1; d <= options.decades; ++d) epsilons.push_back(profile.max() * std::pow(10.0, -d));
  }

  // Mean of the Poisson-like kernel Q_alpha(s e_n, .) over the sphere, tabulated in log-gap.
  std::vector<double> kernel_gaps;
  std::vector<double> kernel_means;
  if (sup_mean) {
    const HarmonicFunction Q = TestFunctionSpec::q_kernel(n, alpha, 1.0).function();
    for (int j = 0; j <= 4 * (grid.levels() + 4); ++j) kernel_gaps.push_back(std::ldexp(1.0, -j / 4) * std::exp2(-(j % 4) / 4.0));
    kernel_means = integral_means(Q, 1.0, [&] {
      std::vector<Radius> r;
      for (double g : kernel_gaps) r.push_back(Radius::from_gap(g));
      return r;
    }());
  }
  auto kernel_mean = [&](double gap) {
    const double x = -4.0 * std::log2(gap);
    const std::size_t last = kernel_gaps.size() - 1;
    const std::size_t i = std::min(last - 1, static_cast<std::size_t>(std::max(0.0, std::floor(x))));
    const double lambda = x - static_cast<double>(i);
    return std::exp((1.0 - lambda) * std::log(kernel_means[i]) + lambda * std::log(kernel_means[i + 1]));
  };

  for (double eps : epsilons) {
    EpsilonRow row;
    row.epsilon = eps;
    row.level = level_set(profile, eps);
    if (theorem == Theorem::T4 || theorem == Theorem::T6) {
      row.diagnostic = diagnostic_at(eps);
      row.admissible = row.diagnostic.status == Convergence::converged;
    } else {
      row.admissible = tail_criterion(row.level, grid);
    }
    if (!row.admissible) {
      out.rows.push_back(std::move(row));
      continue;
    }
    const Split split = split_decomposition(f, order, row.level, options.max_degree);
    row.degree = split.f1.degree();
    row.capped = split.capped;
    const ZonalExpansion minus_f1 = [&] {
      std::vector<double> c = split.f1.coeffs();
      for (double& v : c) v = -v;
      return ZonalExpansion(n, std::move(c), split.f1.pole());
    }();

    const RadialProfile f2_profile = profile_of(1.0, &minus_f1);
    const NormResult f2 = sup_of(f2_profile, split.f2);
    row.f2_norm = f2.value;
    row.f2_status = f2.status;

    // Small-space norm of f1 from its means at the Gauss points.
    const auto f1_means = at_points.means(q, 0.0, &split.f1);
    if (ball) {
      auto h = ball_average_at_points(f1_means, n, alpha, grid);
      for (double& v : h) v = std::pow(v, p);
      const auto res = radial_integral(std::span<const double>(h), params.beta * p - 1.0, grid);
      row.f1_small = {std::pow(res.value, 1.0 / p), res.status, res.decay_ratio};
    } else {
      std::vector<double> h(f1_means.size());
      for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::pow(f1_means[i], p);
      const auto res = radial_integral(std::span<const double>(h), alpha * p - 1.0, grid);
      row.f1_small = {std::pow(res.value, 1.0 / p), res.status, res.decay_ratio};
    }

    // Triangle inequality on the level set: profile(f1) >= profile(f) - ||f2||.
    RadialProfile f1_profile;
    if (ball) {
      const auto m1 = at_points.means(1.0, 0.0, &split.f1);
      f1_profile.values = cumulative_ball_average(m1, n, alpha, grid);
      for (std::size_t i = 0; i < nodes.size(); ++i) f1_profile.values[i] *= std::pow(nodes[i].gap, weight);
    } else {
      f1_profile.values = at_nodes.means(q, 0.0, &split.f1);
      for (std::size_t i = 0; i < nodes.size(); ++i) f1_profile.values[i] *= std::pow(nodes[i].gap, weight);
    }
    row.lower_bound_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!row.level.contains(nodes[i].value)) continue;
      row.lower_bound_violation =
          std::max(row.lower_bound_violation, profile.values[i] - row.f2_norm - f1_profile.values[i]);
    }

    if (sup_mean) {
      // psi(r) = (1-r)^alpha phi_L(r): bounded, and in L^p((1-r)^{-1} dr).
      std::vector<double> h(points.size());
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double psi = std::pow(points[i].gap, alpha) * phi_integral(row.level, alpha, points[i]);
        h[i] = std::pow(psi, p) / points[i].gap;
      }
      row.psi_status = radial_integral(std::span<const double>(h), 0.0, grid).status;
      row.psi_sup = 0.0;
      for (const auto& r : nodes) {
        row.psi_sup = std::max(row.psi_sup, std::pow(r.gap, alpha) * phi_integral(row.level, alpha, r));
      }

      // |f2(x)| <= int_{I \ L} (1-rho^2)^alpha rho^{n-1} M_inf(f, rho) int_S |Q_alpha(x, rho y')| dy' d rho.
      const IntervalSet rest = row.level.complement();
      std::vector<double> bound(nodes.size());
      parallel_for(nodes.size(), [&](std::size_t i) {
        const Radius& r = nodes[i];
        auto h = [&](double u) {
          const double g = interpolate_profile(profile, u);
          return std::pow(2.0 - u, alpha) * std::pow(1.0 - u, n - 1) * g * kernel_mean(r.gap + r.value * u);
        };
        double sum = 0.0;
        for (const auto& iv : rest.intervals()) {
          const double lo = iv.hi >= 1.0 ? 0.0 : 1.0 - iv.hi;
          sum += integrate_gap_power(h, lo, 1.0 - iv.lo, 0.0);
        }
        bound[i] = std::pow(r.gap, alpha) * sum;
      });
      row.majorant = *std::max_element(bound.begin(), bound.end());
    }
    const bool stop = row.capped && out.epsilon_star == 0.0;
    out.rows.push_back(std::move(row));
    if (stop) break;
  }

  out.s1_upper = std::numeric_limits<double>::infinity();
  for (const auto& row : out.rows) {
    if (row.admissible && row.f2_status == Convergence::converged && row.f2_norm < out.s1_upper) {
      out.s1_upper = row.f2_norm;
      out.best_epsilon = row.epsilon;
      out.level_set = row.level;
    }
  }
  if (!std::isfinite(out.s1_upper)) {
    out.s1_upper = out.ambient_norm;
    out.note = "no admissible epsilon; upper bound from f1 = 0";
  }
  return out;
}

void to_json(nlohmann::json& j, const DistancePair& pair) {
  j = nlohmann::json{{"theorem", to_string(pair.theorem)},
                     {"function", pair.function},
                     {"alpha", pair.params.alpha},
                     {"p", pair.params.p},
                     {"t", number(pair.params.kernel_order(pair.theorem))},
                     {"beta", pair.params.beta},
                     {"rejected", pair.rejected},
                     {"note", pair.note},
                     {"ambient_norm", number(pair.ambient_norm)},
                     {"s2_estimate", number(pair.s2_estimate)},
                     {"epsilon_star", number(pair.epsilon_star)},
                     {"s1_upper", number(pair.s1_upper)},
                     {"ratio", number(pair.ratio())},
                     {"best_epsilon", number(pair.best_epsilon)},
                     {"level_set", intervals_json(pair.level_set)},
                     {"tail_maxima", pair.tail_maxima}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : pair.rows) {
    nlohmann::json r{{"epsilon", number(row.epsilon)},
                     {"admissible", row.admissible},
                     {"level_set", intervals_json(row.level)}};
    if (pair.theorem == Theorem::T4 || pair.theorem == Theorem::T6) {
      r["diagnostic"] = {{"status", to_string(row.diagnostic.status)},
                         {"value", number(row.diagnostic.value)},
                         {"ratio", number(row.diagnostic.ratio)}};
    }
    if (row.admissible) {
      r["degree"] = row.degree;
      r["capped"] = row.capped;
      r["f2_norm"] = number(row.f2_norm);
      r["f2_status"] = to_string(row.f2_status);
      r["f1_small"] = {{"value", number(row.f1_small.value)}, {"status", to_string(row.f1_small.status)}};
      r["lower_bound_violation"] = number(row.lower_bound_violation);
      if (std::isfinite(row.majorant)) {
        r["majorant"] = number(row.majorant);
        r["psi_sup"] = number(row.psi_sup);
        r["psi_status"] = to_string(row.psi_status);
      }
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
}

}  // namespace harmex
