#include "harmex/quadrature.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "harmex/special_fn.hpp"

namespace harmex {

std::string to_string(Convergence c) {
  switch (c) {
    case Convergence::converged: return "converges";
    case Convergence::divergent: return "diverges";
    case Convergence::inconclusive: return "inconclusive";
  }
  return "unknown";
}

double sphere_normalizer(int n) {
  if (n < 2) throw std::domain_error("sphere_normalizer: dimension must be at least 2");
  if (n == 2) return 1.0 / std::numbers::pi;
  return std::exp(log_gamma(0.5 * n) - log_gamma(0.5 * (n - 1))) / std::sqrt(std::numbers::pi);
}

SphereRule SphereRule::make(int n, int degree) {
  if (degree < 1) throw std::domain_error("SphereRule: rule degree must be at least 1");
  if (n < 2) throw std::domain_error("SphereRule: dimension must be at least 2");
  SphereRule rule;
  rule.n = n;
  rule.degree = degree;
  if (n == 2) {
    // Trapezoid on the circle; for a zonal integrand only cos(theta_j) matters.
    const int count = degree + 1;
    for (int j = 0; j < count; ++j) {
      rule.nodes.push_back(std::cos(2.0 * std::numbers::pi * (j + 0.5) / count));
      rule.weights.push_back(1.0 / count);
    }
    return rule;
  }
  const int count = degree / 2 + 1;
  const double e = 0.5 * (n - 3);
  const GaussRule& g = gauss_jacobi(count, e, e);
  double total = 0.0;
  for (double w : g.weights) total += w;
  rule.nodes = g.nodes;
  for (double w : g.weights) rule.weights.push_back(w / total);
  return rule;
}

double sphere_integral(const std::function<double(double)>& g, int n, int degree) {
  return SphereRule::make(n, degree).integrate(g);
}

AngularRule AngularRule::for_radius(int n, double scale, int degree, int points_per_panel) {
  if (n < 2) throw std::domain_error("AngularRule: dimension must be at least 2");
  if (points_per_panel < 1) throw std::domain_error("AngularRule: need at least one point per panel");
  constexpr double pi = std::numbers::pi;
  AngularRule rule;
  rule.n_ = n;
  rule.points_per_panel_ = points_per_panel;

  const int uniform_count = std::max(8, (std::max(degree, 0) + 1) / 2 + 1);
  const double uniform_width = pi / uniform_count;
  auto& edges = rule.panel_edges_;
  edges.push_back(0.0);
  double width = std::clamp(scale, 1e-300, uniform_width);
  while (edges.back() < pi) {
    const double next = std::min(pi, edges.back() + width);
    edges.push_back(next);
    width = std::min(2.0 * width, uniform_width);
  }
  // Merge a sliver at the end into its neighbour.
  if (edges.size() > 2 && pi - edges[edges.size() - 2] < 0.25 * width) {
    edges.erase(edges.end() - 2);
  }

  const double cn = sphere_normalizer(n);
  const GaussRule& g = gauss_legendre(points_per_panel);
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    const double mid = 0.5 * (edges[p + 1] + edges[p]);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double theta = mid + half * g.nodes[i];
      rule.nodes_.push_back(Angle::from_theta(theta));
      rule.weights_.push_back(cn * half * g.weights[i] * std::pow(std::sin(theta), n - 2));
    }
  }
  return rule;
}

double AngularRule::panel_integral(double lo, double hi, double p,
                                   const std::function<double(const Angle&)>& f) const {
  const double cn = sphere_normalizer(n_);
  return integrate_gauss(
      [&](double theta) {
        return cn * std::pow(std::sin(theta), n_ - 2) *
               std::pow(std::abs(f(Angle::from_theta(theta))), p);
      },
      lo, hi, points_per_panel_);
}

double AngularRule::mean_abs_pow(std::span<const double> values, double p,
                                 const std::function<double(const Angle&)>& f) const {
  if (values.size() != nodes_.size()) throw std::invalid_argument("mean_abs_pow: value count mismatch");
  const bool smooth_power = p == 2.0 || p == 4.0;
  std::vector<double> roots;
  if (!smooth_power) {
    for (std::size_t j = 0; j + 1 < values.size(); ++j) {
      if ((values[j] < 0.0 && values[j + 1] > 0.0) || (values[j] > 0.0 && values[j + 1] < 0.0)) {
        auto g = [&](double theta) { return f(Angle::from_theta(theta)); };
        std::uintmax_t iters = 60;
        const auto bracket = boost::math::tools::toms748_solve(
            g, nodes_[j].theta, nodes_[j + 1].theta, values[j], values[j + 1],
            boost::math::tools::eps_tolerance<double>(45), iters);
        roots.push_back(0.5 * (bracket.first + bracket.second));
      }
    }
  }
  double sum = 0.0;
  std::size_t next_root = 0;
  const std::size_t q = static_cast<std::size_t>(points_per_panel_);
  for (std::size_t panel = 0; panel + 1 < panel_edges_.size(); ++panel) {
    const double lo = panel_edges_[panel];
    const double hi = panel_edges_[panel + 1];
    std::vector<double> inside;
    while (next_root < roots.size() && roots[next_root] < hi) {
      if (roots[next_root] > lo) inside.push_back(roots[next_root]);
      ++next_root;
    }
    if (inside.empty()) {
      for (std::size_t i = panel * q; i < (panel + 1) * q; ++i) {
        sum += weights_[i] * std::pow(std::abs(values[i]), p);
      }
      continue;
    }
    double left = lo;
    for (double r : inside) {
      sum += panel_integral(left, r, p, f);
      left = r;
    }
    sum += panel_integral(left, hi, p, f);
  }
  return sum;
}

double AngularRule::max_abs(std::span<const double> values,
                            const std::function<double(const Angle&)>& f) const {
  if (values.size() != nodes_.size()) throw std::invalid_argument("max_abs: value count mismatch");
  std::size_t best = 0;
  for (std::size_t j = 1; j < values.size(); ++j) {
    if (std::abs(values[j]) > std::abs(values[best])) best = j;
  }
  double result = std::abs(values[best]);
  const double lo = best == 0 ? 0.0 : nodes_[best - 1].theta;
  const double hi = best + 1 == values.size() ? std::numbers::pi : nodes_[best + 1].theta;
  auto neg = [&](double theta) { return -std::abs(f(Angle::from_theta(theta))); };
  std::uintmax_t iters = 60;
  const auto m = boost::math::tools::brent_find_minima(neg, lo, hi, 40, iters);
  result = std::max({result, -m.second, std::abs(f(Angle::from_theta(0.0))),
                     std::abs(f(Angle::from_theta(std::numbers::pi)))});
  return result;
}

RadialGrid::RadialGrid(RadialGridSpec spec) : spec_(spec) {
  if (spec.levels < 1 || spec.panels < 1 || spec.points < 1 || spec.tail_annuli < 1) {
    throw std::domain_error("RadialGrid: levels, panels, points and tail annuli must be positive");
  }
  if (spec.tail_annuli > spec.levels) throw std::domain_error("RadialGrid: more tail annuli than levels");
  if (spec.levels > 1000) throw std::domain_error("RadialGrid: too many levels");
  const GaussRule& g = gauss_legendre(spec.points);
  for (int j = 0; j < spec.levels; ++j) {
    const double outer = std::ldexp(1.0, -j);
    for (int m = 0; m < spec.panels; ++m) {
      const double hi = outer * (1.0 - static_cast<double>(m) / (2.0 * spec.panels));
      const double lo = outer * (1.0 - static_cast<double>(m + 1) / (2.0 * spec.panels));
      nodes_.push_back(Radius::from_gap(hi));
      const double half = 0.5 * (hi - lo);
      const double mid = 0.5 * (hi + lo);
      // Ascending r means descending gap: walk the Gauss nodes backwards.
      for (std::size_t i = g.size(); i-- > 0;) {
        points_.push_back(Radius::from_gap(mid + half * g.nodes[i]));
        weights_.push_back(half * g.weights[i]);
      }
    }
  }
  nodes_.push_back(Radius::from_gap(last_gap()));
}

int RadialGrid::node_annulus(std::size_t i) const {
  return static_cast<int>(i / static_cast<std::size_t>(spec_.panels));
}

double fitted_decay_ratio(std::span<const double> c) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double a = std::abs(c[i]);
    if (a > 0.0 && std::isfinite(a)) {
      xs.push_back(static_cast<double>(i));
      ys.push_back(std::log(a));
    }
  }
  if (xs.size() < 2) return 0.0;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= xs.size();
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return std::exp(sxy / sxx);
}

Convergence classify_tail(std::span<const double> c) {
  const bool all_zero = std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
  if (all_zero) return Convergence::converged;
  // A run that ends in zeros has left the support of the integrand.
  if (c.back() == 0.0) return Convergence::converged;
  const double ratio = fitted_decay_ratio(c);
  if (ratio < 0.95) return Convergence::converged;
  if (ratio > 0.98) return Convergence::divergent;
  return Convergence::inconclusive;
}

RadialIntegral radial_integral(std::span<const double> h, double gamma, const RadialGrid& grid) {
  if (h.size() != grid.points().size()) throw std::invalid_argument("radial_integral: value count mismatch");
  RadialIntegral out;
  const int per = grid.points_per_annulus();
  out.annulus_sums.assign(static_cast<std::size_t>(grid.levels()), 0.0);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& r = grid.points()[i];
    const double term = grid.weights()[i] * h[i] * std::pow(r.gap, gamma);
    out.annulus_sums[i / static_cast<std::size_t>(per)] += term;
  }
  for (double s : out.annulus_sums) out.value += s;

  const double h_last = h.back();
  const std::size_t t = static_cast<std::size_t>(grid.tail_annuli());
  std::span<const double> tail_sums(out.annulus_sums.data() + out.annulus_sums.size() - t, t);
  out.decay_ratio = fitted_decay_ratio(tail_sums);
  if (gamma <= -1.0) {
    out.status = h_last != 0.0 ? Convergence::divergent : classify_tail(tail_sums);
    return out;
  }
  out.tail = h_last * std::pow(grid.last_gap(), gamma + 1.0) / (gamma + 1.0);
  out.value += out.tail;
  out.status = classify_tail(tail_sums);
  return out;
}

double integrate_gap_power(const std::function<double(double)>& h, double lo, double hi,
                           double gamma, int depth, int points) {
  if (!(hi > lo)) return 0.0;
  if (lo < 0.0) throw std::domain_error("integrate_gap_power: negative gap");
  if (lo == 0.0 && !(gamma > -1.0)) throw std::domain_error("integrate_gap_power: weight not integrable at 0");
  constexpr double kStep = 0.70710678118654752440;  // two panels per octave
  const double floor = lo > 0.0 ? lo : hi * std::ldexp(1.0, -depth);
  auto integrand = [&](double g) { return h(g) * std::pow(g, gamma); };
  double sum = 0.0;
  double right = hi;
  while (right > floor) {
    double left = std::max(floor, right * kStep);
    if (left - floor < 0.1 * (right - left)) left = floor;
    sum += integrate_gauss(integrand, left, right, points);
    right = left;
  }
  if (lo == 0.0) sum += integrate_power_left(h, floor, gamma, points);
  return sum;
}

double ball_integral(const std::function<double(const Radius&)>& slice, int n, double alpha,
                     const Radius& r_max, int points) {
  if (!(alpha > -1.0)) throw std::domain_error("ball_integral: alpha must exceed -1");
  if (r_max.value <= 0.0) return 0.0;
  auto h = [&](double gap) {
    const Radius r{1.0 - gap, gap};
    return slice(r) * std::pow(r.value, n - 1);
  };
  return integrate_gap_power(h, r_max.gap, 1.0, alpha, 64, points);
}

}  // namespace harmex
