#include "harmex/norms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <nlohmann/json.hpp>

#include "harmex/gauss.hpp"
#include "harmex/parallel.hpp"

namespace harmex {

namespace {

constexpr std::pair<Family, const char*> kFamilyNames[] = {
    {Family::A_p_alpha, "A_p_alpha"},       {Family::A_inf_alpha, "A_inf_alpha"},
    {Family::B_pq, "B_pq"},                 {Family::B_inf_q, "B_inf_q"},
    {Family::B_p_inf, "B_p_inf"},           {Family::M_beta_alpha, "M_beta_alpha"},
    {Family::M_p_beta_alpha, "M_p_beta_alpha"},
};

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

bool finite_exponent(double p) { return p > 0.0 && std::isfinite(p); }

// Integral of the degree-(P-1) interpolant through (x_l, y_l) from a to b.
double interpolant_integral(std::span<const double> x, std::span<const double> y, double a, double b) {
  auto lagrange = [&](double t) {
    double sum = 0.0;
    for (std::size_t l = 0; l < x.size(); ++l) {
      double basis = 1.0;
      for (std::size_t m = 0; m < x.size(); ++m) {
        if (m != l) basis *= (t - x[m]) / (x[l] - x[m]);
      }
      sum += basis * y[l];
    }
    return sum;
  };
  return integrate_gauss(lagrange, a, b, static_cast<int>(x.size()));
}

}  // namespace

std::vector<double> ball_average_at_points(std::span<const double> m1, int n, double alpha, const RadialGrid& grid) {
  const auto nodes = cumulative_ball_average(m1, n, alpha, grid);
  const std::size_t per = static_cast<std::size_t>(grid.spec().points);
  std::vector<double> out(m1.size());
  std::vector<double> x(per);
  std::vector<double> y(per);
  for (std::size_t panel = 0; panel + 1 < nodes.size(); ++panel) {
    const std::size_t first = panel * per;
    for (std::size_t l = 0; l < per; ++l) {
      const Radius& r = grid.points()[first + l];
      x[l] = r.gap;
      y[l] = m1[first + l] * std::pow(r.gap, alpha) * std::pow(r.value, n - 1);
    }
    const double left_gap = grid.nodes()[panel].gap;
    for (std::size_t l = 0; l < per; ++l) {
      out[first + l] = nodes[panel] + interpolant_integral(x, y, x[l], left_gap);
    }
  }
  return out;
}

namespace {

NormResult from_radial(const RadialIntegral& integral, double p) {
  NormResult out;
  out.status = integral.status;
  out.tail_ratio = integral.decay_ratio;
  out.value = out.finite() ? std::pow(integral.value, 1.0 / p) : std::numeric_limits<double>::infinity();
  return out;
}

std::vector<double> powered(std::vector<double> v, double p) {
  for (double& x : v) x = std::pow(x, p);
  return v;
}

}  // namespace

std::string to_string(Family family) {
  for (const auto& [f, name] : kFamilyNames) {
    if (f == family) return name;
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  for (const auto& [f, n] : kFamilyNames) {
    if (name == n) return f;
  }
  throw std::invalid_argument("unknown space family '" + name + "'");
}

SpaceParams SpaceParams::A(double p, double alpha) { return {Family::A_p_alpha, p, 1.0, alpha, 1.0}; }
SpaceParams SpaceParams::A_inf(double alpha) { return {Family::A_inf_alpha, kInf, kInf, alpha, 1.0}; }
SpaceParams SpaceParams::B(double p, double q, double alpha) { return {Family::B_pq, p, q, alpha, 1.0}; }
SpaceParams SpaceParams::B_inf(double q, double alpha) { return {Family::B_inf_q, kInf, q, alpha, 1.0}; }
SpaceParams SpaceParams::B_p_inf(double p, double alpha) { return {Family::B_p_inf, p, kInf, alpha, 1.0}; }
SpaceParams SpaceParams::M(double alpha, double beta) { return {Family::M_beta_alpha, kInf, 1.0, alpha, beta}; }
SpaceParams SpaceParams::M_p(double p, double alpha, double beta) {
  return {Family::M_p_beta_alpha, p, 1.0, alpha, beta};
}

void SpaceParams::validate() const {
  const std::string name = to_string(family);
  switch (family) {
    case Family::A_p_alpha:
      require(finite_exponent(p), name + ": p must lie in (0, inf)");
      require(alpha >= 0.0, name + ": alpha must be >= 0");
      break;
    case Family::A_inf_alpha:
      require(alpha >= 0.0, name + ": alpha must be >= 0");
      break;
    case Family::B_pq:
      require(finite_exponent(p), name + ": p must lie in (0, inf)");
      require(q >= 1.0 && std::isfinite(q), name + ": q must lie in [1, inf)");
      require(alpha > 0.0, name + ": alpha must be > 0");
      break;
    case Family::B_inf_q:
      require(q >= 1.0 && std::isfinite(q), name + ": q must lie in [1, inf)");
      require(alpha > 0.0, name + ": alpha must be > 0");
      break;
    case Family::B_p_inf:
      require(finite_exponent(p), name + ": p must lie in (0, inf)");
      require(alpha > 0.0, name + ": alpha must be > 0");
      break;
    case Family::M_beta_alpha:
      require(alpha > -1.0, name + ": alpha must be > -1");
      require(beta > 0.0, name + ": beta must be > 0");
      break;
    case Family::M_p_beta_alpha:
      require(finite_exponent(p), name + ": p must lie in (0, inf)");
      require(alpha > -1.0, name + ": alpha must be > -1");
      require(beta > 0.0, name + ": beta must be > 0");
      break;
  }
  if (!std::isnan(t)) require(t > alpha - 1.0, name + ": t must exceed alpha - 1");
}

std::string SpaceParams::label() const {
  std::ostringstream os;
  os << to_string(family) << "(p=" << p << ",q=" << q << ",alpha=" << alpha << ",beta=" << beta;
  if (!std::isnan(t)) os << ",t=" << t;
  os << ")";
  return os.str();
}

namespace {

nlohmann::json exponent_json(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

double exponent_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return SpaceParams::kInf;
    throw std::invalid_argument("exponent must be a number or \"inf\"");
  }
  return j.get<double>();
}

}  // namespace

void to_json(nlohmann::json& j, const SpaceParams& params) {
  j = nlohmann::json{{"family", to_string(params.family)},
                     {"p", exponent_json(params.p)},
                     {"q", exponent_json(params.q)},
                     {"alpha", params.alpha},
                     {"beta", params.beta}};
  if (!std::isnan(params.t)) j["t"] = params.t;
}

void from_json(const nlohmann::json& j, SpaceParams& params) {
  params = SpaceParams{};
  params.family = family_from_string(j.at("family").get<std::string>());
  if (j.contains("p")) params.p = exponent_from_json(j.at("p"));
  if (j.contains("q")) params.q = exponent_from_json(j.at("q"));
  if (j.contains("alpha")) params.alpha = j.at("alpha").get<double>();
  if (j.contains("beta")) params.beta = j.at("beta").get<double>();
  if (j.contains("t")) params.t = j.at("t").get<double>();
  switch (params.family) {
    case Family::A_inf_alpha:
    case Family::B_inf_q:
    case Family::M_beta_alpha:
      params.p = SpaceParams::kInf;
      break;
    default:
      break;
  }
  if (params.family == Family::A_inf_alpha || params.family == Family::B_p_inf) params.q = SpaceParams::kInf;
}

double RadialProfile::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

std::size_t RadialProfile::argmax() const {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

double RadialProfile::annulus_max(const RadialGrid& g, int j) const {
  double best = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (g.node_annulus(i) == j) best = std::max(best, values[i]);
  }
  return best;
}

double integral_mean(const HarmonicFunction& f, double p, const Radius& r) {
  if (!(p > 0.0)) throw std::domain_error("integral_mean: p must be positive");
  const auto rule = AngularRule::for_radius(f.dimension(), f.concentration_gap(r), f.angular_degree());
  std::vector<double> values;
  f.sample(r, rule, values);
  auto at = [&](const Angle& a) { return f(r, a); };
  if (std::isinf(p)) return rule.max_abs(values, at);
  return std::pow(rule.mean_abs_pow(values, p, at), 1.0 / p);
}

double integral_mean(const ZonalExpansion& f, double p, double r) {
  return integral_mean(HarmonicFunction(f), p, Radius::from_value(r));
}

std::vector<double> integral_means(const HarmonicFunction& f, double p, std::span<const Radius> radii) {
  std::vector<double> out(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) { out[i] = integral_mean(f, p, radii[i]); });
  return out;
}

RadialProfile weighted_mean_profile(const HarmonicFunction& f, double p, double alpha, const RadialGrid& grid) {
  RadialProfile out{grid.spec(), grid.nodes(), integral_means(f, p, grid.nodes())};
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= std::pow(out.radii[i].gap, alpha);
  return out;
}

std::vector<double> cumulative_ball_average(std::span<const double> m1, int n, double alpha, const RadialGrid& grid) {
  if (m1.size() != grid.points().size()) throw std::invalid_argument("cumulative_ball_average: value count mismatch");
  const std::size_t per = static_cast<std::size_t>(grid.spec().points);
  std::vector<double> out(grid.nodes().size(), 0.0);
  for (std::size_t panel = 0; panel + 1 < out.size(); ++panel) {
    double sum = 0.0;
    for (std::size_t l = panel * per; l < (panel + 1) * per; ++l) {
      const Radius& r = grid.points()[l];
      sum += grid.weights()[l] * m1[l] * std::pow(r.gap, alpha) * std::pow(r.value, n - 1);
    }
    out[panel + 1] = out[panel] + sum;
  }
  return out;
}

RadialProfile ball_average_profile(const HarmonicFunction& f, double alpha, const RadialGrid& grid) {
  if (!(alpha > -1.0)) throw std::domain_error("ball_average_profile: alpha must exceed -1");
  const auto m1 = integral_means(f, 1.0, grid.points());
  return {grid.spec(), grid.nodes(), cumulative_ball_average(m1, f.dimension(), alpha, grid)};
}

NormResult profile_sup(const RadialProfile& profile, const RadialGrid& grid,
                       const std::function<double(const Radius&)>& eval) {
  NormResult out;
  const int T = grid.tail_annuli();
  std::vector<double> tail;
  for (int j = grid.levels() - T; j < grid.levels(); ++j) tail.push_back(profile.annulus_max(grid, j));
  out.tail_ratio = fitted_decay_ratio(tail);
  const bool all_zero = std::all_of(tail.begin(), tail.end(), [](double v) { return v == 0.0; });
  if (!all_zero && out.tail_ratio > 1.02) {
    out.status = Convergence::divergent;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  const std::size_t best = profile.argmax();
  out.value = profile.values[best];
  if (best + 1 < profile.values.size()) {
    // Bracket in the gap variable between the neighbouring nodes.
    const double hi = best == 0 ? 1.0 : profile.radii[best - 1].gap;
    const double lo = profile.radii[best + 1].gap;
    auto neg = [&](double gap) { return -eval(Radius::from_gap(gap)); };
    std::uintmax_t iters = 50;
    const auto m = boost::math::tools::brent_find_minima(neg, lo, hi, 30, iters);
    out.value = std::max(out.value, -m.second);
  }
  return out;
}

double ball_average_at(const HarmonicFunction& f, double alpha, const RadialGrid& grid,
                       std::span<const double> node_values, const Radius& r) {
  std::size_t i = 0;
  while (i + 1 < grid.nodes().size() && grid.nodes()[i + 1].gap >= r.gap) ++i;
  const int n = f.dimension();
  auto slice = [&](double gap) {
    const Radius x{1.0 - gap, gap};
    return integral_mean(f, 1.0, x) * std::pow(gap, alpha) * std::pow(x.value, n - 1);
  };
  return node_values[i] + integrate_gauss(slice, r.gap, grid.nodes()[i].gap, 6);
}

NormResult space_norm(const HarmonicFunction& f, const SpaceParams& params, const RadialGrid& grid) {
  params.validate();
  const int n = f.dimension();
  const double p = params.p;
  const double alpha = params.alpha;
  switch (params.family) {
    case Family::A_p_alpha: {
      auto h = powered(integral_means(f, p, grid.points()), p);
      for (std::size_t i = 0; i < h.size(); ++i) h[i] *= std::pow(grid.points()[i].value, n - 1);
      return from_radial(radial_integral(std::span<const double>(h), alpha, grid), p);
    }
    case Family::B_pq:
    case Family::B_p_inf: {
      const double q = params.family == Family::B_pq ? params.q : SpaceParams::kInf;
      const auto h = powered(integral_means(f, q, grid.points()), p);
      return from_radial(radial_integral(std::span<const double>(h), alpha * p - 1.0, grid), p);
    }
    case Family::A_inf_alpha:
    case Family::B_inf_q: {
      const double q = params.family == Family::B_inf_q ? params.q : SpaceParams::kInf;
      const auto profile = weighted_mean_profile(f, q, alpha, grid);
      return profile_sup(profile, grid, [&](const Radius& r) { return std::pow(r.gap, alpha) * integral_mean(f, q, r); });
    }
    case Family::M_beta_alpha: {
      const auto m1 = integral_means(f, 1.0, grid.points());
      auto profile = RadialProfile{grid.spec(), grid.nodes(), cumulative_ball_average(m1, n, alpha, grid)};
      const auto A = profile.values;
      for (std::size_t i = 0; i < profile.values.size(); ++i) {
        profile.values[i] *= std::pow(profile.radii[i].gap, params.beta);
      }
      auto eval = [&](const Radius& r) { return std::pow(r.gap, params.beta) * ball_average_at(f, alpha, grid, A, r); };
      return profile_sup(profile, grid, eval);
    }
    case Family::M_p_beta_alpha: {
      const auto m1 = integral_means(f, 1.0, grid.points());
      const auto h = powered(ball_average_at_points(m1, n, alpha, grid), p);
      return from_radial(radial_integral(std::span<const double>(h), params.beta * p - 1.0, grid), p);
    }
  }
  throw std::logic_error("space_norm: unhandled family");
}

NormResult space_norm(const ZonalExpansion& f, const SpaceParams& params, const RadialGrid& grid) {
  return space_norm(HarmonicFunction(f), params, grid);
}

}  // namespace harmex
