#include "harmex/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <nlohmann/json.hpp>

#include "harmex/gauss.hpp"
#include "harmex/parallel.hpp"
#include "harmex/quadrature.hpp"
#include "harmex/special_fn.hpp"

namespace harmex {

namespace {

std::string format_params(std::initializer_list<std::pair<const char*, double>> items) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, value] : items) {
    if (!first) out << ';';
    first = false;
    out << name << '=' << value;
  }
  return out.str();
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Gap segments [0, b1], [b1, b2], ..., [bk, 1] of an IncreasingFunction.
std::vector<std::pair<double, double>> segments(const IncreasingFunction& G) {
  std::vector<double> cuts{0.0};
  for (double b : G.breaks) {
    if (b > 0.0 && b < 1.0) cuts.push_back(b);
  }
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i]) out.emplace_back(cuts[i], cuts[i + 1]);
  }
  return out;
}

// int_0^1 h(u) u^gamma du split at the break points of G.
double integrate_segments(const IncreasingFunction& G, const std::function<double(double)>& h, double gamma,
                          int points) {
  double sum = 0.0;
  for (const auto& [lo, hi] : segments(G)) sum += integrate_gap_power(h, lo, hi, gamma, 64, points);
  return sum;
}

void require_increasing(const IncreasingFunction& G) {
  double previous = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 400; ++i) {
    const double r = i <= 200 ? i / 200.0 * 0.99 : 1.0 - 0.01 * std::exp2(-(i - 200) / 8.0);
    const double v = G(r);
    if (v < previous - 1e-14 * std::abs(previous)) {
      throw std::invalid_argument("function '" + G.name + "' is not increasing");
    }
    previous = v;
  }
}

// Sphere average of g(<x', y'>, <e, y'>) for unit x' at angle theta0 from e.
template <class G>
double two_pole_average(int n, double theta0, int degree, G&& g) {
  const double c0 = std::cos(theta0);
  const double s0 = std::sin(theta0);
  if (n == 2) {
    const int m = degree + 1;
    double sum = 0.0;
    for (int j = 0; j < m; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / m;
      sum += g(std::cos(theta0 - phi), std::cos(phi));
    }
    return sum / m;
  }
  // y' = s e + sqrt(1 - s^2) v with v on S^{n-2}; <x', y'> = s c0 + sqrt(1-s^2) s0 <v, u>.
  const SphereRule outer = SphereRule::make(n, degree);
  const SphereRule inner = SphereRule::make(n - 1, degree);
  double sum = 0.0;
  for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
    const double s = outer.nodes[i];
    const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
    double part = 0.0;
    for (std::size_t j = 0; j < inner.nodes.size(); ++j) {
      part += inner.weights[j] * g(std::clamp(s * c0 + c * s0 * inner.nodes[j], -1.0, 1.0), s);
    }
    sum += outer.weights[i] * part;
  }
  return sum;
}

}  // namespace

void to_json(nlohmann::json& j, const CheckReport& report) {
  auto num = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return format_number(v);
  };
  j = nlohmann::json{{"check", report.check},
                     {"params", report.params},
                     {"max_violation", num(report.max_violation)},
                     {"fitted_C", num(report.fitted_C)},
                     {"tolerance", report.tolerance},
                     {"pass", report.pass}};
  nlohmann::json extra = nlohmann::json::object();
  for (const auto& [key, value] : report.extra) extra[key] = num(value);
  j["extra"] = std::move(extra);
}

std::string csv_header() { return "check,params,max_violation,fitted_C,pass"; }

std::string csv_row(const CheckReport& report) {
  return report.check + ',' + report.params + ',' + format_number(report.max_violation) + ',' +
         format_number(report.fitted_C) + ',' + (report.pass ? "true" : "false");
}

std::vector<SamplePoint> random_points(int count, double r_max, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SamplePoint> out;
  for (int i = 0; i < count; ++i) {
    const double r = r_max * uniform(rng);
    const double theta = std::numbers::pi * uniform(rng);
    out.push_back({Radius::from_value(r), Angle::from_theta(theta)});
  }
  return out;
}

CheckReport check_poisson_closed_form(int n, int count, double r_max, std::uint64_t seed, double tol) {
  CheckReport report;
  report.check = "poisson_closed_form";
  const int K = truncation_degree(n, 0.0, r_max, 1e-12);
  report.params = format_params({{"n", n}, {"r_max", r_max}, {"K", K}, {"points", count}});
  report.tolerance = tol;
  const ZonalExpansion P = TestFunctionSpec::poisson(n, K).expansion();
  for (const auto& x : random_points(count, r_max, seed)) {
    const double r = x.r.value;
    const double closed = (1.0 - r * r) / std::pow(x.r.gap * x.r.gap + 2.0 * r * x.angle.versine, 0.5 * n);
    const double error = std::abs(evaluate(P, r, x.angle.cos) - closed) / std::max(1.0, std::abs(closed));
    report.max_violation = std::max(report.max_violation, error);
  }
  report.pass = report.max_violation < tol;
  return report;
}

CheckReport check_partition_of_unity(int n, double alpha, int K, double tol) {
  CheckReport report;
  report.check = "partition_of_unity";
  report.params = format_params({{"n", n}, {"alpha", alpha}, {"K", K}});
  report.tolerance = tol;
  const IntervalSet whole = IntervalSet::whole();
  for (int k = 0; k <= K; ++k) {
    const double w = kernel_coefficient(k, alpha, n) * radial_moment(k, alpha, n, whole);
    report.max_violation = std::max(report.max_violation, std::abs(w - 1.0));
  }
  report.pass = report.max_violation < tol;
  return report;
}

CheckReport check_reproducing(const ZonalExpansion& f, double alpha, std::span<const SamplePoint> points,
                              double tol) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("check_reproducing: alpha must be >= 0");
  const int n = f.dimension();
  const int Kf = std::max(f.degree(), 0);
  CheckReport report;
  report.check = "reproducing";
  report.params = format_params({{"n", n}, {"alpha", alpha}, {"K", Kf}, {"points", static_cast<double>(points.size())}});
  report.tolerance = tol;

  const IntervalSet whole = IntervalSet::whole();
  std::vector<double> w(Kf + 1);
  for (int k = 0; k <= Kf; ++k) w[k] = kernel_coefficient(k, alpha, n) * radial_moment(k, alpha, n, whole);

  std::vector<double> quad_error(points.size());
  std::vector<double> coeff_error(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Radius& r = points[i].r;
    const Angle& angle = points[i].angle;
    const double exact = f(r.value, angle.cos);

    std::vector<double> c = f.coeffs();
    for (int k = 0; k <= Kf && k < static_cast<int>(c.size()); ++k) c[k] *= w[k] * std::pow(r.value, k);
    coeff_error[i] = std::abs(zonal_sum(n, c, angle.cos) - exact);

    const int Kq = std::max(Kf, truncation_degree(n, alpha, r.value, 1e-15));
    const int degree = std::max(Kf + Kq, 1);
    const int npts = (degree + n) / 2 + 16;
    const GaussRule& rule = gauss_jacobi(npts, alpha, 0.0);
    double sum = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double rho = 0.5 * (1.0 + rule.nodes[j]);
      const std::vector<double> fc = f.radial_coefficients(rho);
      std::vector<double> qc(Kq + 1);
      for (int k = 0; k <= Kq; ++k) qc[k] = kernel_coefficient(k, alpha, n) * std::pow(r.value * rho, k);
      const double avg = two_pole_average(n, angle.theta, degree, [&](double sx, double se) {
        return zonal_sum(n, qc, sx) * zonal_sum(n, fc, se);
      });
      sum += rule.weights[j] * std::pow(1.0 + rho, alpha) * std::pow(rho, n - 1) * avg;
    }
    // rho = (1+x)/2 maps (1-rho)^alpha d rho to 2^{-alpha-1} (1-x)^alpha dx.
    const double value = sum * std::pow(0.5, alpha + 1.0);
    quad_error[i] = std::abs(value - exact);
  });
  report.max_violation = *std::max_element(quad_error.begin(), quad_error.end());
  report.extra["coefficient_route"] = *std::max_element(coeff_error.begin(), coeff_error.end());
  report.pass = report.max_violation < tol && report.extra["coefficient_route"] < 1e-12;
  return report;
}

double lemma1_constant(int part, double param, int n, int depth, int theta_steps) {
  std::vector<double> gaps;
  for (int j = 0; j <= 2 * depth; ++j) gaps.push_back(std::exp2(-0.5 * j));
  std::vector<double> best(gaps.size(), 0.0);

  if (part == 1) {
    const double whole = std::floor(param);
    const double frac = param - whole;
    const HarmonicFunction Q = TestFunctionSpec::q_kernel(n, param, 1.0).function();
    parallel_for(gaps.size(), [&](std::size_t i) {
      const double g = gaps[i];
      const Radius s = Radius::from_gap(g);
      std::vector<double> thetas{0.0};
      for (int k = 0;; ++k) {
        const double t = g * std::exp2(-2.0 + static_cast<double>(k) / theta_steps);
        if (t >= std::numbers::pi) break;
        thetas.push_back(t);
      }
      thetas.push_back(std::numbers::pi);
      for (double theta : thetas) {
        const Angle a = Angle::from_theta(theta);
        const double d = std::sqrt(g * g + 2.0 * s.value * a.versine);
        const double shape = std::pow(g, -frac) / std::pow(d, n + whole) + std::pow(g, -1.0 - param);
        best[i] = std::max(best[i], std::abs(Q(s, a)) / shape);
      }
    });
  } else if (part == 2) {
    const HarmonicFunction Q = TestFunctionSpec::q_kernel(n, param, 1.0).function();
    parallel_for(gaps.size(), [&](std::size_t i) {
      const Radius s = Radius::from_gap(gaps[i]);
      best[i] = integral_mean(Q, 1.0, s) * std::pow(gaps[i], 1.0 + param);
    });
  } else if (part == 3) {
    parallel_for(gaps.size(), [&](std::size_t i) {
      const Radius r = Radius::from_gap(gaps[i]);
      auto g = [&](const Angle& a) {
        return std::pow(r.gap * r.gap + 2.0 * r.value * a.versine, -0.5 * param);
      };
      const AngularRule rule = AngularRule::for_radius(n, r.gap, theta_steps);
      std::vector<double> values;
      for (const auto& a : rule.nodes()) values.push_back(g(a));
      best[i] = rule.mean_abs_pow(values, 1.0, g) * std::pow(r.gap, param - n + 1.0);
    });
  } else {
    throw std::invalid_argument("lemma1: part must be 1, 2 or 3");
  }
  return *std::max_element(best.begin(), best.end());
}

CheckReport check_lemma1(int part, double param, int n, double stability) {
  const char* names[] = {"", "alpha", "beta", "m"};
  if (part < 1 || part > 3) throw std::invalid_argument("lemma1: part must be 1, 2 or 3");
  if (part == 1 && !(param > 0.0)) throw std::invalid_argument("lemma1 part 1: alpha must be > 0");
  if (part == 2 && !(param > -1.0)) throw std::invalid_argument("lemma1 part 2: beta must be > -1");
  if (part == 3 && !(param > n - 1.0)) throw std::invalid_argument("lemma1 part 3: m must be > n - 1");
  CheckReport report;
  report.check = "lemma1_part" + std::to_string(part);
  report.params = format_params({{"n", n}, {names[part], param}});
  report.tolerance = stability;
  const double coarse = lemma1_constant(part, param, n, 20, 4);
  const double fine = lemma1_constant(part, param, n, 40, 8);
  report.fitted_C = fine;
  report.extra["C_coarse"] = coarse;
  report.max_violation = std::abs(fine / coarse - 1.0);
  report.pass = std::isfinite(fine) && fine > 0.0 && report.max_violation <= stability;
  return report;
}

IncreasingFunction IncreasingFunction::constant(double c) {
  return {"constant(" + format_number(c) + ")", [c](double) { return c; }, 0.0, {}};
}

IncreasingFunction IncreasingFunction::identity() {
  return {"r", [](double u) { return 1.0 - u; }, 0.0, {}};
}

IncreasingFunction IncreasingFunction::step(double r0) {
  const double u0 = 1.0 - r0;
  return {"step(" + format_number(r0) + ")", [u0](double u) { return u <= u0 ? 1.0 : 0.0; }, 0.0, {u0}};
}

IncreasingFunction IncreasingFunction::blow_up(double a) {
  if (!(a >= 0.0)) throw std::invalid_argument("blow_up: exponent must be >= 0");
  return {"(1-r)^-" + format_number(a), [](double) { return 1.0; }, -a, {}};
}

IncreasingFunction IncreasingFunction::zero() {
  return {"zero", [](double) { return 0.0; }, 0.0, {}};
}

std::pair<double, double> lemma2_sides(const IncreasingFunction& G, double beta, double s, double gamma, double p,
                                       int points) {
  if (!(beta > -1.0 && s > -1.0 && gamma > 0.0 && p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("lemma2: need beta > -1, s > -1, gamma > 0, 0 < p <= 1");
  }
  require_increasing(G);
  // u = 1 - r, v = 1 - rho, 1 - r rho = u + v - u v.
  auto inner_lhs = [&](double v) {
    const double I = integrate_segments(
        G, [&](double u) { return G.h(u) * std::pow(u + v - u * v, -gamma); }, G.power + beta, points);
    return std::pow(I, p);
  };
  const double lhs = integrate_gap_power(inner_lhs, 0.0, 1.0, s, 64, points);
  auto inner_rhs = [&](double u) {
    const double J = integrate_gap_power([&](double v) { return std::pow(u + v - u * v, -gamma * p); }, 0.0, 1.0, s,
                                         64, points);
    return std::pow(G.h(u), p) * J;
  };
  const double rhs = integrate_segments(G, inner_rhs, G.power * p + beta * p + p - 1.0, points);
  return {lhs, rhs};
}

CheckReport check_lemma2(std::span<const IncreasingFunction> family, double beta, double s, double gamma, double p,
                         double stability) {
  CheckReport report;
  report.check = "lemma2";
  report.params = format_params({{"beta", beta}, {"s", s}, {"gamma", gamma}, {"p", p}});
  report.tolerance = stability;
  double coarse = 0.0;
  double fine = 0.0;
  for (const auto& G : family) {
    const auto [l0, r0] = lemma2_sides(G, beta, s, gamma, p, 8);
    const auto [l1, r1] = lemma2_sides(G, beta, s, gamma, p, 12);
    const double c0 = l0 == 0.0 ? 0.0 : l0 / r0;
    const double c1 = l1 == 0.0 ? 0.0 : l1 / r1;
    report.extra["C[" + G.name + "]"] = c1;
    coarse = std::max(coarse, c0);
    fine = std::max(fine, c1);
  }
  report.fitted_C = fine;
  report.max_violation = coarse == 0.0 ? (fine == 0.0 ? 0.0 : 1.0) : std::abs(fine / coarse - 1.0);
  report.pass = std::isfinite(fine) && report.max_violation <= stability;
  return report;
}

std::pair<double, double> lemma3_sides(const IncreasingFunction& phi, double beta, int nodes_per_octave) {
  if (!(beta > 0.0)) throw std::invalid_argument("lemma3: beta must be > 0");
  require_increasing(phi);
  auto weighted = [&](double u) { return phi.h(u) * std::pow(u, phi.power + beta); };
  std::vector<double> us;
  for (int k = 0; k <= 64 * nodes_per_octave; ++k) us.push_back(std::exp2(-static_cast<double>(k) / nodes_per_octave));
  for (double b : phi.breaks) us.push_back(b);
  std::sort(us.begin(), us.end());
  std::size_t best = 0;
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (weighted(us[i]) > weighted(us[best])) best = i;
  }
  double sup = weighted(us[best]);
  if (best > 0 && best + 1 < us.size()) {
    // Refine between the neighbours, in log u.
    const auto res = boost::math::tools::brent_find_minima(
        [&](double x) { return -weighted(std::exp(x)); }, std::log(us[best - 1]), std::log(us[best + 1]), 52);
    sup = std::max(sup, -res.second);
  }
  const double integral =
      beta * integrate_segments(phi, [&](double u) { return phi.h(u); }, phi.power + beta - 1.0, 12);
  return {sup, integral};
}

CheckReport check_lemma3(std::span<const IncreasingFunction> family, double beta, double stability) {
  CheckReport report;
  report.check = "lemma3";
  report.params = format_params({{"beta", beta}});
  report.tolerance = stability;
  double coarse = 0.0;
  double fine = 0.0;
  double violation = -std::numeric_limits<double>::infinity();
  for (const auto& phi : family) {
    const auto [l0, r0] = lemma3_sides(phi, beta, 4);
    const auto [l1, r1] = lemma3_sides(phi, beta, 16);
    const double c0 = l0 == 0.0 ? 0.0 : l0 / r0;
    const double c1 = l1 == 0.0 ? 0.0 : l1 / r1;
    report.extra["C[" + phi.name + "]"] = c1;
    coarse = std::max(coarse, c0);
    fine = std::max(fine, c1);
    violation = std::max(violation, l1 - r1 * (1.0 + 1e-12));
  }
  report.fitted_C = fine;
  report.max_violation = violation;
  report.extra["stability"] = coarse == 0.0 ? 0.0 : std::abs(fine / coarse - 1.0);
  report.pass = violation <= 0.0 && report.extra["stability"] <= stability;
  return report;
}

CheckReport check_embedding(const HarmonicFunction& f, double p, double q, double alpha, const RadialGrid& grid,
                            double tol) {
  CheckReport report;
  report.check = "embedding";
  report.params = format_params({{"n", f.dimension()}, {"p", p}, {"q", q}, {"alpha", alpha}});
  report.tolerance = tol;
  const NormResult sup = space_norm(f, SpaceParams::B_inf(q, alpha), grid);
  const NormResult integral = space_norm(f, SpaceParams::B(p, q, alpha), grid);
  const double lhs = std::pow(sup.value, p);
  const double rhs = alpha * p * std::pow(integral.value, p);
  report.extra["lhs"] = lhs;
  report.extra["rhs"] = rhs;
  if (!integral.finite()) {
    report.max_violation = -std::numeric_limits<double>::infinity();
    report.pass = true;
    return report;
  }
  report.max_violation = lhs - rhs;
  report.fitted_C = rhs > 0.0 ? lhs / rhs : 0.0;
  report.pass = sup.finite() && report.max_violation <= tol * std::max(1.0, rhs);
  return report;
}

BruteForceQuery BruteForceQuery::mean(double p, double r) {
  BruteForceQuery q;
  q.kind = Kind::mean;
  q.p = p;
  q.r = r;
  return q;
}

BruteForceQuery BruteForceQuery::ball_norm(double p, double alpha) {
  BruteForceQuery q;
  q.kind = Kind::ball_norm;
  q.p = p;
  q.alpha = alpha;
  return q;
}

BruteForceQuery BruteForceQuery::ball_average(double alpha, double r) {
  BruteForceQuery q;
  q.kind = Kind::ball_average;
  q.alpha = alpha;
  q.r = r;
  return q;
}

BruteForceQuery BruteForceQuery::kernel_integral(double alpha, const IntervalSet& L, double r, double theta) {
  BruteForceQuery q;
  q.kind = Kind::kernel_integral;
  q.alpha = alpha;
  q.L = L;
  q.r = r;
  q.theta = theta;
  return q;
}

double bruteforce_oracle_n2(const TestFunctionSpec& spec, const BruteForceQuery& query, int resolution) {
  if (spec.n != 2) throw std::invalid_argument("bruteforce_oracle_n2: dimension must be 2");
  if (resolution < 16) throw std::invalid_argument("bruteforce_oracle_n2: resolution must be >= 16");
  const HarmonicFunction f = spec.function();
  constexpr double two_pi = 2.0 * std::numbers::pi;

  auto f_at = [&](double gap, double phi) {
    return f(Radius{1.0 - gap, gap}, Angle::from_theta(std::abs(std::remainder(phi, two_pi))));
  };
  // Circle average of g(phi) with N midpoints.
  auto circle = [&](int N, auto&& g) {
    double sum = 0.0;
    for (int j = 0; j < N; ++j) sum += g(two_pi * (j + 0.5) / N);
    return sum / N;
  };
  // int_a^b h(rho) d rho with rho = a + (b - a)(1 - (1-t)^4), graded toward b.
  auto radial = [&](int N, double a, double b, auto&& h) {
    double sum = 0.0;
    for (int i = 0; i < N; ++i) {
      const double t = (i + 0.5) / N;
      const double c = std::pow(1.0 - t, 4);
      const double gap = (1.0 - b) + (b - a) * c;
      sum += h(1.0 - gap, gap) * 4.0 * (b - a) * std::pow(1.0 - t, 3);
    }
    return sum / N;
  };

  auto estimate = [&](int N) {
    switch (query.kind) {
      case BruteForceQuery::Kind::mean:
        return circle(N, [&](double phi) { return std::pow(std::abs(f_at(1.0 - query.r, phi)), query.p); });
      case BruteForceQuery::Kind::ball_norm:
        return radial(N, 0.0, 1.0, [&](double rho, double gap) {
          return std::pow(gap, query.alpha) * rho *
                 circle(N, [&](double phi) { return std::pow(std::abs(f_at(gap, phi)), query.p); });
        });
      case BruteForceQuery::Kind::ball_average: {
        double sum = 0.0;
        for (int i = 0; i < N; ++i) {
          const double rho = query.r * (i + 0.5) / N;
          sum += std::pow(1.0 - rho, query.alpha) * rho *
                 circle(N, [&](double phi) { return std::abs(f_at(1.0 - rho, phi)); });
        }
        return sum * query.r / N;
      }
      case BruteForceQuery::Kind::kernel_integral: {
        const double a2 = query.alpha + 2.0;
        auto Q = [&](double rho, double phi) {
          const std::complex<double> z = std::polar(query.r * rho, query.theta - phi);
          return 2.0 * (query.alpha + 1.0) * (2.0 * std::pow(1.0 - z, -a2).real() - 1.0);
        };
        double sum = 0.0;
        for (const auto& iv : query.L.intervals()) {
          sum += radial(N, iv.lo, std::min(iv.hi, 1.0), [&](double rho, double gap) {
            return std::pow(gap * (1.0 + rho), query.alpha) * rho *
                   circle(N, [&](double phi) { return Q(rho, phi) * f_at(gap, phi); });
          });
        }
        return sum;
      }
    }
    return 0.0;
  };
  if (query.kind == BruteForceQuery::Kind::mean) {
    const double value = circle(256 * resolution, [&](double phi) {
      return std::pow(std::abs(f_at(1.0 - query.r, phi)), query.p);
    });
    return std::pow(value, 1.0 / query.p);
  }
  const double coarse = estimate(resolution);
  const double fine = estimate(2 * resolution);
  const double value = fine + (fine - coarse) / 3.0;
  if (query.kind == BruteForceQuery::Kind::ball_norm) {
    return std::pow(std::max(value, 0.0), 1.0 / query.p);
  }
  return value;
}

}  // namespace harmex
