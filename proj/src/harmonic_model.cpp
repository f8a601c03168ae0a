#include "harmex/harmonic_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "harmex/gauss.hpp"
#include "harmex/quadrature.hpp"
#include "harmex/special_fn.hpp"

namespace harmex {

// ---------------------------------------------------------------- jets

Jet operator*(const Jet& a, const Jet& b) {
  Jet out;
  out.order = std::min(a.order, b.order);
  for (int k = 0; k <= out.order; ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
    out.c[k] = s;
  }
  return out;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet out;
  out.order = std::min(a.order, b.order);
  for (int k = 0; k <= out.order; ++k) out.c[k] = a.c[k] + b.c[k];
  return out;
}

Jet operator*(double s, const Jet& a) {
  Jet out = a;
  for (int k = 0; k <= out.order; ++k) out.c[k] *= s;
  return out;
}

Jet pow(const Jet& a, double e) {
  if (!(a.c[0] > 0.0)) throw std::domain_error("Jet pow: constant term must be positive");
  Jet out;
  out.order = a.order;
  out.c[0] = std::pow(a.c[0], e);
  // k a0 b_k = sum_{j=1..k} ((e+1) j - k) a_j b_{k-j}
  for (int k = 1; k <= a.order; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += ((e + 1.0) * j - k) * a.c[j] * out.c[k - j];
    out.c[k] = s / (k * a.c[0]);
  }
  return out;
}

void poisson_radial_derivatives(int n, const Radius& r, double versine, std::span<double> out) {
  if (out.empty()) return;
  const int order = static_cast<int>(out.size()) - 1;
  if (order > Jet::kMaxOrder) throw std::domain_error("poisson_radial_derivatives: order too high");
  // r(tau) = r0 e^tau, so r d/dr is d/dtau.
  Jet t, gap, one_plus;
  t.order = gap.order = one_plus.order = order;
  double fact = 1.0;
  for (int j = 0; j <= order; ++j) {
    if (j > 0) fact *= j;
    t.c[j] = r.value / fact;
    gap.c[j] = -r.value / fact;
    one_plus.c[j] = r.value / fact;
  }
  gap.c[0] = r.gap;
  one_plus.c[0] = 1.0 + r.value;
  const Jet denom = gap * gap + (2.0 * versine) * t;
  const Jet p = gap * one_plus * pow(denom, -0.5 * n);
  fact = 1.0;
  for (int j = 0; j <= order; ++j) {
    if (j > 0) fact *= j;
    out[j] = fact * p.c[j];
  }
}

// ---------------------------------------------------------------- expansions

double zonal_sum(int n, std::span<const double> c, double s) {
  const std::size_t count = c.size();
  if (count == 0) return 0.0;
  double sum = c[0];
  if (count == 1) return sum;
  if (n == 2) {
    double tm1 = 1.0;
    double t = s;
    sum += 2.0 * c[1] * t;
    for (std::size_t k = 2; k < count; ++k) {
      const double next = 2.0 * s * t - tm1;
      tm1 = t;
      t = next;
      sum += 2.0 * c[k] * t;
    }
    return sum;
  }
  const double lambda = 0.5 * (n - 2);
  double cm1 = 1.0;
  double g = 2.0 * lambda * s;
  sum += c[1] * (1.0 + lambda) / lambda * g;
  for (std::size_t k = 2; k < count; ++k) {
    const double kk = static_cast<double>(k);
    const double next = (2.0 * (kk + lambda - 1.0) * s * g - (kk + 2.0 * lambda - 2.0) * cm1) / kk;
    cm1 = g;
    g = next;
    sum += c[k] * (kk + lambda) / lambda * g;
  }
  return sum;
}

ZonalExpansion::ZonalExpansion(int n, std::vector<double> coeffs, std::vector<double> pole)
    : n_(n), coeffs_(std::move(coeffs)), pole_(std::move(pole)) {
  if (n < 2) throw std::domain_error("ZonalExpansion: dimension must be at least 2");
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw std::domain_error("ZonalExpansion: non-finite coefficient");
  }
  if (pole_.empty()) {
    pole_.assign(n, 0.0);
    pole_.back() = 1.0;
  }
  if (static_cast<int>(pole_.size()) != n) throw std::domain_error("ZonalExpansion: pole has wrong dimension");
  double norm2 = 0.0;
  for (double x : pole_) norm2 += x * x;
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-14) throw std::domain_error("ZonalExpansion: pole must be a unit vector");
}

std::vector<double> ZonalExpansion::radial_coefficients(double r) const {
  std::vector<double> out(coeffs_.size());
  double power = 1.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    out[k] = coeffs_[k] * power;
    power *= r;
  }
  return out;
}

double ZonalExpansion::operator()(double r, double s) const {
  if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("evaluate: radius must lie in [0, 1)");
  if (!(std::abs(s) <= 1.0)) throw std::domain_error("evaluate: cosine outside [-1, 1]");
  const auto rc = radial_coefficients(r);
  return zonal_sum(n_, rc, s);
}

double ZonalExpansion::at_point(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw std::domain_error("at_point: wrong dimension");
  double r2 = 0.0;
  double dot = 0.0;
  for (int i = 0; i < n_; ++i) {
    r2 += x[i] * x[i];
    dot += x[i] * pole_[i];
  }
  const double r = std::sqrt(r2);
  const double s = r > 0.0 ? std::clamp(dot / r, -1.0, 1.0) : 1.0;
  return (*this)(r, s);
}

double evaluate(const ZonalExpansion& f, double r, double s) { return f(r, s); }

ZonalExpansion fractional_derivative(const ZonalExpansion& f, double t) {
  std::vector<double> c = f.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] *= frac_deriv_multiplier(static_cast<int>(k), t, f.dimension());
  }
  return ZonalExpansion(f.dimension(), std::move(c), f.pole());
}

ZonalExpansion bergman_kernel(int n, double alpha, std::span<const double> y, int K) {
  if (!(alpha > -1.0)) throw std::domain_error("bergman_kernel: alpha must exceed -1");
  if (static_cast<int>(y.size()) != n) throw std::domain_error("bergman_kernel: wrong dimension");
  if (K < 0) throw std::domain_error("bergman_kernel: negative degree");
  double norm2 = 0.0;
  for (double v : y) norm2 += v * v;
  const double rho0 = std::sqrt(norm2);
  if (rho0 > 1.0 + 1e-14) throw std::domain_error("bergman_kernel: |y| must not exceed 1");
  std::vector<double> pole;
  if (rho0 > 0.0) {
    for (double v : y) pole.push_back(v / rho0);
  }
  std::vector<double> c(K + 1);
  double power = 1.0;
  for (int k = 0; k <= K; ++k) {
    c[k] = kernel_coefficient(k, alpha, n) * power;
    power *= std::min(rho0, 1.0);
  }
  return ZonalExpansion(n, std::move(c), std::move(pole));
}

int truncation_degree(int n, double alpha, double rho_max, double tol) {
  if (!(rho_max >= 0.0 && rho_max < 1.0)) throw std::domain_error("truncation_degree: need 0 <= rho_max < 1");
  if (!(tol > 0.0)) throw std::domain_error("truncation_degree: tol must be positive");
  if (rho_max == 0.0) return 0;
  const double log_rho = std::log(rho_max);
  auto term = [&](int k) {
    return std::exp(std::log(kernel_coefficient(k, alpha, n)) + std::log(zonal_dimension(k, n)) + k * log_rho);
  };
  // Terms are eventually geometric with a decreasing ratio; collect them until
  // the remaining tail is negligible next to tol.
  std::vector<double> terms{term(0)};
  double tail_bound = 0.0;
  for (int k = 1;; ++k) {
    terms.push_back(term(k));
    const double q = terms[k] / terms[k - 1];
    if (k >= 2 && q < 1.0) {
      tail_bound = terms[k] * q / (1.0 - q);
      if (tail_bound < 1e-3 * tol) break;
    }
    if (k > 50'000'000) throw std::domain_error("truncation_degree: series converges too slowly");
  }
  double tail = tail_bound;
  int K = static_cast<int>(terms.size()) - 1;
  while (K > 0 && tail + terms[K] < tol) {
    tail += terms[K];
    --K;
  }
  return K;
}

// ---------------------------------------------------------------- closed-form series

namespace {

// cos(pi x) and sin(pi x), exact at multiples of 1/2.
double cos_pi(double x) {
  const double r = std::fmod(std::abs(x), 2.0);
  if (r == 0.5 || r == 1.5) return 0.0;
  if (r == 0.0) return 1.0;
  if (r == 1.0) return -1.0;
  return std::cos(std::numbers::pi * r);
}

double sin_pi(double x) {
  const double sign = x < 0.0 ? -1.0 : 1.0;
  const double r = std::fmod(std::abs(x), 2.0);
  if (r == 0.0 || r == 1.0) return 0.0;
  if (r == 0.5) return sign;
  if (r == 1.5) return -sign;
  return sign * std::sin(std::numbers::pi * r);
}

}  // namespace

GammaRatioSeries::GammaRatioSeries(int n, double scale, double a, double rho0, Route route)
    : n_(n), scale_(scale), a_(a), rho0_(Radius::from_gap(1.0)), route_(route) {
  if (n < 2) throw std::domain_error("GammaRatioSeries: dimension must be at least 2");
  if (!(a > 0.0)) throw std::domain_error("GammaRatioSeries: Gamma pole (shift must be positive)");
  if (!std::isfinite(scale)) throw std::domain_error("GammaRatioSeries: non-finite scale");
  if (!(rho0 >= 0.0 && rho0 <= 1.0)) throw std::domain_error("GammaRatioSeries: rho0 must lie in [0, 1]");
  rho0_ = {rho0, 1.0 - rho0};
  use_complex_ = n == 2 && route == Route::automatic;

  const double b = 0.5 * n;
  const double delta = a - b;
  const double nearest = std::round(delta);
  std::vector<double> roots;  // poly(k) = prod (k + root)
  if (nearest >= 0.0 && std::abs(delta - nearest) < 1e-12) {
    for (int i = 0; i < static_cast<int>(nearest); ++i) roots.push_back(b + i);
  } else {
    const int m = delta > 0.0 ? static_cast<int>(std::floor(delta)) + 1 : 0;
    for (int i = 1; i <= m; ++i) roots.push_back(a - i);
    integral_ = true;
    a_prime_ = a - m;
    beta_norm_ = std::exp(-log_gamma(b - a_prime_));
  }
  if (static_cast<int>(roots.size()) > Jet::kMaxOrder) {
    throw std::domain_error("GammaRatioSeries: shift too large for the derivative route");
  }
  r_poly_ = {1.0};
  for (double root : roots) {
    std::vector<double> next(r_poly_.size() + 1, 0.0);
    for (std::size_t j = 0; j < r_poly_.size(); ++j) {
      next[j] += root * r_poly_[j];
      next[j + 1] += r_poly_[j];
    }
    r_poly_ = std::move(next);
  }
}

double GammaRatioSeries::coefficient(int k) const {
  if (k < 0) return 0.0;
  if (rho0_.value == 0.0 && k > 0) return 0.0;
  const double log_pow = k == 0 ? 0.0 : k * std::log(rho0_.value);
  return scale_ * std::exp(log_gamma(k + a_) - log_gamma(k + 0.5 * n_) + log_pow);
}

double GammaRatioSeries::operator()(const Radius& r, const Angle& angle) const {
  const Radius t = scaled(rho0_, r);
  if (t.value == 0.0) return coefficient(0);
  if (use_complex_) return complex_route(t, angle);
  if (!integral_) return scale_ * differential_part(t, angle.versine);
  return integral_route(t, angle);
}

double GammaRatioSeries::complex_route(const Radius& t, const Angle& angle) const {
  // sum Gamma(k+a)/k! z^k = Gamma(a) (1-z)^{-a};  Z_k = z^k + conj(z)^k for k >= 1.
  const double re = t.gap + t.value * angle.versine;
  const double im = t.value * std::sin(angle.theta);
  const double mod2 = t.gap * t.gap + 2.0 * t.value * angle.versine;
  double cos_part;
  if (re >= std::abs(im)) {
    cos_part = std::cos(a_ * std::atan2(im, re));
  } else {
    // arg(1-z) = -(pi/2 - delta) with delta small and accurate
    const double delta = std::atan2(re, std::abs(im));
    cos_part = cos_pi(0.5 * a_) * std::cos(a_ * delta) + sin_pi(0.5 * a_) * std::sin(a_ * delta);
  }
  const double real_part = std::exp(-0.5 * a_ * std::log(mod2)) * cos_part;
  return scale_ * std::exp(log_gamma(a_)) * (2.0 * real_part - 1.0);
}

double GammaRatioSeries::differential_part(const Radius& t, double versine) const {
  std::array<double, Jet::kMaxOrder + 1> d{};
  const std::span<double> out(d.data(), r_poly_.size());
  poisson_radial_derivatives(n_, t, versine, out);
  double sum = 0.0;
  for (std::size_t j = 0; j < r_poly_.size(); ++j) sum += r_poly_[j] * d[j];
  return sum;
}

double GammaRatioSeries::integral_route(const Radius& t, const Angle& angle) const {
  // Gamma(k+a')/Gamma(k+b) = 1/Gamma(b-a') int_0^1 u^{k+a'-1} (1-u)^{b-a'-1} du
  const double b = 0.5 * n_;
  const double c = b - a_prime_ - 1.0;
  const double v = angle.versine;
  constexpr int kEndPoints = 16;
  constexpr int kPanelPoints = 10;

  auto at_u = [&](double u) {
    const double value = t.value * u;
    return differential_part({value, 1.0 - value}, v);
  };
  double total = integrate_power_left([&](double u) { return std::pow(1.0 - u, c) * at_u(u); }, 0.5,
                                      a_prime_ - 1.0, kEndPoints);

  // u = 1 - w near the boundary of the effective radius.
  auto at_w = [&](double w) {
    const Radius tu{t.value * (1.0 - w), t.gap + t.value * w};
    return std::pow(1.0 - w, a_prime_ - 1.0) * differential_part(tu, v);
  };
  const double sigma = std::max(t.gap, angle.theta);
  double hi = 0.5;
  for (int depth = 0; depth < 90 && hi > 0.125 * sigma; ++depth) {
    const double lo = 0.5 * hi;
    total += integrate_gauss([&](double w) { return std::pow(w, c) * at_w(w); }, lo, hi, kPanelPoints);
    hi = lo;
  }
  total += integrate_power_left(at_w, hi, c, kEndPoints);
  return scale_ * beta_norm_ * total;
}

// ---------------------------------------------------------------- HarmonicFunction

HarmonicFunction::HarmonicFunction(ZonalExpansion finite) : finite_(std::move(finite)) {}

HarmonicFunction::HarmonicFunction(GammaRatioSeries series, ZonalExpansion finite)
    : series_(std::move(series)), finite_(std::move(finite)) {
  if (series_->dimension() != finite_.dimension()) {
    throw std::domain_error("HarmonicFunction: series and correction differ in dimension");
  }
}

double HarmonicFunction::coefficient(int k) const {
  return (series_ ? series_->coefficient(k) : 0.0) + finite_.coefficient(k);
}

double HarmonicFunction::operator()(const Radius& r, const Angle& angle) const {
  double value = series_ ? (*series_)(r, angle) : 0.0;
  if (finite_.degree() >= 0) {
    const auto rc = finite_.radial_coefficients(r.value);
    value += zonal_sum(dimension(), rc, angle.cos);
  }
  return value;
}

double HarmonicFunction::concentration_gap(const Radius& r) const {
  double gap = series_ ? series_->effective_gap(r) : 1.0;
  if (finite_reach_) gap = std::min(gap, scaled(*finite_reach_, r).gap);
  return gap;
}

HarmonicFunction HarmonicFunction::with_finite_reach(const Radius& reach) const {
  HarmonicFunction out = *this;
  out.finite_reach_ = reach;
  return out;
}

void HarmonicFunction::sample(const Radius& r, const AngularRule& rule, std::vector<double>& out) const {
  out.assign(rule.size(), 0.0);
  const auto rc = finite_.radial_coefficients(r.value);
  const auto& nodes = rule.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double value = series_ ? (*series_)(r, nodes[i]) : 0.0;
    if (!rc.empty()) value += zonal_sum(dimension(), rc, nodes[i].cos);
    out[i] = value;
  }
}

HarmonicFunction HarmonicFunction::minus(const ZonalExpansion& g) const {
  if (g.dimension() != dimension()) throw std::domain_error("HarmonicFunction::minus: dimension mismatch");
  const int K = std::max(finite_.degree(), g.degree());
  std::vector<double> c(K + 1);
  for (int k = 0; k <= K; ++k) c[k] = finite_.coefficient(k) - g.coefficient(k);
  ZonalExpansion diff(dimension(), std::move(c), finite_.pole());
  return series_ ? HarmonicFunction(*series_, std::move(diff)) : HarmonicFunction(std::move(diff));
}

ZonalExpansion HarmonicFunction::truncated(int K) const {
  std::vector<double> c(std::max(K, -1) + 1);
  for (int k = 0; k <= K; ++k) c[k] = coefficient(k);
  return ZonalExpansion(dimension(), std::move(c), finite_.pole());
}

// ---------------------------------------------------------------- TestFunctionSpec

TestFunctionSpec TestFunctionSpec::poisson(int n, int K) {
  TestFunctionSpec s;
  s.kind = Kind::poisson;
  s.n = n;
  s.K = K;
  return s;
}

TestFunctionSpec TestFunctionSpec::q_kernel(int n, double beta, double rho0, int K) {
  TestFunctionSpec s;
  s.kind = Kind::q_kernel;
  s.n = n;
  s.beta = beta;
  s.rho0 = rho0;
  s.K = K;
  return s;
}

TestFunctionSpec TestFunctionSpec::p_alpha(int n, double alpha, int K) {
  TestFunctionSpec s;
  s.kind = Kind::p_alpha;
  s.n = n;
  s.alpha = alpha;
  s.K = K;
  return s;
}

TestFunctionSpec TestFunctionSpec::polynomial(int n, std::vector<double> coeffs) {
  TestFunctionSpec s;
  s.kind = Kind::polynomial;
  s.n = n;
  s.K = static_cast<int>(coeffs.size()) - 1;
  s.coeffs = std::move(coeffs);
  return s;
}

TestFunctionSpec TestFunctionSpec::random(int n, int K, std::uint64_t seed, double decay) {
  TestFunctionSpec s;
  s.kind = Kind::random;
  s.n = n;
  s.K = K;
  s.seed = seed;
  s.decay = decay;
  return s;
}

void TestFunctionSpec::validate() const {
  if (n < 2) throw std::invalid_argument("test function: n must be at least 2");
  switch (kind) {
    case Kind::poisson:
      break;
    case Kind::q_kernel:
      if (!(beta > -1.0)) throw std::invalid_argument("q_kernel: beta must exceed -1");
      if (!(rho0 > 0.0 && rho0 <= 1.0)) throw std::invalid_argument("q_kernel: rho0 must lie in (0, 1]");
      break;
    case Kind::p_alpha:
      if (!(alpha - 1.0 + 0.5 * n > 0.0)) throw std::invalid_argument("p_alpha: need alpha - 1 + n/2 > 0");
      break;
    case Kind::polynomial:
      if (coeffs.empty()) throw std::invalid_argument("polynomial: empty coefficient list");
      break;
    case Kind::random:
      if (K < 0) throw std::invalid_argument("random: K must be nonnegative");
      break;
  }
  if (kind != Kind::polynomial && K < 0) throw std::invalid_argument("test function: K must be nonnegative");
}

namespace {

std::vector<double> random_coefficients(int K, std::uint64_t seed, double decay) {
  std::mt19937_64 rng(seed);
  std::vector<double> c(K + 1);
  for (int k = 0; k <= K; ++k) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    c[k] = (2.0 * u - 1.0) * std::pow(k + 1.0, -decay);
  }
  return c;
}

}  // namespace

HarmonicFunction TestFunctionSpec::function() const {
  validate();
  const double b = 0.5 * n;
  switch (kind) {
    case Kind::poisson:
      return HarmonicFunction(GammaRatioSeries(n, 1.0, b), ZonalExpansion(n, {}));
    case Kind::q_kernel:
      return HarmonicFunction(GammaRatioSeries(n, 2.0 * std::exp(-log_gamma(beta + 1.0)), beta + 1.0 + b, rho0),
                              ZonalExpansion(n, {}));
    case Kind::p_alpha:
      return HarmonicFunction(GammaRatioSeries(n, std::exp(-log_gamma(alpha - 1.0 + b)), alpha - 1.0 + b),
                              ZonalExpansion(n, {}));
    case Kind::polynomial:
      return HarmonicFunction(ZonalExpansion(n, coeffs));
    case Kind::random:
      return HarmonicFunction(ZonalExpansion(n, random_coefficients(K, seed, decay)));
  }
  throw std::logic_error("unreachable");
}

double TestFunctionSpec::coefficient(int k) const {
  switch (kind) {
    case Kind::poisson:
      return 1.0;
    case Kind::q_kernel:
      return kernel_coefficient(k, beta, n) * std::pow(rho0, k);
    case Kind::p_alpha:
      return frac_deriv_multiplier(k, alpha - 1.0, n);
    case Kind::polynomial:
      return k < static_cast<int>(coeffs.size()) ? coeffs[k] : 0.0;
    case Kind::random: {
      if (k > K) return 0.0;
      return random_coefficients(k, seed, decay).back();
    }
  }
  throw std::logic_error("unreachable");
}

ZonalExpansion TestFunctionSpec::expansion() const {
  validate();
  if (kind == Kind::polynomial) return ZonalExpansion(n, coeffs);
  if (kind == Kind::random) return ZonalExpansion(n, random_coefficients(K, seed, decay));
  std::vector<double> c(K + 1);
  for (int k = 0; k <= K; ++k) c[k] = coefficient(k);
  return ZonalExpansion(n, std::move(c));
}

std::string to_string(TestFunctionSpec::Kind kind) {
  switch (kind) {
    case TestFunctionSpec::Kind::poisson: return "poisson";
    case TestFunctionSpec::Kind::q_kernel: return "q_kernel";
    case TestFunctionSpec::Kind::p_alpha: return "p_alpha";
    case TestFunctionSpec::Kind::polynomial: return "polynomial";
    case TestFunctionSpec::Kind::random: return "random";
  }
  return "unknown";
}

std::string TestFunctionSpec::label() const {
  std::ostringstream os;
  os << to_string(kind) << '(';
  switch (kind) {
    case Kind::poisson: break;
    case Kind::q_kernel: os << "beta=" << beta << ";rho0=" << rho0 << ';'; break;
    case Kind::p_alpha: os << "alpha=" << alpha << ';'; break;
    case Kind::polynomial: os << "K=" << K << ';'; break;
    case Kind::random: os << "seed=" << seed << ";decay=" << decay << ";K=" << K << ';'; break;
  }
  os << "n=" << n << ')';
  return os.str();
}

void to_json(nlohmann::json& j, const TestFunctionSpec& spec) {
  j = nlohmann::json{{"kind", to_string(spec.kind)}, {"n", spec.n}, {"K", spec.K}};
  switch (spec.kind) {
    case TestFunctionSpec::Kind::poisson: break;
    case TestFunctionSpec::Kind::q_kernel:
      j["beta"] = spec.beta;
      j["rho0"] = spec.rho0;
      break;
    case TestFunctionSpec::Kind::p_alpha: j["alpha"] = spec.alpha; break;
    case TestFunctionSpec::Kind::polynomial: j["coeffs"] = spec.coeffs; break;
    case TestFunctionSpec::Kind::random:
      j["seed"] = spec.seed;
      j["decay"] = spec.decay;
      break;
  }
}

void from_json(const nlohmann::json& j, TestFunctionSpec& spec) {
  const std::string kind = j.at("kind").get<std::string>();
  spec = TestFunctionSpec{};
  spec.n = j.value("n", 2);
  spec.K = j.value("K", 200);
  if (kind == "poisson") {
    spec.kind = TestFunctionSpec::Kind::poisson;
  } else if (kind == "q_kernel") {
    spec.kind = TestFunctionSpec::Kind::q_kernel;
    spec.beta = j.at("beta").get<double>();
    spec.rho0 = j.value("rho0", 1.0);
  } else if (kind == "p_alpha") {
    spec.kind = TestFunctionSpec::Kind::p_alpha;
    spec.alpha = j.at("alpha").get<double>();
  } else if (kind == "polynomial") {
    spec.kind = TestFunctionSpec::Kind::polynomial;
    spec.coeffs = j.at("coeffs").get<std::vector<double>>();
    spec.K = static_cast<int>(spec.coeffs.size()) - 1;
  } else if (kind == "random") {
    spec.kind = TestFunctionSpec::Kind::random;
    if (!j.contains("seed")) throw std::invalid_argument("random test function needs a seed");
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.decay = j.value("decay", 1.0);
  } else {
    throw std::invalid_argument("unknown test function kind '" + kind + "'");
  }
  spec.validate();
}

}  // namespace harmex
