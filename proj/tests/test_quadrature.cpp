#include "doctest.h"

#include <cmath>
#include <numbers>

#include "harmex/gauss.hpp"
#include "harmex/quadrature.hpp"
#include "harmex/special_fn.hpp"

using namespace harmex;
using doctest::Approx;

TEST_CASE("Gauss-Jacobi rules integrate polynomials exactly") {
  for (auto [a, b] : {std::pair{0.0, 0.0}, {0.5, -0.5}, {-0.75, 2.0}, {1.5, 1.5}}) {
    const GaussRule& rule = gauss_jacobi(12, a, b);
    // int_{-1}^{1} (1-x)^a (1+x)^b x^0 = 2^{a+b+1} B(a+1, b+1)
    const double mass = std::pow(2.0, a + b + 1) * std::tgamma(a + 1) * std::tgamma(b + 1) / std::tgamma(a + b + 2);
    double sum = 0.0;
    for (double w : rule.weights) sum += w;
    CHECK(sum == Approx(mass).epsilon(1e-13));
    // (1+x)^j: 2^{a+b+j+1} B(a+1, b+j+1)
    for (int j = 1; j < 24; ++j) {
      double q = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) q += rule.weights[i] * std::pow(1 + rule.nodes[i], j);
      const double exact = std::pow(2.0, a + b + j + 1) * std::tgamma(a + 1) * std::tgamma(b + j + 1) /
                           std::tgamma(a + b + j + 2);
      CHECK(q == Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("sphere_integral examples") {
  for (int n : {2, 3, 4, 5}) {
    CHECK(sphere_integral([](double) { return 1.0; }, n, 4) == Approx(1.0).epsilon(1e-14));
    for (int k = 1; k <= 12; ++k) {
      const double v = sphere_integral([&](double s) { return zonal_value(k, n, s); }, n, 24);
      CHECK(std::abs(v) < 1e-12);
    }
  }
  // n = 3 oracle: (1/2) int_{-1}^{1} (2k+1) P_k(s) ds = 0 for k >= 1, computed independently.
  for (int k = 1; k <= 6; ++k) {
    const double v = 0.5 * integrate_gauss([&](double s) { return (2 * k + 1) * std::legendre(k, s); }, -1, 1, 20);
    CHECK(std::abs(v) < 1e-14);
  }
  // Poisson section: (1-r^2)/(1-2rs+r^2)^{n/2} has unit mass.
  for (int n : {2, 3}) {
    for (double r : {0.1, 0.5, 0.8}) {
      auto poisson = [&](double s) { return (1 - r * r) / std::pow(1 - 2 * r * s + r * r, 0.5 * n); };
      CHECK(sphere_integral(poisson, n, 200) == Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(sphere_integral([](double) { return 1.0; }, 3, 0), std::domain_error);
}

TEST_CASE("SphereRule has positive weights summing to one") {
  for (int n : {2, 3, 4, 6}) {
    const auto rule = SphereRule::make(n, 30);
    double sum = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(sum == Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("AngularRule resolves a boundary-concentrated kernel") {
  for (int n : {2, 3, 4}) {
    for (double gap : {1e-2, 1e-6, 1e-12}) {
      const double r = 1.0 - gap;
      const auto rule = AngularRule::for_radius(n, gap, 0);
      double sum = 0.0;
      for (double w : rule.weights()) sum += w;
      CHECK(sum == Approx(1.0).epsilon(1e-13));
      // Poisson kernel in gap form
      std::vector<double> values;
      auto poisson = [&](const Angle& a) {
        return gap * (1.0 + r) / std::pow(gap * gap + 2.0 * r * a.versine, 0.5 * n);
      };
      for (const auto& a : rule.nodes()) values.push_back(poisson(a));
      CHECK(rule.mean_abs_pow(values, 1.0, poisson) == Approx(1.0).epsilon(1e-9));
      CHECK(rule.max_abs(values, poisson) == Approx((1.0 + r) / std::pow(gap, n - 1)).epsilon(1e-12));
    }
  }
}

TEST_CASE("AngularRule splits |f| at sign changes") {
  // f = Z_3 on S^2 = 7 P_3(s); int |f| dsigma = 7/2 int |P_3|.
  const auto rule = AngularRule::for_radius(3, 10.0, 3);
  auto f = [](const Angle& a) { return 7.0 * std::legendre(3, a.cos); };
  std::vector<double> values;
  for (const auto& a : rule.nodes()) values.push_back(f(a));
  // Oracle: split [-1, 1] at the roots of P_3 (0, +-sqrt(3/5)).
  const double z = std::sqrt(0.6);
  double oracle = 0.0;
  for (auto [lo, hi] : {std::pair{-1.0, -z}, {-z, 0.0}, {0.0, z}, {z, 1.0}}) {
    oracle += std::abs(integrate_gauss([](double s) { return std::legendre(3, s); }, lo, hi, 10));
  }
  oracle *= 3.5;
  CHECK(rule.mean_abs_pow(values, 1.0, f) == Approx(oracle).epsilon(1e-13));
}

TEST_CASE("RadialGrid layout") {
  const RadialGrid grid({6, 4, 3, 2});
  CHECK(grid.nodes().size() == 25u);
  CHECK(grid.nodes().front().value == 0.0);
  CHECK(grid.nodes().back().gap == std::ldexp(1.0, -6));
  for (std::size_t i = 1; i < grid.nodes().size(); ++i) CHECK(grid.nodes()[i].value > grid.nodes()[i - 1].value);
  for (std::size_t i = 1; i < grid.points().size(); ++i) CHECK(grid.points()[i].gap < grid.points()[i - 1].gap);
  // Every annulus j < J holds exactly M nodes.
  for (int j = 0; j < 6; ++j) {
    int count = 0;
    for (const auto& r : grid.nodes()) {
      if (r.gap <= std::ldexp(1.0, -j) && r.gap > std::ldexp(1.0, -j - 1)) ++count;
    }
    CHECK(count == 4);
  }
  for (double w : grid.weights()) CHECK(w > 0.0);
}

TEST_CASE("radial_integral examples") {
  const RadialGrid grid;
  for (double beta : {0.25, 0.5, 1.0, 3.0}) {
    const auto res = radial_integral([](const Radius&) { return 1.0; }, beta - 1.0, grid);
    CHECK(res.value == Approx(1.0 / beta).epsilon(1e-12));
    CHECK(res.status == Convergence::converged);
  }
  const auto lin = radial_integral([](const Radius& r) { return r.value; }, 0.0, grid);
  CHECK(lin.value == Approx(0.5).epsilon(1e-12));
  // gamma = -1 with h nonvanishing at the boundary is divergent, not a number.
  const auto log_div = radial_integral([](const Radius&) { return 1.0; }, -1.0, grid);
  CHECK(log_div.status == Convergence::divergent);
  // h = indicator of [0, 1 - 2^-j]: j ln 2 with the boundary excluded.
  const int j = 7;
  const auto ind = radial_integral([&](const Radius& r) { return r.gap >= std::ldexp(1.0, -j) ? 1.0 : 0.0; }, -1.0, grid);
  CHECK(ind.status == Convergence::converged);
  CHECK(ind.value == Approx(j * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("radial_integral refinement convergence") {
  const RadialGrid coarse;
  const RadialGrid fine(RadialGridSpec{80, 16, 4, 5});
  for (double gamma : {-0.75, -0.5, 0.0, 1.5}) {
    auto h = [](const Radius& r) { return std::exp(r.value) * (1.0 + r.value * r.value); };
    const double a = radial_integral(h, gamma, coarse).value;
    const double b = radial_integral(h, gamma, fine).value;
    CHECK(std::abs(a - b) < 1e-8);
  }
}

TEST_CASE("integrate_gap_power and ball_integral") {
  // int_0^1 g^{-0.5} / (g + 1e-6) dg has a near-singularity at scale 1e-6.
  const double eps = 1e-6;
  const double got = integrate_gap_power([&](double g) { return 1.0 / (g + eps); }, 0.0, 1.0, -0.5);
  // Oracle: substitute g = eps u^2 -> 2/sqrt(eps) atan(1/sqrt(eps)).
  CHECK(got == Approx(2.0 / std::sqrt(eps) * std::atan(1.0 / std::sqrt(eps))).epsilon(1e-10));
  for (int n : {2, 3, 4}) {
    const double mass = ball_integral([](const Radius&) { return 1.0; }, n, 0.0, Radius::from_gap(1e-14));
    CHECK(mass == Approx(1.0 / n).epsilon(1e-12));
  }
  const double c = 2.5;
  const double p = 3.0;
  const double one = ball_integral([](const Radius&) { return 1.0; }, 3, 0.5, Radius::from_value(0.7));
  const double scaled = ball_integral([&](const Radius&) { return std::pow(c, p); }, 3, 0.5, Radius::from_value(0.7));
  CHECK(scaled == Approx(std::pow(c, p) * one).epsilon(1e-14));
}
