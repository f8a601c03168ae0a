#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "harmex/norms.hpp"
#include "harmex/special_fn.hpp"

using namespace harmex;
using doctest::Approx;

namespace {

HarmonicFunction constant(int n, double c) { return HarmonicFunction(ZonalExpansion(n, {c})); }

HarmonicFunction random_expansion(int n, int K, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> c(K + 1);
  for (int k = 0; k <= K; ++k) c[k] = (2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0) / (1.0 + k * k);
  return HarmonicFunction(ZonalExpansion(n, c));
}

const RadialGrid& small_grid() {
  static const RadialGrid grid(RadialGridSpec{24, 4, 4, 5});
  return grid;
}

}  // namespace

TEST_CASE("integral_mean examples") {
  for (int n : {2, 3, 4}) {
    for (double p : {0.5, 1.0, 2.0, SpaceParams::kInf}) {
      for (double r : {0.0, 0.4, 0.95}) {
        CHECK(integral_mean(constant(n, -2.5), p, Radius::from_value(r)) == Approx(2.5).epsilon(1e-13));
      }
    }
    const auto poisson = TestFunctionSpec::poisson(n).function();
    for (double gap : {0.5, 1e-2, 1e-5, 1e-10}) {
      const Radius r = Radius::from_gap(gap);
      CHECK(integral_mean(poisson, 1.0, r) == Approx(1.0).epsilon(1e-9));
      const double peak = (1.0 + r.value) / std::pow(gap, n - 1);
      CHECK(integral_mean(poisson, SpaceParams::kInf, r) == Approx(peak).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(integral_mean(constant(2, 1.0), 0.0, Radius::from_value(0.5)), std::domain_error);
}

TEST_CASE("M_q(f, r) is nondecreasing for q >= 1") {
  for (int n : {2, 3}) {
    const auto f = random_expansion(n, 12, 40 + n);
    for (double q : {1.0, 2.0, SpaceParams::kInf}) {
      const auto profile = weighted_mean_profile(f, q, 0.0, small_grid());
      for (std::size_t i = 1; i < profile.values.size(); ++i) {
        CHECK(profile.values[i] >= profile.values[i - 1] - 1e-12);
      }
    }
  }
}

TEST_CASE("space_norm of constants") {
  const auto one = constant(3, 1.0);
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double p : {0.5, 1.0, 2.0}) {
      for (double q : {1.0, 2.0}) {
        const auto res = space_norm(one, SpaceParams::B(p, q, alpha), small_grid());
        CHECK(res.finite());
        CHECK(res.value == Approx(std::pow(alpha * p, -1.0 / p)).epsilon(1e-10));
      }
      CHECK(space_norm(one, SpaceParams::B_p_inf(p, alpha), small_grid()).value ==
            Approx(std::pow(alpha * p, -1.0 / p)).epsilon(1e-10));
    }
    CHECK(space_norm(one, SpaceParams::B_inf(1.0, alpha), small_grid()).value == Approx(1.0).epsilon(1e-12));
    CHECK(space_norm(one, SpaceParams::A_inf(alpha), small_grid()).value == Approx(1.0).epsilon(1e-12));
    // int_0^1 (1-r)^alpha r^{n-1} dr = B(n, alpha+1)
    for (double p : {0.5, 2.0}) {
      const double beta_fn = std::tgamma(3.0) * std::tgamma(alpha + 1.0) / std::tgamma(alpha + 4.0);
      CHECK(space_norm(one, SpaceParams::A(p, alpha), small_grid()).value ==
            Approx(std::pow(beta_fn, 1.0 / p)).epsilon(1e-10));
    }
  }
}

TEST_CASE("ball_average_profile examples") {
  const auto zero = ball_average_profile(constant(2, 0.0), 0.5, small_grid());
  for (double v : zero.values) CHECK(v == 0.0);
  const auto one = ball_average_profile(constant(2, 1.0), 0.0, small_grid());
  for (std::size_t i = 0; i < one.values.size(); ++i) {
    const double r = one.radii[i].value;
    CHECK(one.values[i] == Approx(0.5 * r * r).epsilon(1e-13));
  }
  // M_1(P, r) = 1, so A_1(P, r) = int_0^r (1-t) t dt.
  const auto poisson = ball_average_profile(TestFunctionSpec::poisson(2).function(), 1.0, small_grid());
  for (std::size_t i = 0; i < poisson.values.size(); ++i) {
    const double r = poisson.radii[i].value;
    CHECK(poisson.values[i] == Approx(r * r / 2.0 - r * r * r / 3.0).epsilon(1e-8));
  }
  for (std::size_t i = 1; i < poisson.values.size(); ++i) CHECK(poisson.values[i] >= poisson.values[i - 1]);
}

TEST_CASE("M families for f = 1, n = 2, alpha = 0") {
  // A_0(1, r) = r^2 / 2; sup (1-r)^beta r^2/2 sits at r = 2/(2+beta).
  for (double beta : {0.5, 1.0, 3.0}) {
    const double r = 2.0 / (2.0 + beta);
    const double want = std::pow(1.0 - r, beta) * r * r / 2.0;
    const auto res = space_norm(constant(2, 1.0), SpaceParams::M(0.0, beta), small_grid());
    CHECK(res.finite());
    CHECK(res.value == Approx(want).epsilon(1e-10));
  }
  // (int_0^1 (1-r)^{beta p - 1} (r^2/2)^p dr)^{1/p} = 2^{-1} B(2p+1, beta p)^{1/p}
  for (double p : {1.0, 2.0}) {
    const double beta = 1.5;
    const double b = std::tgamma(2 * p + 1) * std::tgamma(beta * p) / std::tgamma(2 * p + 1 + beta * p);
    const auto res = space_norm(constant(2, 1.0), SpaceParams::M_p(p, 0.0, beta), small_grid());
    CHECK(res.value == Approx(0.5 * std::pow(b, 1.0 / p)).epsilon(1e-9));
  }
}

TEST_CASE("embedding B^{p,q} into B^{inf,q}") {
  for (int seed = 0; seed < 4; ++seed) {
    const auto f = random_expansion(2 + seed % 2, 8, 100 + seed);
    for (double p : {0.5, 1.0, 2.0}) {
      for (double alpha : {0.5, 2.0}) {
        const double sup = space_norm(f, SpaceParams::B_inf(1.0, alpha), small_grid()).value;
        const double integral = space_norm(f, SpaceParams::B(p, 1.0, alpha), small_grid()).value;
        CHECK(std::pow(sup, p) <= alpha * p * std::pow(integral, p) + 1e-10);
      }
    }
  }
}

TEST_CASE("boundary-singular kernels: finite and divergent norms") {
  const RadialGrid grid(RadialGridSpec{30, 4, 4, 5});
  for (double alpha : {1.0, 2.0}) {
    const auto f = TestFunctionSpec::q_kernel(2, alpha - 1.0, 1.0).function();
    const auto b = space_norm(f, SpaceParams::B_inf(1.0, alpha), grid);
    CHECK(b.finite());
    CHECK(b.value > 0.0);
    // The point values grow like (1-r)^{-(alpha+n-1)}: not in A^inf_alpha.
    const auto a = space_norm(f, SpaceParams::A_inf(alpha), grid);
    CHECK(a.status == Convergence::divergent);
    // B^{1,1}_alpha needs int M_1 (1-r)^{alpha-1}, a logarithmic divergence.
    CHECK(space_norm(f, SpaceParams::B(1.0, 1.0, alpha), grid).status == Convergence::divergent);
  }
}

TEST_CASE("SpaceParams validation and JSON") {
  CHECK_THROWS_WITH_AS(SpaceParams::B(1.0, 1.0, -2.0).validate(), doctest::Contains("alpha must be > 0"),
                       std::invalid_argument);
  CHECK_THROWS_AS(SpaceParams::B(1.0, 0.5, 1.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(SpaceParams::M(-1.0, 1.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(SpaceParams::M(0.0, 0.0).validate(), std::invalid_argument);
  CHECK_NOTHROW(SpaceParams::A(1.0, 0.0).validate());
  SpaceParams t = SpaceParams::B(0.5, 1.0, 1.0);
  t.t = -0.5;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  for (const auto& params : {SpaceParams::B(0.5, 2.0, 1.5), SpaceParams::A_inf(1.0), SpaceParams::M_p(2.0, -0.5, 1.0)}) {
    const nlohmann::json j = params;
    const auto back = j.get<SpaceParams>();
    CHECK(back.label() == params.label());
  }
  CHECK_THROWS_AS(family_from_string("C_pq"), std::invalid_argument);
}
