#include "doctest.h"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "harmex/verify.hpp"

using namespace harmex;
using doctest::Approx;

namespace {

std::vector<IncreasingFunction> family() {
  return {IncreasingFunction::constant(1.0), IncreasingFunction::identity(), IncreasingFunction::step(0.5),
          IncreasingFunction::blow_up(0.25), IncreasingFunction::zero()};
}

}  // namespace

TEST_CASE("partition of unity") {
  for (int n : {2, 3, 4}) {
    for (double alpha : {0.25, 0.5, 1.0, 2.5}) {
      const auto report = check_partition_of_unity(n, alpha, 50);
      CHECK(report.pass);
      CHECK(report.max_violation < 1e-10);
    }
  }
}

TEST_CASE("Poisson closed form") {
  for (int n : {2, 3}) {
    const auto report = check_poisson_closed_form(n, 1000, 0.9, 5);
    CHECK(report.pass);
    CHECK(report.max_violation < 1e-9);
  }
}

TEST_CASE("reproducing formula") {
  // f = 1 at x = 0 reduces to the k = 0 identity.
  const std::vector<SamplePoint> origin{{Radius::from_value(0.0), Angle::from_theta(0.0)}};
  for (double alpha : {0.0, 1.5}) {
    CHECK(check_reproducing(ZonalExpansion(3, {1.0}), alpha, origin).max_violation < 1e-10);
  }
  // A single mode r^k Z_k.
  const auto points = random_points(20, 0.6, 17);
  const auto mode = check_reproducing(ZonalExpansion(2, {0.0, 0.0, 0.0, 1.0}), 1.0, points);
  CHECK(mode.max_violation < 1e-9);
  for (int n : {2, 3}) {
    for (double alpha : {0.0, 0.5, 2.0}) {
      const auto f = TestFunctionSpec::random(n, 10, 5 + n, 1.0).expansion();
      const auto report = check_reproducing(f, alpha, points);
      CHECK(report.pass);
      CHECK(report.max_violation < 1e-8);
      CHECK(report.extra.at("coefficient_route") < 1e-12);
    }
  }
  CHECK_THROWS_AS(check_reproducing(ZonalExpansion(2, {1.0}), -0.5, origin), std::invalid_argument);
}

TEST_CASE("kernel estimates") {
  // Part 3 at r = 0: every point of the sphere is at distance 1.
  for (int n : {2, 3}) CHECK(lemma1_constant(3, n, n, 0, 4) == Approx(1.0).epsilon(1e-12));
  // Part 2 with beta = 0 in the disc: Q_0(0, y) = 2.
  CHECK(lemma1_constant(2, 0.0, 2, 0, 4) == Approx(2.0).epsilon(1e-12));
  CHECK(lemma1_constant(2, 0.0, 2, 20, 4) >= 2.0 - 1e-12);
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto report = check_lemma1(1, alpha, 3);
    CHECK(report.pass);
    CHECK(std::isfinite(report.fitted_C));
  }
  CHECK(check_lemma1(2, -0.5, 2).pass);
  CHECK(check_lemma1(3, 2.5, 3).pass);
  CHECK_THROWS_AS(check_lemma1(1, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(check_lemma1(2, -1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(check_lemma1(3, 1.5, 3), std::invalid_argument);
  CHECK_THROWS_AS(check_lemma1(4, 1.0, 2), std::invalid_argument);
}

TEST_CASE("increasing-function estimates") {
  const auto zero = lemma2_sides(IncreasingFunction::zero(), 0.5, 0.0, 2.0, 0.5);
  CHECK(zero.first == 0.0);
  CHECK(zero.second == 0.0);
  // p = 1 is Fubini: both sides are the same double integral.
  for (double gamma : {1.0, 2.0}) {
    const auto [lhs, rhs] = lemma2_sides(IncreasingFunction::constant(1.0), 0.5, 1.0, gamma, 1.0);
    CHECK(lhs == Approx(rhs).epsilon(1e-9));
  }
  const auto fam = family();
  CHECK(check_lemma2(fam, 0.5, 0.0, 2.0, 0.5).pass);
  CHECK(check_lemma2(fam, 0.0, 1.0, 1.0, 1.0).fitted_C == Approx(1.0).epsilon(1e-9));
  IncreasingFunction falling{"1-r", [](double u) { return u; }, 0.0, {}};
  CHECK_THROWS_AS(lemma2_sides(falling, 0.5, 0.0, 2.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lemma2_sides(IncreasingFunction::constant(1.0), 0.5, 0.0, 2.0, 1.5), std::invalid_argument);

  for (double beta : {0.5, 1.0, 3.0}) {
    const auto one = lemma3_sides(IncreasingFunction::constant(1.0), beta);
    CHECK(one.first == Approx(1.0).epsilon(1e-12));
    CHECK(one.second == Approx(1.0).epsilon(1e-10));
    // sup r (1-r)^beta sits at r = 1/(1+beta); beta B(2, beta) = 1/(1+beta).
    const double r = 1.0 / (1.0 + beta);
    const auto lin = lemma3_sides(IncreasingFunction::identity(), beta);
    CHECK(lin.first == Approx(r * std::pow(1.0 - r, beta)).epsilon(1e-10));
    CHECK(lin.second == Approx(1.0 / (1.0 + beta)).epsilon(1e-10));
    const auto step = lemma3_sides(IncreasingFunction::step(0.7), beta);
    CHECK(step.second == Approx(std::pow(0.3, beta)).epsilon(1e-10));
    CHECK(step.first <= step.second * (1.0 + 1e-12));
    CHECK(check_lemma3(family(), beta).pass);
  }
  CHECK_THROWS_AS(lemma3_sides(IncreasingFunction::identity(), 0.0), std::invalid_argument);
}

TEST_CASE("embedding check") {
  const RadialGrid grid(RadialGridSpec{24, 4, 4, 5});
  const HarmonicFunction one(ZonalExpansion(2, {1.0}));
  for (double p : {0.5, 1.0, 2.0}) {
    const auto report = check_embedding(one, p, 1.0, 1.0, grid);
    CHECK(report.pass);
    CHECK(std::abs(report.max_violation) < 1e-10);
  }
  const auto f = TestFunctionSpec::random(3, 8, 21, 1.0).function();
  CHECK(check_embedding(f, 0.5, 2.0, 0.5, grid).pass);
}

TEST_CASE("brute-force oracle in the disc") {
  const auto one = TestFunctionSpec::polynomial(2, {1.0});
  for (double alpha : {0.0, 0.5, 2.0}) {
    // ||1||_{A^1_alpha} = B(2, alpha + 1)
    const double want = std::tgamma(alpha + 1.0) / std::tgamma(alpha + 3.0);
    CHECK(bruteforce_oracle_n2(one, BruteForceQuery::ball_norm(1.0, alpha)) == Approx(want).epsilon(1e-6));
  }
  CHECK(bruteforce_oracle_n2(TestFunctionSpec::poisson(2), BruteForceQuery::mean(1.0, 0.7)) ==
        Approx(1.0).epsilon(1e-6));
  CHECK(bruteforce_oracle_n2(one, BruteForceQuery::kernel_integral(1.0, IntervalSet{{0.0, 0.5}}, 0.0, 0.0)) ==
        Approx(7.0 / 16.0).epsilon(1e-8));
  CHECK(bruteforce_oracle_n2(one, BruteForceQuery::ball_average(0.0, 0.8)) == Approx(0.32).epsilon(1e-8));
  CHECK_THROWS_AS(bruteforce_oracle_n2(one, BruteForceQuery::mean(1.0, 0.5), 8), std::invalid_argument);
  CHECK_THROWS_AS(bruteforce_oracle_n2(TestFunctionSpec::polynomial(3, {1.0}), BruteForceQuery::mean(1.0, 0.5)),
                  std::invalid_argument);
}

TEST_CASE("report formats") {
  const auto report = check_partition_of_unity(2, 1.0, 4);
  CHECK(csv_header() == "check,params,max_violation,fitted_C,pass");
  const std::string row = csv_row(report);
  CHECK(row.rfind("partition_of_unity,n=2;alpha=1;K=4,", 0) == 0);
  CHECK(row.substr(row.size() - 9) == ",nan,true");
  const nlohmann::json j = report;
  CHECK(j.at("pass") == true);
  CHECK(j.at("fitted_C") == "nan");
}
