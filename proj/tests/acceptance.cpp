#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "harmex/cli.hpp"
#include "harmex/extremal.hpp"
#include "harmex/verify.hpp"

using namespace harmex;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

struct CorpusCase {
  TestFunctionSpec spec;
  TheoremParams params;
  std::string label;
};

std::vector<CorpusCase> t3_corpus() {
  std::vector<CorpusCase> out;
  for (int n : {2, 3}) {
    for (double alpha : {0.5, 1.0, 2.0}) {
      TheoremParams tp;
      tp.alpha = alpha;
      out.push_back({TestFunctionSpec::q_kernel(n, alpha - 1.0, 1.0), tp, fmt("n=%g alpha=%g", n, alpha)});
    }
  }
  return out;
}

std::vector<CorpusCase> t5_corpus() {
  std::vector<CorpusCase> out;
  for (int n : {2, 3}) {
    for (double alpha : {0.5, 1.0, 2.0}) {
      if (n == 3 && alpha == 0.5) continue;
      TheoremParams tp;
      tp.alpha = alpha;
      out.push_back({TestFunctionSpec::p_alpha(n, alpha - n + 2.0), tp, fmt("n=%g alpha=%g", n, alpha)});
    }
  }
  return out;
}

std::vector<CorpusCase> tfinal_corpus() {
  std::vector<CorpusCase> out;
  for (const auto& [alpha, beta, order] : std::vector<std::array<double, 3>>{{0.0, 1.0, 1.0}, {0.5, 0.5, 1.0}, {0.0, 2.0, 2.0}}) {
    TheoremParams tp;
    tp.alpha = alpha;
    tp.beta = beta;
    out.push_back({TestFunctionSpec::q_kernel(2, order, 1.0), tp, fmt("alpha=%g beta=%g order=%g", alpha, beta, order)});
  }
  return out;
}

struct Bracket {
  CorpusCase c;
  DistancePair coarse;
  DistancePair fine;
};

std::vector<Bracket> brackets(Theorem theorem, const std::vector<CorpusCase>& corpus) {
  std::vector<Bracket> out;
  DistanceOptions fine;
  fine.grid = RadialGridSpec{}.refined();
  for (const auto& c : corpus) {
    out.push_back({c, distance_report(c.spec, theorem, c.params), distance_report(c.spec, theorem, c.params, fine)});
  }
  return out;
}

void bracket_rule(Outcome& o, const std::vector<Bracket>& runs) {
  for (const auto& b : runs) {
    const auto& d = b.coarse;
    const double ratio = d.ratio();
    const double fine_ratio = b.fine.ratio();
    o.detail += (o.detail.empty() ? "" : " | ") + b.c.label + fmt(" eps*=%.4g ratio=%.4g refined=%.4g", d.epsilon_star, ratio, fine_ratio);
    o.require(!d.rejected, b.c.label + " rejected");
    o.require(d.epsilon_star > 0.0, b.c.label + " eps* not positive");
    o.require(d.s1_upper >= 0.95 * d.epsilon_star, b.c.label + " s1_upper below 0.95 eps*");
    o.require(ratio <= 50.0, b.c.label + " ratio above 50");
    o.require(std::abs(fine_ratio / ratio - 1.0) <= 0.25, b.c.label + " ratio moved more than 25% under refinement");
  }
}

std::vector<Bracket> t3_runs;
std::vector<Bracket> t5_runs;

Outcome criterion1() {
  Outcome o;
  double worst = 0.0;
  for (int n : {2, 3, 4}) {
    for (double alpha : {0.25, 0.5, 1.0, 2.5}) {
      const auto r = check_partition_of_unity(n, alpha, 50, 1e-10);
      worst = std::max(worst, r.max_violation);
      o.require(r.pass, r.params);
    }
  }
  o.detail = fmt("max error %.3g", worst) + (o.detail.empty() ? "" : "; " + o.detail);
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto points = random_points(20, 0.6, 2);
  double worst = 0.0;
  for (int n : {2, 3}) {
    for (double alpha : {0.0, 0.5, 2.0}) {
      const auto f = TestFunctionSpec::random(n, 10, 100 + n, 1.0).expansion();
      const auto r = check_reproducing(f, alpha, points, 1e-8);
      worst = std::max(worst, r.max_violation);
      o.require(r.pass, r.params);
    }
  }
  o.detail = fmt("max error %.3g at 20 points with |x| <= 0.6", worst) + (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome criterion3() {
  Outcome o;
  double worst = 0.0;
  for (int n : {2, 3}) {
    const auto r = check_poisson_closed_form(n, 1000, 0.9, 3, 1e-9);
    worst = std::max(worst, r.max_violation);
    o.require(r.pass, r.params);
  }
  o.detail = fmt("max relative error %.3g", worst) + (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome criterion4() {
  Outcome o;
  const RadialGrid grid;
  std::vector<HarmonicFunction> corpus;
  for (int i = 0; i < 50; ++i) {
    corpus.push_back(TestFunctionSpec::random(2 + i % 3, 4 + 2 * (i % 5), 500 + i, 0.4 + 0.2 * (i % 4)).function());
  }
  const HarmonicFunction one(ZonalExpansion(3, {1.0}));
  double worst = -INFINITY;
  double equality = 0.0;
  int checks = 0;
  for (double p : {0.5, 1.0, 2.0}) {
    for (double q : {1.0, 2.0}) {
      for (double alpha : {0.5, 1.0, 2.0}) {
        for (const auto& f : corpus) {
          const auto r = check_embedding(f, p, q, alpha, grid);
          ++checks;
          worst = std::max(worst, r.max_violation);
          o.require(r.max_violation <= 1e-10, "violation " + r.params);
        }
        const auto r = check_embedding(one, p, q, alpha, grid);
        equality = std::max(equality, std::abs(r.max_violation));
        o.require(std::abs(r.max_violation) <= 1e-10, "f = 1 not equal " + r.params);
      }
    }
  }
  o.detail = fmt("%g checks, largest lhs - rhs %.3g, |lhs - rhs| for f = 1 %.3g", checks, worst, equality) +
             (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome criterion5() {
  Outcome o;
  const std::vector<IncreasingFunction> family{IncreasingFunction::constant(1.0), IncreasingFunction::identity(),
                                               IncreasingFunction::step(0.5), IncreasingFunction::blow_up(0.25),
                                               IncreasingFunction::zero()};
  double drift = 0.0;
  for (const auto& [beta, s, gamma, p] : std::vector<std::array<double, 4>>{
           {0.5, 0.0, 2.0, 0.5}, {0.0, 1.0, 1.0, 1.0}, {1.0, 0.5, 1.5, 0.5}, {0.5, 1.0, 2.0, 1.0}, {0.0, 0.0, 1.5, 0.5}}) {
    const auto r = check_lemma2(family, beta, s, gamma, p, 0.2);
    drift = std::max(drift, r.max_violation);
    o.require(r.pass && std::isfinite(r.fitted_C), "lemma2 " + r.params);
  }
  for (double beta : {0.5, 1.0, 3.0}) {
    const auto r = check_lemma3(family, beta, 0.2);
    drift = std::max(drift, r.extra.at("stability"));
    o.require(r.pass, "lemma3 " + r.params);
  }
  o.detail = fmt("largest refinement drift %.3g", drift) + (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome criterion6() {
  Outcome o;
  double drift = 0.0;
  std::string constants;
  for (int n : {2, 3}) {
    for (double alpha : {0.5, 1.0, 1.5}) {
      for (const auto& [part, param] : std::vector<std::pair<int, double>>{{1, alpha}, {2, alpha}, {3, n - 1.0 + alpha}}) {
        const auto r = check_lemma1(part, param, n, 0.2);
        drift = std::max(drift, r.max_violation);
        if (part == 1) constants += fmt(" %g", r.fitted_C);
        o.require(r.pass && std::isfinite(r.fitted_C), r.check + " " + r.params);
      }
    }
  }
  o.detail = fmt("largest refinement drift %.3g; part 1 constants", drift) + constants + (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(77);
  auto u = [&] { return (rng() >> 11) * 0x1.0p-53; };
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    const double alpha = 0.25 + 2.0 * u();
    const auto f = TestFunctionSpec::random(n, 6 + trial % 10, 9000 + trial, 0.3 + u()).expansion();
    IntervalSet L;
    for (int k = 0; k < 1 + trial % 3; ++k) {
      const double a = u();
      L.add(a, a + (1.0 - a) * u());
    }
    const auto split = split_decomposition(f, alpha, L);
    for (int k = 0; k <= f.degree(); ++k) {
      worst = std::max(worst, std::abs(split.f1.coeffs()[k] + split.f2.coefficient(k) - f.coeffs()[k]));
    }
  }
  o.require(worst <= 1e-12, "split not exact");
  const IntervalSet half{{0.0, 0.5}};
  const double w0 = split_multipliers(2, 1.0, half, 0)[0];
  const double brute =
      bruteforce_oracle_n2(TestFunctionSpec::polynomial(2, {1.0}), BruteForceQuery::kernel_integral(1.0, half, 0.0, 0.0));
  o.require(std::abs(w0 - 7.0 / 16.0) <= 1e-8 && std::abs(brute - 7.0 / 16.0) <= 1e-8, "w0 != 7/16");
  o.detail = fmt("max |f1 + f2 - f| %.3g; w0 %.12g, brute force %.12g", worst, w0, brute) + (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome criterion8() {
  Outcome o;
  t3_runs = brackets(Theorem::T3, t3_corpus());
  bracket_rule(o, t3_runs);
  return o;
}

Outcome criterion9() {
  Outcome o;
  t5_runs = brackets(Theorem::T5, t5_corpus());
  bracket_rule(o, t5_runs);
  for (const auto& b : t5_runs) {
    double worst = 0.0;
    for (const auto& row : b.coarse.rows) {
      if (!row.admissible || !std::isfinite(row.majorant) || row.f2_norm <= 0.0) continue;
      const double factor = row.majorant / row.f2_norm;
      worst = std::max(worst, std::max(factor, 1.0 / factor));
    }
    o.detail += " | " + b.c.label + fmt(" majorant/direct up to %.3g", worst);
    o.require(worst > 0.0 && worst <= 2.0, b.c.label + fmt(" majorant off by %.3g", worst));
  }
  return o;
}

Outcome criterion10() {
  Outcome o;
  const RadialGrid grid;
  const std::vector<double> above{1.1, 1.5, 2.0};
  const std::vector<double> below{0.45, 0.25};
  int checks = 0;
  int agree = 0;
  int compared = 0;
  for (double p : {0.5, 1.0}) {
    for (const auto& b : t3_runs) {
      const auto f = b.c.spec.function();
      const double alpha = b.c.params.alpha;
      const double t = b.c.params.kernel_order(Theorem::T4);
      const double eps_star = b.coarse.epsilon_star;
      const auto profile = weighted_mean_profile(f, 1.0, alpha, grid);
      for (double m : above) {
        ++checks;
        const auto d = finiteness_diagnostic_T4(profile, alpha, t, p, m * eps_star, grid);
        o.require(d.status == Convergence::converged, "T4 " + b.c.label + fmt(" p=%g diverges at %g eps*", p, m));
      }
      for (double m : below) {
        ++checks;
        const auto d = finiteness_diagnostic_T4(profile, alpha, t, p, m * eps_star, grid);
        o.require(d.status == Convergence::divergent, "T4 " + b.c.label + fmt(" p=%g converges at %g eps*", p, m));
      }
      if (p == 1.0) {
        for (double m : {0.25, 0.45, 1.1, 1.5, 2.0}) {
          const double eps = m * eps_star;
          const bool t4 = finiteness_diagnostic_T4(profile, alpha, t, 1.0, eps, grid).status == Convergence::converged;
          const bool t3 = tail_criterion(level_set(profile, eps), grid);
          ++compared;
          if (t4 == t3) ++agree;
          o.require(t4 == t3, "T4/T3 disagree " + b.c.label + fmt(" at %g eps*", m));
        }
      }
    }
    for (const auto& b : t5_runs) {
      const auto f = b.c.spec.function();
      const double alpha = b.c.params.alpha;
      const double eps_star = b.coarse.epsilon_star;
      const auto profile = weighted_mean_profile(f, INFINITY, alpha, grid);
      for (double m : above) {
        ++checks;
        const auto d = finiteness_diagnostic_T6(profile, alpha, p, m * eps_star, grid);
        o.require(d.status == Convergence::converged, "T6 " + b.c.label + fmt(" p=%g diverges at %g eps*", p, m));
      }
      for (double m : below) {
        ++checks;
        const auto d = finiteness_diagnostic_T6(profile, alpha, p, m * eps_star, grid);
        o.require(d.status == Convergence::divergent, "T6 " + b.c.label + fmt(" p=%g converges at %g eps*", p, m));
      }
    }
  }
  o.detail = fmt("%g diagnostics, T4/T3 agreement at p = 1: %g of %g", checks, agree, compared) +
             (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome criterion11() {
  Outcome o;
  bracket_rule(o, brackets(Theorem::Tfinal, tfinal_corpus()));
  return o;
}

Outcome criterion12() {
  Outcome o;
  const std::vector<TestFunctionSpec> polys{TestFunctionSpec::polynomial(2, {1.0, 0.5, -0.25}),
                                            TestFunctionSpec::polynomial(3, {0.0, 1.0, 0.0, 0.3}),
                                            TestFunctionSpec::polynomial(4, {2.0, 0.0, -1.0})};
  TheoremParams tp;
  tp.alpha = 1.0;
  tp.p = 1.0;
  tp.beta = 1.0;
  double worst = 0.0;
  int runs = 0;
  for (const auto& spec : polys) {
    for (Theorem th : {Theorem::T3, Theorem::T4, Theorem::T5, Theorem::T6, Theorem::Tfinal}) {
      const auto d = distance_report(spec, th, tp);
      ++runs;
      worst = std::max(worst, d.s1_upper);
      o.require(!d.rejected && d.epsilon_star == 0.0 && d.s1_upper < 1e-6, spec.label() + " " + to_string(th));
    }
  }
  o.detail = fmt("%g reports, largest s1_upper %.3g", runs, worst) + (o.pass ? "" : "; " + o.detail);
  return o;
}

Outcome criterion13() {
  Outcome o;
  auto config = ExperimentConfig::defaults();
  config.theorems = {Theorem::T3, Theorem::T5};
  std::ostringstream first, second, serial, err;
  cmd_distance(config, first, err);
  cmd_distance(config, second, err);
  ::setenv("HARMEX_THREADS", "1", 1);
  cmd_distance(config, serial, err);
  ::unsetenv("HARMEX_THREADS");
  o.require(!first.str().empty(), "no output");
  o.require(first.str() == second.str(), "second run differs");
  o.require(first.str() == serial.str(), "HARMEX_THREADS=1 run differs");
  o.detail = fmt("%g bytes, identical across 2 runs and HARMEX_THREADS=1", static_cast<double>(first.str().size())) +
             (o.pass ? "" : "; " + o.detail);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Outcome()> run;
    double budget = INFINITY;  // seconds
  };
  const std::vector<Criterion> criteria{
      {"partition of unity", criterion1, 1.0},
      {"reproducing formula, quadrature route", criterion2, 30.0},
      {"closed-form Poisson", criterion3},
      {"embedding inequality", criterion4},
      {"increasing-function estimates", criterion5},
      {"kernel estimates", criterion6},
      {"exact splitting", criterion7},
      {"T3 bracket", criterion8, 300.0},
      {"T5 bracket", criterion9},
      {"T4/T6 diagnostics", criterion10},
      {"Tfinal bracket", criterion11},
      {"polynomials", criterion12},
      {"determinism", criterion13}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(seconds <= criteria[i].budget, fmt("over the %g s budget", criteria[i].budget));
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %-40s %s  (%.1f s)  %s\n", i + 1, criteria[i].name.c_str(), o.pass ? "PASS" : "FAIL",
                seconds, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
