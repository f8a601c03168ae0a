#include "harmex/gauss.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace harmex {
namespace {

struct JacobiValue {
  double value;
  double derivative;
};

// P_n^{(a,b)}(x) by the three-term recurrence.
double jacobi_p(int n, double a, double b, double x) {
  if (n == 0) return 1.0;
  double pm1 = 1.0;
  double p = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
  for (int k = 2; k <= n; ++k) {
    const double s = 2.0 * k + a + b;
    const double c1 = 2.0 * k * (k + a + b) * (s - 2.0);
    const double c2 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
    const double next = (c2 * p - c3 * pm1) / c1;
    pm1 = p;
    p = next;
  }
  return p;
}

JacobiValue jacobi_with_derivative(int n, double a, double b, double x) {
  const double d = n == 0 ? 0.0 : 0.5 * (n + a + b + 1.0) * jacobi_p(n - 1, a + 1.0, b + 1.0, x);
  return {jacobi_p(n, a, b, x), d};
}

GaussRule build_rule(int npts, double a, double b) {
  if (npts < 1) throw std::domain_error("gauss_jacobi: need at least one node");
  if (!(a > -1.0) || !(b > -1.0)) throw std::domain_error("gauss_jacobi: exponents must exceed -1");

  Eigen::VectorXd diag(npts);
  Eigen::VectorXd sub(std::max(npts - 1, 0));
  for (int i = 0; i < npts; ++i) {
    const double s = 2.0 * i + a + b;
    if (i == 0) {
      diag(i) = (b - a) / (a + b + 2.0);
    } else {
      diag(i) = (b * b - a * a) / (s * (s + 2.0));
    }
  }
  for (int i = 1; i < npts; ++i) {
    const double s = 2.0 * i + a + b;
    double beta2;
    if (i == 1) {
      beta2 = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
    } else {
      beta2 = 4.0 * i * (i + a) * (i + b) * (i + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(i - 1) = std::sqrt(beta2);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);

  GaussRule rule;
  rule.nodes.resize(npts);
  rule.weights.resize(npts);
  // Christoffel numbers in closed form, scaled through log-Gamma.
  const double log_scale = (a + b + 1.0) * std::log(2.0) + std::lgamma(npts + a + 1.0) +
                           std::lgamma(npts + b + 1.0) - std::lgamma(npts + a + b + 1.0) -
                           std::lgamma(npts + 1.0);
  for (int i = 0; i < npts; ++i) {
    double x = solver.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const auto jv = jacobi_with_derivative(npts, a, b, x);
      if (jv.derivative == 0.0) break;
      const double step = jv.value / jv.derivative;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double d = jacobi_with_derivative(npts, a, b, x).derivative;
    rule.nodes[i] = x;
    rule.weights[i] = std::exp(log_scale) / ((1.0 - x * x) * d * d);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_jacobi(int npts, double a, double b) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<GaussRule>> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(npts, a, b);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<GaussRule>(build_rule(npts, a, b))).first;
  }
  return *it->second;
}

}  // namespace harmex
