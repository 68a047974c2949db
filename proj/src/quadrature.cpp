#include "ginedge/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "ginedge/errors.hpp"

namespace ginedge::quadrature {

namespace {

// P_m(x) and P_m'(x) by the three-term recurrence.
std::pair<double, double> legendre(int m, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (m == 0) return {1.0, 0.0};
  for (int j = 2; j <= m; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  const double dp = m * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

QuadratureRule compute_rule(int m) {
  QuadratureRule rule;
  rule.nodes.assign(m, 0.0);
  rule.weights.assign(m, 0.0);
  const double dm = m;
  for (int k = 0; k < (m + 1) / 2; ++k) {
    // Tricomi's asymptotic guess for the k-th largest root.
    const double theta = std::numbers::pi * (4.0 * k + 3.0) / (4.0 * dm + 2.0);
    double x = std::cos(theta) * (1.0 - (dm - 1.0) / (8.0 * dm * dm * dm));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto [p, d] = legendre(m, x);
      const double dx = p / d;
      x -= dx;
      dp = d;
      if (std::abs(dx) < 1e-16) break;
    }
    dp = legendre(m, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[m - 1 - k] = x;
    rule.nodes[k] = -x;
    rule.weights[k] = rule.weights[m - 1 - k] = w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  return rule;
}

}  // namespace

QuadratureRule gauss_legendre(int m) {
  if (m < 1 || m > kMaxPoints)
    throw ParameterError("gauss_legendre: m must lie in [1, 2048], got " + std::to_string(m));
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const QuadratureRule>> cache;
  std::shared_ptr<const QuadratureRule> rule;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find(m);
    if (it != cache.end()) rule = it->second;
  }
  if (!rule) {
    auto fresh = std::make_shared<const QuadratureRule>(compute_rule(m));
    std::lock_guard lock(mutex);
    rule = cache.emplace(m, std::move(fresh)).first->second;
  }
  return *rule;
}

QuadratureRule affine_map(const QuadratureRule& rule, double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw ParameterError("affine_map: need finite a < b");
  const double scale = (b - a) / (rule.b - rule.a);
  QuadratureRule out;
  out.a = a;
  out.b = b;
  out.nodes.resize(rule.nodes.size());
  out.weights.resize(rule.weights.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    out.nodes[i] = a + (rule.nodes[i] - rule.a) * scale;
    out.weights[i] = rule.weights[i] * scale;
  }
  return out;
}

QuadratureRule gauss_legendre(int m, double a, double b) {
  return affine_map(gauss_legendre(m), a, b);
}

Refined refine_until(const std::function<double(const QuadratureRule&)>& evaluate, int m0,
                     double tol) {
  if (m0 < 1 || m0 > kMaxPoints) throw ParameterError("refine_until: m0 out of range");
  if (std::isnan(tol) || tol < 0.0) throw ParameterError("refine_until: tol must be nonnegative");
  int m = m0;
  double previous = evaluate(gauss_legendre(m));
  double last = previous;
  while (2 * m <= kMaxPoints) {
    m *= 2;
    last = evaluate(gauss_legendre(m));
    // tol = 0 asks for exact agreement, which is never accepted.
    if (tol > 0.0 && std::abs(last - previous) <= tol) return {last, m};
    if (2 * m <= kMaxPoints) previous = last;
  }
  throw ConvergenceError("refine_until: no convergence by m = " + std::to_string(m), previous,
                         last);
}

}  // namespace ginedge::quadrature
