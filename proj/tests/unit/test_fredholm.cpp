#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "ginedge/errors.hpp"
#include "ginedge/fredholm.hpp"
#include "ginedge/kernels.hpp"

using namespace ginedge;
using namespace ginedge::fredholm;
using kernels::KernelKind;
using kernels::KernelSpec;

namespace {

// log det(1 - a T_t) from a test-local discretization: a plain Gauss-Legendre rule on (0, U)
// with a different node count, the matrix filled from t_kernel, and a full-pivot LU.
double logdet_t_oracle(double t, double a, int nodes) {
  const double U = std::max(10.0, 10.0 - t);
  const auto rule = quadrature::gauss_legendre(nodes, 0.0, U);
  Eigen::MatrixXd m(nodes, nodes);
  for (int i = 0; i < nodes; ++i)
    for (int j = 0; j < nodes; ++j)
      m(i, j) = (i == j) - a * std::sqrt(rule.weights[i] * rule.weights[j]) *
                               kernels::t_kernel(rule.nodes[i] + t, rule.nodes[j] + t);
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  double log = 0.0;
  for (int i = 0; i < nodes; ++i) log += std::log(std::abs(lu.matrixLU()(i, i)));
  return log;
}

}  // namespace

TEST_CASE("truncation bound and node count") {
  CHECK(truncation_bound(0) == 10.0);
  CHECK(truncation_bound(-15) == 25.0);
  CHECK(truncation_bound(5) == 10.0);
  CHECK(node_count(0, 50) == 50);
  CHECK(node_count(-10, 50) == 100);
  CHECK(node_count(-12, 50) == 110);
  const auto rule = half_line_rule(-5, 50);
  CHECK(rule.a == 0.0);
  CHECK(rule.b == 15.0);
  CHECK(rule.size() == 75);
}

TEST_CASE("build") {
  const auto id = NystromSystem::build({KernelKind::S_SHIFTED, 0.0}, 0.0);
  CHECK(id.logabsdet() == 0.0);
  CHECK(id.sign() == 1);
  CHECK(id.size() == 50);
  const auto& m = id.matrix();
  CHECK((m - Eigen::MatrixXd::Identity(50, 50)).norm() == 0.0);

  const auto s = NystromSystem::build({KernelKind::S_SHIFTED, -3.0}, 0.8);
  CHECK((s.matrix() - s.matrix().transpose()).norm() == 0.0);
  CHECK(s.sign() == 1);

  CHECK_THROWS_AS(NystromSystem::build({KernelKind::S_SHIFTED, 0.0}, 1.1), ParameterError);
  CHECK_THROWS_AS(NystromSystem::build({KernelKind::S_SHIFTED, 0.0}, 0.5, 1), ParameterError);
  CHECK_NOTHROW(NystromSystem::build({KernelKind::S_SHIFTED, 0.0}, 1.0 + 1e-13));
}

TEST_CASE("self-convergence under node doubling") {
  const auto a = NystromSystem::build({KernelKind::S_SHIFTED, 0.0}, 1.0, 50);
  const auto b = NystromSystem::build({KernelKind::S_SHIFTED, 0.0}, 1.0, 100);
  CHECK(std::abs(a.logabsdet() - b.logabsdet()) <= 1e-10);
  for (double t : {-12.0, -8.0, -4.0, -1.0, 0.0, 3.0})
    for (double gb : {0.3, 0.75, 1.0}) {
      const auto p = det_pair(t, gb, 50);
      const auto q = det_pair(t, gb, 100);
      CAPTURE(t);
      CAPTURE(gb);
      CHECK(std::abs(p.minus - q.minus) <= 1e-9);
      CHECK(std::abs(p.plus - q.plus) <= 1e-9);
      CHECK(std::abs(logdet_t(t, gb, 50) - logdet_t(t, gb, 100)) <= 1e-9);
    }
}

TEST_CASE("det_pair trivial limits") {
  const auto zero = det_pair(-3.0, 0.0);
  CHECK(zero.minus == 0.0);
  CHECK(zero.plus == 0.0);
  const auto far = det_pair(20.0, 1.0);
  CHECK(std::abs(far.minus) <= 1e-12);
  CHECK(std::abs(far.plus) <= 1e-12);
  CHECK_THROWS_AS(det_pair(0.0, 1.5), DomainError);
  CHECK_THROWS_AS(det_pair(0.0, -0.1), DomainError);
}

TEST_CASE("S-determinant product equals the T-determinant") {
  // At t = 0, gamma = 1 against the NystromSystem route and the test-local build.
  const auto pair = det_pair(0.0, 1.0);
  const auto tsys = NystromSystem::build({KernelKind::T_SHIFTED, 0.0}, 1.0);
  CHECK(std::abs(pair.minus + pair.plus - tsys.logabsdet()) <= 1e-10);
  CHECK(std::abs(pair.minus + pair.plus - logdet_t_oracle(0.0, 1.0, 80)) <= 1e-10);
  // Frozen value of log det(1 - T_0); det(1 - S_0) = P(0;1) = 0.74149264171 alongside.
  CHECK(std::abs(logdet_t_oracle(0.0, 1.0, 80) + 0.0828261710255677) <= 1e-12);
  CHECK(std::abs(pair.minus - std::log(0.7414926417097719)) <= 1e-12);
  for (double t : {-8.0, -4.0, 0.0, 2.0})
    for (double gamma : {0.2, 0.6, 1.0}) {
      const double gb = gamma * (2.0 - gamma);
      const auto p = det_pair(t, gb);
      CAPTURE(t);
      CAPTURE(gamma);
      CHECK(std::abs(p.minus + p.plus - logdet_t_oracle(t, gb, node_count(t, 50) + 17)) <= 1e-10);
    }
}

TEST_CASE("resolvent") {
  const auto zero = NystromSystem::build({KernelKind::S_SHIFTED, -1.0}, 0.0);
  const auto f = [](double x) { return std::cos(x) + x; };
  const auto u0 = zero.resolvent_apply(f);
  for (int i = 0; i < zero.size(); ++i) CHECK(u0[i] == doctest::Approx(f(zero.rule().nodes[i])).epsilon(1e-15));

  const auto sys = NystromSystem::build({KernelKind::S_SHIFTED, -1.0}, 0.3);
  const auto uz = sys.resolvent_apply([](double) { return 0.0; });
  for (double v : uz) CHECK(v == 0.0);

  // Neumann series sum_k (zK)^k f with K applied in the weighted node basis.
  const auto& rule = sys.rule();
  const int n = sys.size();
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) K(i, j) = kernels::s_shifted(-1.0, rule.nodes[i], rule.nodes[j]) * rule.weights[j];
  Eigen::VectorXd fv(n);
  for (int i = 0; i < n; ++i) fv(i) = f(rule.nodes[i]);
  Eigen::VectorXd term = fv, sum = fv;
  for (int k = 1; k < 200; ++k) {
    term = 0.3 * (K * term);
    sum += term;
  }
  const auto u = sys.resolvent_apply(f);
  for (int i = 0; i < n; ++i) CHECK(std::abs(u[i] - sum(i)) <= 1e-12 * (1.0 + std::abs(sum(i))));
  // The Nystrom extension reproduces the node values.
  for (int i = 0; i < n; i += 7) CHECK(std::abs(sys.extend(u, f, rule.nodes[i]) - u[i]) <= 1e-12);
}

TEST_CASE("t-derivatives of the log-determinants") {
  const auto zero = logdet_dt(0.5, 0.0);
  CHECK(zero.minus == 0.0);
  CHECK(zero.plus == 0.0);
  const auto far = logdet_dt(20.0, 1.0);
  CHECK(std::abs(far.minus) <= 1e-12);
  CHECK(std::abs(far.plus) <= 1e-12);
  const double h = 1e-4;
  for (double t : {-8.0, -3.0, -1.0, 0.0, 1.5})
    for (double gb : {0.36, 0.84, 1.0}) {
      const auto d = logdet_dt(t, gb);
      const auto hi = det_pair(t + h, gb), lo = det_pair(t - h, gb);
      const auto hi2 = det_pair(t + h / 2, gb), lo2 = det_pair(t - h / 2, gb);
      const double fd_m = (4 * (hi2.minus - lo2.minus) / h - (hi.minus - lo.minus) / (2 * h)) / 3;
      const double fd_p = (4 * (hi2.plus - lo2.plus) / h - (hi.plus - lo.plus) / (2 * h)) / 3;
      CAPTURE(t);
      CAPTURE(gb);
      CHECK(std::abs(d.minus - fd_m) <= 1e-7);
      CHECK(std::abs(d.plus - fd_p) <= 1e-7);
      const auto both = det_pair_with_dt(t, gb);
      const auto lu = det_pair(t, gb);
      CHECK(std::abs(both.value.minus - lu.minus) <= 1e-11);
      CHECK(std::abs(both.value.plus - lu.plus) <= 1e-11);
      const double fd_t = (logdet_t(t + h, gb) - logdet_t(t - h, gb)) / (2 * h);
      CHECK(std::abs(logdet_t_dt(t, gb) - fd_t) <= 1e-6);
      CHECK(std::abs(logdet_t_dt(t, gb) - (d.minus + d.plus)) <= 1e-9);
    }
}

TEST_CASE("spectrum of the weighted S_t matrix") {
  for (double t : {-10.0, -4.0, 0.0, 3.0}) {
    const KernelSpectrum spec(t);
    CHECK(spec.max_abs() <= 1.0 + 1e-10);
    for (double gb : {0.25, 0.81}) {
      const auto p = det_pair(t, gb);
      CHECK(std::abs(spec.logdet(std::sqrt(gb)) - p.minus) <= 1e-10);
      CHECK(std::abs(spec.logdet(-std::sqrt(gb)) - p.plus) <= 1e-10);
    }
  }
}
