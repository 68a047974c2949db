#include "ginedge/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ginedge/errors.hpp"

namespace ginedge::fredholm {

namespace {

constexpr double kCouplingSlack = 1e-12;

void check_gamma_bar(double gamma_bar) {
  if (!(gamma_bar >= 0.0 && gamma_bar <= 1.0))
    throw DomainError("gamma_bar must lie in [0, 1]");
}

void check_quad_points(int quad_points) {
  if (quad_points < 2) throw ParameterError("quad_points must be at least 2");
}

Eigen::VectorXd root_weights(const quadrature::QuadratureRule& rule) {
  Eigen::VectorXd s(rule.size());
  for (int i = 0; i < rule.size(); ++i) s[i] = std::sqrt(rule.weights[i]);
  return s;
}

struct CholeskyResult {
  double logdet;
  double dt;
};

// log det(1 - zW) and its t-derivative for the S_t matrix W.
CholeskyResult cholesky_logdet(const Eigen::MatrixXd& w, const Eigen::VectorXd& diag_d, double z,
                               const char* which) {
  const int m = static_cast<int>(w.rows());
  Eigen::MatrixXd a = -z * w;
  a.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw PositivityError(std::string("det(1 ") + which +
                          " sqrt(gbar) S_t) is not positive; increase quad_points");
  Eigen::MatrixXd l = llt.matrixL();
  double logdet = 0.0;
  for (int i = 0; i < m; ++i) logdet += 2.0 * std::log(l(i, i));

  double dt = 0.0;
  if (z != 0.0) {
    Eigen::MatrixXd inv_l = Eigen::MatrixXd::Identity(m, m);
    l.triangularView<Eigen::Lower>().solveInPlace(inv_l);
    const Eigen::VectorXd inv_diag = inv_l.colwise().squaredNorm().transpose();
    for (int i = 0; i < m; ++i) dt += 2.0 * diag_d[i] * (inv_diag[i] - 1.0);
  }
  return {logdet, dt};
}

}  // namespace

double truncation_bound(double t) { return std::max(10.0, 10.0 - t); }

int node_count(double t, int quad_points) {
  check_quad_points(quad_points);
  if (!std::isfinite(t)) throw DomainError("t must be finite");
  const double n = std::ceil(quad_points * truncation_bound(t) / 10.0 - 1e-9);
  if (n > quadrature::kMaxPoints)
    throw NumericalError("t = " + std::to_string(t) + " needs more than 2048 Nystrom nodes");
  return static_cast<int>(n);
}

quadrature::QuadratureRule half_line_rule(double t, int quad_points) {
  return quadrature::gauss_legendre(node_count(t, quad_points), 0.0, truncation_bound(t));
}

Eigen::MatrixXd weighted_matrix(const kernels::KernelSpec& kernel,
                                const quadrature::QuadratureRule& rule) {
  const int m = rule.size();
  const Eigen::VectorXd s = root_weights(rule);
  Eigen::MatrixXd w(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = j; i < m; ++i) {
      const double v = s[i] * kernel(rule.nodes[i], rule.nodes[j]) * s[j];
      w(i, j) = v;
      w(j, i) = v;
    }
  return w;
}

NystromSystem NystromSystem::build(const kernels::KernelSpec& kernel, double z, int quad_points) {
  check_quad_points(quad_points);
  return build(kernel, z, half_line_rule(kernel.t, quad_points));
}

NystromSystem NystromSystem::build(const kernels::KernelSpec& kernel, double z,
                                   quadrature::QuadratureRule rule) {
  if (!std::isfinite(kernel.t)) throw DomainError("t must be finite");
  if (!(std::abs(z) <= 1.0 + kCouplingSlack)) throw ParameterError("|z| must not exceed 1");
  if (rule.size() < 2) throw ParameterError("Nystrom system needs at least 2 nodes");

  NystromSystem sys;
  sys.rule_ = std::move(rule);
  sys.kernel_ = kernel;
  sys.z_ = z;
  sys.sqrt_w_ = root_weights(sys.rule_);
  sys.matrix_ = -z * weighted_matrix(kernel, sys.rule_);
  sys.matrix_.diagonal().array() += 1.0;
  sys.lu_.compute(sys.matrix_);

  const Eigen::MatrixXd& lu = sys.lu_.matrixLU();
  int sign = sys.lu_.permutationP().determinant();
  double logabs = 0.0;
  for (int i = 0; i < sys.size(); ++i) {
    const double pivot = lu(i, i);
    if (pivot == 0.0 || !std::isfinite(pivot))
      throw SingularityError("1 - zK is singular in the discretization");
    if (pivot < 0.0) sign = -sign;
    logabs += std::log(std::abs(pivot));
  }
  sys.sign_ = sign;
  sys.logabsdet_ = logabs;
  return sys;
}

Eigen::VectorXd NystromSystem::solve(const Eigen::VectorXd& rhs) const { return lu_.solve(rhs); }

std::vector<double> NystromSystem::resolvent_apply(const std::function<double(double)>& f) const {
  const int m = size();
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) rhs[i] = sqrt_w_[i] * f(rule_.nodes[i]);
  const Eigen::VectorXd y = solve(rhs);
  std::vector<double> u(m);
  for (int i = 0; i < m; ++i) u[i] = y[i] / sqrt_w_[i];
  return u;
}

double NystromSystem::extend(const std::vector<double>& u, const std::function<double(double)>& f,
                             double x) const {
  double sum = 0.0;
  for (int j = 0; j < size(); ++j) sum += rule_.weights[j] * kernel_(x, rule_.nodes[j]) * u[j];
  return f(x) + z_ * sum;
}

LogDetPair det_pair(double t, double gamma_bar, int quad_points) {
  check_gamma_bar(gamma_bar);
  if (gamma_bar == 0.0) return {0.0, 0.0};
  const double a = std::sqrt(gamma_bar);
  const kernels::KernelSpec spec{kernels::KernelKind::S_SHIFTED, t};
  const auto rule = half_line_rule(t, quad_points);
  const auto minus = NystromSystem::build(spec, a, rule);
  const auto plus = NystromSystem::build(spec, -a, rule);
  if (minus.sign() <= 0) throw PositivityError("det(1 - sqrt(gbar) S_t) is not positive");
  if (plus.sign() <= 0) throw PositivityError("det(1 + sqrt(gbar) S_t) is not positive");
  return {minus.logabsdet(), plus.logabsdet()};
}

PairWithDerivative det_pair_with_dt(double t, double gamma_bar, int quad_points) {
  check_gamma_bar(gamma_bar);
  if (gamma_bar == 0.0) return {};
  const auto rule = half_line_rule(t, quad_points);
  const Eigen::MatrixXd w = weighted_matrix({kernels::KernelKind::S_SHIFTED, t}, rule);
  Eigen::VectorXd d(rule.size());
  for (int i = 0; i < rule.size(); ++i) d[i] = 2.0 * rule.nodes[i] + t;
  const double a = std::sqrt(gamma_bar);
  const auto minus = cholesky_logdet(w, d, a, "-");
  const auto plus = cholesky_logdet(w, d, -a, "+");
  return {{minus.logdet, plus.logdet}, {minus.dt, plus.dt}};
}

LogDetPair logdet_dt(double t, double gamma_bar, int quad_points) {
  return det_pair_with_dt(t, gamma_bar, quad_points).dt;
}

double logdet_t(double t, double a, int quad_points) {
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("a must lie in [0, 1]");
  if (a == 0.0) return 0.0;
  const auto sys = NystromSystem::build({kernels::KernelKind::T_SHIFTED, t}, a, quad_points);
  if (sys.sign() <= 0) throw PositivityError("det(1 - a T_t) is not positive");
  return sys.logabsdet();
}

double logdet_t_dt(double t, double a, int quad_points) {
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("a must lie in [0, 1]");
  if (a == 0.0) return 0.0;
  const auto sys = NystromSystem::build({kernels::KernelKind::T_SHIFTED, t}, a, quad_points);
  Eigen::VectorXd v(sys.size());
  for (int i = 0; i < sys.size(); ++i) v[i] = sys.sqrt_weights()[i] * kernels::g(sys.rule().nodes[i] + t);
  return a * v.dot(sys.solve(v));
}

KernelSpectrum::KernelSpectrum(double t, int quad_points) {
  const auto rule = half_line_rule(t, quad_points);
  const Eigen::MatrixXd w = weighted_matrix({kernels::KernelKind::S_SHIFTED, t}, rule);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  eigenvalues_ = es.eigenvalues();
}

double KernelSpectrum::max_abs() const { return eigenvalues_.cwiseAbs().maxCoeff(); }

double KernelSpectrum::logdet(double z) const {
  double sum = 0.0;
  for (double lambda : eigenvalues_) {
    const double factor = 1.0 - z * lambda;
    if (!(factor > 0.0)) throw PositivityError("det(1 - z S_t) is not positive");
    sum += std::log1p(-z * lambda);
  }
  return sum;
}

}  // namespace ginedge::fredholm
