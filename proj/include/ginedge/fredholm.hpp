#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "ginedge/kernels.hpp"
#include "ginedge/quadrature.hpp"

namespace ginedge::fredholm {

/// Default resolution: nodes per 10 units of the truncated half-line.
inline constexpr int kDefaultQuadPoints = 50;

/// Right end U(t) = max(10, 10 - t) of the truncated half-line (0, U).
double truncation_bound(double t);

/// Number of Gauss-Legendre nodes used on (0, U(t)): ceil(quad_points * U / 10).
/// At t >= 0 this is exactly quad_points.
int node_count(double t, int quad_points);

/// The Gauss-Legendre rule on (0, U(t)) with node_count(t, quad_points) nodes.
quadrature::QuadratureRule half_line_rule(double t, int quad_points);

/// Weighted kernel matrix sqrt(w_i) K(x_i, x_j) sqrt(w_j).
Eigen::MatrixXd weighted_matrix(const kernels::KernelSpec& kernel,
                                const quadrature::QuadratureRule& rule);

/// Nystrom discretization of 1 - zK on (0, U(t)), factorized by pivoted LU.
class NystromSystem {
 public:
  static NystromSystem build(const kernels::KernelSpec& kernel, double z,
                             int quad_points = kDefaultQuadPoints);
  static NystromSystem build(const kernels::KernelSpec& kernel, double z,
                             quadrature::QuadratureRule rule);

  const quadrature::QuadratureRule& rule() const { return rule_; }
  const kernels::KernelSpec& kernel() const { return kernel_; }
  double z() const { return z_; }
  int size() const { return rule_.size(); }
  /// 1 - z W before factorization.
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::VectorXd& sqrt_weights() const { return sqrt_w_; }
  int sign() const { return sign_; }
  double logabsdet() const { return logabsdet_; }

  /// Solves (1 - zW) y = rhs.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  /// Node values u(x_i) of u = (1 - zK)^{-1} f.
  std::vector<double> resolvent_apply(const std::function<double(double)>& f) const;

  /// Nystrom extension u(x) = f(x) + z sum_j w_j K(x, x_j) u(x_j), valid at any x
  /// where the kernel formula makes sense (including x < 0).
  double extend(const std::vector<double>& u, const std::function<double(double)>& f,
                double x) const;

 private:
  NystromSystem() = default;

  quadrature::QuadratureRule rule_;
  kernels::KernelSpec kernel_;
  double z_ = 0.0;
  Eigen::VectorXd sqrt_w_;
  Eigen::MatrixXd matrix_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  int sign_ = 1;
  double logabsdet_ = 0.0;
};

struct LogDetPair {
  double minus = 0.0;  ///< log det(1 - sqrt(gbar) S_t)
  double plus = 0.0;   ///< log det(1 + sqrt(gbar) S_t)
};

/// Both S-determinants. Throws PositivityError if either comes out nonpositive.
LogDetPair det_pair(double t, double gamma_bar, int quad_points = kDefaultQuadPoints);

/// d/dt of both log-determinants, by Jacobi's formula.
LogDetPair logdet_dt(double t, double gamma_bar, int quad_points = kDefaultQuadPoints);

struct PairWithDerivative {
  LogDetPair value;
  LogDetPair dt;
};

/// Values and t-derivatives from one pair of Cholesky factorizations.
///
/// Because 1 - zW commutes with W and dW/dt = -(DW + WD) with D = diag(2x_i + t),
/// d/dt log det(1 - zW) = 2 sum_i (2x_i + t) ((1 - zW)^{-1}_ii - 1), so only the
/// diagonal of the inverse is needed.
PairWithDerivative det_pair_with_dt(double t, double gamma_bar,
                                    int quad_points = kDefaultQuadPoints);

/// log det(1 - a T_t), built from the closed form of T_t.
double logdet_t(double t, double a, int quad_points = kDefaultQuadPoints);

/// d/dt log det(1 - a T_t) = a v^T (1 - aW)^{-1} v with v_i = sqrt(w_i) g(x_i + t),
/// since dT_t/dt is rank one.
double logdet_t_dt(double t, double a, int quad_points = kDefaultQuadPoints);

/// Eigenvalues of the weighted S_t matrix, for evaluating det(1 - zS_t) at many z.
class KernelSpectrum {
 public:
  explicit KernelSpectrum(double t, int quad_points = kDefaultQuadPoints);

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  double max_abs() const;
  /// log det(1 - zS_t); PositivityError if a factor is nonpositive.
  double logdet(double z) const;

 private:
  Eigen::VectorXd eigenvalues_;
};

}  // namespace ginedge::fredholm
