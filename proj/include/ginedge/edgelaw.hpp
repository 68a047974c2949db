#pragma once

#include <optional>
#include <vector>

#include "ginedge/fredholm.hpp"

namespace ginedge::edgelaw {

using fredholm::kDefaultQuadPoints;

/// gbar = gamma (2 - gamma).
double gamma_bar(double gamma);

struct EdgeLawPoint {
  double t = 0.0;
  double gamma = 0.0;
  double gamma_bar = 0.0;
  double logdet_minus = 0.0;
  double logdet_plus = 0.0;
  double mu = 0.0;
  double cdf = 1.0;
  std::optional<double> pdf;
};

/// P(t; gamma) as the combination of det(1 + sqrt(gbar) S_t) and det(1 - sqrt(gbar) S_t).
EdgeLawPoint cdf(double t, double gamma, int quad_points = kDefaultQuadPoints);

/// Same as cdf, with the density filled in.
EdgeLawPoint evaluate_with_pdf(double t, double gamma, int quad_points = kDefaultQuadPoints);

/// mu = log det(1 + sqrt(gbar) S_t) - log det(1 - sqrt(gbar) S_t).
double mu(double t, double gamma_bar, int quad_points = kDefaultQuadPoints);

/// P(t; gamma) through sqrt(det(1 - gbar T_t)) and the cosh/sinh form in mu.
double cdf_via_mu(double t, double gamma, int quad_points = kDefaultQuadPoints);

/// dP/dt from the analytic t-derivatives of both log-determinants.
double pdf(double t, double gamma, int quad_points = kDefaultQuadPoints);

/// |y(x; a)| recovered from -4 d^2/dt^2 log det(1 - a T_t) at t = 2x.
/// The second derivative is a Richardson-extrapolated central difference of the
/// analytic first derivative with step h.
double y_abs(double x, double a, int quad_points = kDefaultQuadPoints, double h = 1e-3);

/// E((t, inf); lambda) = P(t; lambda).
double generating_function(double t, double lambda, int quad_points = kDefaultQuadPoints);

/// The combination sqrt(det(1 - lbar T_t)) sqrt((lambda-1-cosh mu+sqrt(lbar) sinh mu)/(lambda-2))
/// evaluated as written (mu at lbar), for cross-checking generating_function.
double generating_function_via_mu(double t, double lambda, int quad_points = kDefaultQuadPoints);

struct MthLargestOptions {
  int quad_points = kDefaultQuadPoints;
  int degree = 8;
  int nodes = 12;
  double lambda_min = 0.75;
};

/// F_1(t), ..., F_count(t) for the count largest eigenvalues (count <= 4), from a
/// least-squares polynomial in (1 - lambda) fitted to E((t, inf); lambda) on Chebyshev
/// nodes in [lambda_min, 1].
std::vector<double> largest_cdfs(int count, double t, const MthLargestOptions& options = {});

/// F_m(t), the law of the m-th largest edge-scaled real eigenvalue, 1 <= m <= 4.
double mth_largest_cdf(int m, double t, const MthLargestOptions& options = {});

struct MomentSummary {
  double gamma = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;         ///< mu4 / sigma^4
  double excess_kurtosis = 0.0;  ///< mu4 / sigma^4 - 3
  double mass = 0.0;             ///< integral of the density over the range used
  double t_min = 0.0;
  double t_max = 0.0;
  int evaluations = 0;
};

struct MomentOptions {
  int quad_points = kDefaultQuadPoints;
  int workers = 1;
  double t_max = 8.0;
  double tail_threshold = 1e-14;
};

/// Moments of P(.; gamma), 0 < gamma <= 1, by composite Gauss-Legendre quadrature of
/// t^k pdf(t) over [t_min, t_max]; t_min is where the left-tail law reaches
/// tail_threshold.
MomentSummary moments(double gamma, const MomentOptions& options = {});

}  // namespace ginedge::edgelaw
