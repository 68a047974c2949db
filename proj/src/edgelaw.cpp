#include "ginedge/edgelaw.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ginedge/errors.hpp"
#include "ginedge/parallel.hpp"
#include "ginedge/quadrature.hpp"
#include "ginedge/tails.hpp"

namespace ginedge::edgelaw {

namespace {

struct Coefficients {
  double plus;   // multiplies det(1 + sqrt(gbar) S_t)
  double minus;  // multiplies det(1 - sqrt(gbar) S_t)
};

Coefficients combination(double gamma, double gb) {
  const double r = std::sqrt(gb);
  const double denom = 2.0 * (2.0 - gamma);
  return {std::sqrt((1.0 - r) / denom), std::sqrt((1.0 + r) / denom)};
}

// (gamma - 1 - cosh mu + sqrt(gbar) sinh mu) / (gamma - 2), written with positive terms only.
double radicand(double gamma, double gb, double mu) {
  const double r = std::sqrt(gb);
  const double hyper = 0.5 * ((1.0 - r) * std::exp(mu) + (1.0 + r) * std::exp(-mu));
  return ((1.0 - gamma) + hyper) / (2.0 - gamma);
}

void check_t(double t) {
  if (!std::isfinite(t)) throw DomainError("t must be finite");
}

}  // namespace

double gamma_bar(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
  return gamma * (2.0 - gamma);
}

EdgeLawPoint cdf(double t, double gamma, int quad_points) {
  check_t(t);
  EdgeLawPoint p;
  p.t = t;
  p.gamma = gamma;
  p.gamma_bar = gamma_bar(gamma);
  if (p.gamma_bar == 0.0) return p;
  const auto logs = fredholm::det_pair(t, p.gamma_bar, quad_points);
  const auto c = combination(gamma, p.gamma_bar);
  p.logdet_minus = logs.minus;
  p.logdet_plus = logs.plus;
  p.mu = logs.plus - logs.minus;
  p.cdf = c.plus * std::exp(logs.plus) + c.minus * std::exp(logs.minus);
  return p;
}

EdgeLawPoint evaluate_with_pdf(double t, double gamma, int quad_points) {
  check_t(t);
  EdgeLawPoint p;
  p.t = t;
  p.gamma = gamma;
  p.gamma_bar = gamma_bar(gamma);
  if (p.gamma_bar == 0.0) {
    p.pdf = 0.0;
    return p;
  }
  const auto r = fredholm::det_pair_with_dt(t, p.gamma_bar, quad_points);
  const auto c = combination(gamma, p.gamma_bar);
  const double plus = c.plus * std::exp(r.value.plus);
  const double minus = c.minus * std::exp(r.value.minus);
  p.logdet_minus = r.value.minus;
  p.logdet_plus = r.value.plus;
  p.mu = r.value.plus - r.value.minus;
  p.cdf = plus + minus;
  p.pdf = plus * r.dt.plus + minus * r.dt.minus;
  return p;
}

double mu(double t, double gamma_bar, int quad_points) {
  check_t(t);
  const auto logs = fredholm::det_pair(t, gamma_bar, quad_points);
  return logs.plus - logs.minus;
}

double cdf_via_mu(double t, double gamma, int quad_points) {
  check_t(t);
  const double gb = gamma_bar(gamma);
  if (gb == 0.0) return 1.0;
  const double m = mu(t, gb, quad_points);
  const double logdet_t = fredholm::logdet_t(t, gb, quad_points);
  return std::exp(0.5 * logdet_t) * std::sqrt(radicand(gamma, gb, m));
}

double pdf(double t, double gamma, int quad_points) {
  return *evaluate_with_pdf(t, gamma, quad_points).pdf;
}

double y_abs(double x, double a, int quad_points, double h) {
  if (!std::isfinite(x)) throw DomainError("x must be finite");
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("a must lie in [0, 1]");
  if (!(h > 0.0)) throw ParameterError("finite-difference step must be positive");
  if (a == 0.0) return 0.0;
  const double t = 2.0 * x;
  auto d1 = [&](double s) { return fredholm::logdet_t_dt(s, a, quad_points); };
  auto central = [&](double step) { return (d1(t + step) - d1(t - step)) / (2.0 * step); };
  const double coarse = central(h);
  const double fine = central(0.5 * h);
  const double second = (4.0 * fine - coarse) / 3.0;
  // log det(1 - aT_t) is concave in t; a clearly positive estimate means the
  // discretization or the step is off.
  if (second > 1e-6 * std::abs(coarse) + 1e-12)
    throw NumericalError("y_abs: second derivative of log det(1 - aT_t) came out positive");
  return std::sqrt(std::max(0.0, -4.0 * second));
}

double generating_function(double t, double lambda, int quad_points) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
  return cdf(t, lambda, quad_points).cdf;
}

double generating_function_via_mu(double t, double lambda, int quad_points) {
  const double lb = gamma_bar(lambda);
  if (lb == 0.0) return 1.0;
  const double m = mu(t, lb, quad_points);
  const double logdet_t = fredholm::logdet_t(t, lb, quad_points);
  const double radical =
      (lambda - 1.0 - std::cosh(m) + std::sqrt(lb) * std::sinh(m)) / (lambda - 2.0);
  return std::exp(0.5 * logdet_t) * std::sqrt(radical);
}

std::vector<double> largest_cdfs(int count, double t, const MthLargestOptions& options) {
  if (count < 1 || count > 4) throw ParameterError("m must lie in [1, 4]");
  check_t(t);
  if (options.degree < count - 1 || options.nodes <= options.degree)
    throw ParameterError("fit needs degree >= m - 1 and more nodes than the degree");
  if (!(options.lambda_min >= 0.0 && options.lambda_min < 1.0))
    throw ParameterError("lambda_min must lie in [0, 1)");

  // E((t, inf); lambda) = sum_k E(k) s^k with s = 1 - lambda, so the fitted polynomial
  // coefficients are the probabilities of exactly k eigenvalues beyond t.
  const fredholm::KernelSpectrum spectrum(t, options.quad_points);
  const double s_max = 1.0 - options.lambda_min;
  const int n = options.nodes;
  const int deg = options.degree;
  Eigen::MatrixXd v(n, deg + 1);
  Eigen::VectorXd e(n);
  for (int j = 0; j < n; ++j) {
    const double s = 0.5 * s_max * (1.0 + std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * n)));
    const double lambda = 1.0 - s;
    const double lb = gamma_bar(lambda);
    const double r = std::sqrt(lb);
    const auto c = combination(lambda, lb);
    e[j] = c.plus * std::exp(spectrum.logdet(-r)) + c.minus * std::exp(spectrum.logdet(r));
    const double scaled = s / s_max;
    double power = 1.0;
    for (int k = 0; k <= deg; ++k) {
      v(j, k) = power;
      power *= scaled;
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
  if (qr.rank() < deg + 1) throw NumericalError("mth_largest_cdf: ill-conditioned fit");
  const Eigen::VectorXd coef = qr.solve(e);

  std::vector<double> out(count);
  double f = 0.0;
  double scale = 1.0;
  for (int k = 0; k < count; ++k) {
    f += coef[k] / scale;
    scale *= s_max;
    out[k] = f;
  }
  for (double& value : out) {
    if (value < -1e-6 || value > 1.0 + 1e-6)
      throw NumericalError("mth_largest_cdf: fitted value " + std::to_string(value) +
                           " outside [0, 1]");
    value = std::clamp(value, 0.0, 1.0);
  }
  return out;
}

double mth_largest_cdf(int m, double t, const MthLargestOptions& options) {
  return largest_cdfs(m, t, options).back();
}

MomentSummary moments(double gamma, const MomentOptions& options) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw DomainError("moments need 0 < gamma <= 1 (gamma = 0 is a degenerate law)");
  if (!(options.tail_threshold > 0.0 && options.tail_threshold < 1.0))
    throw ParameterError("tail_threshold must lie in (0, 1)");

  const double slope = tails::c1(gamma);
  const double intercept = tails::c0_series(gamma);
  const double t_min = (std::log(options.tail_threshold) - intercept) / slope;
  const double t_max = options.t_max;
  if (!(t_min < t_max)) throw ParameterError("empty moment integration range");
  if (options.quad_points * fredholm::truncation_bound(t_min) / 10.0 > quadrature::kMaxPoints)
    throw NumericalError("moment range reaches t = " + std::to_string(t_min) +
                         ", which needs more than " + std::to_string(quadrature::kMaxPoints) +
                         " Nystrom nodes; use a larger tail threshold");

  // Panels of length 2 through the bulk, then growing geometrically (capped at 20)
  // through the exponential left tail.
  constexpr int kPanelNodes = 12;
  constexpr double kBulkEdge = -10.0;
  std::vector<std::pair<double, double>> panels;
  double right = t_max;
  double length = 2.0;
  while (right > t_min) {
    if (right <= kBulkEdge) length = std::min(20.0, length * 1.5);
    const double left = std::max(t_min, right - length);
    panels.emplace_back(left, right);
    right = left;
  }

  const auto base = quadrature::gauss_legendre(kPanelNodes);
  std::vector<double> ts;
  std::vector<double> ws;
  for (const auto& [a, b] : panels) {
    const auto rule = quadrature::affine_map(base, a, b);
    ts.insert(ts.end(), rule.nodes.begin(), rule.nodes.end());
    ws.insert(ws.end(), rule.weights.begin(), rule.weights.end());
  }

  std::vector<double> f(ts.size());
  parallel_for(ts.size(), options.workers,
               [&](std::size_t i) { f[i] = pdf(ts[i], gamma, options.quad_points); });

  double m0 = 0.0;
  double m1 = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    m0 += ws[i] * f[i];
    m1 += ws[i] * f[i] * ts[i];
  }
  const double mean = m1 / m0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double d = ts[i] - mean;
    const double wf = ws[i] * f[i] / m0;
    c2 += wf * d * d;
    c3 += wf * d * d * d;
    c4 += wf * d * d * d * d;
  }
  if (!(c2 > 0.0)) throw NumericalError("moments: nonpositive variance");

  MomentSummary out;
  out.gamma = gamma;
  out.mean = mean;
  out.variance = c2;
  out.skewness = c3 / std::pow(c2, 1.5);
  out.kurtosis = c4 / (c2 * c2);
  out.excess_kurtosis = out.kurtosis - 3.0;
  out.mass = m0;
  out.t_min = t_min;
  out.t_max = t_max;
  out.evaluations = static_cast<int>(ts.size());
  return out;
}

}  // namespace ginedge::edgelaw
