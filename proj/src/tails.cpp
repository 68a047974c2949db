#include "ginedge/tails.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "ginedge/edgelaw.hpp"
#include "ginedge/errors.hpp"
#include "ginedge/quadrature.hpp"
#include "ginedge/specfun.hpp"

namespace ginedge::tails {

namespace {

using specfun::PolylogOrder;

constexpr double kPi = std::numbers::pi;

double direct_coefficient(int n) {
  // Pair m with n - m: both give the same term.
  double sum = 0.0;
  for (int m = 1; 2 * m < n; ++m) sum += 2.0 / std::sqrt(static_cast<double>(m) * (n - m));
  if (n % 2 == 0 && n >= 2) sum += 2.0 / n;
  return sum - kPi;
}

// a_1..a_n cached and grown on demand; a[0] is unused.
const std::vector<double>& coefficient_table(int n_max) {
  static std::mutex mutex;
  static std::vector<double> table{0.0};
  std::lock_guard lock(mutex);
  if (static_cast<int>(table.size()) <= n_max) {
    const int start = static_cast<int>(table.size());
    table.resize(n_max + 1);
    for (int n = start; n <= n_max; ++n) table[n] = direct_coefficient(n);
  }
  return table;
}

double log_prefactor(double gamma) { return 0.5 * std::log(2.0 / (2.0 - gamma)); }

double c0_integrand(double x) {
  const double li = specfun::polylog(PolylogOrder::half(), x);
  return (li * li - kPi * x / (1.0 - x)) / x;
}

// The same integrand at x = 1 - y for small y. Li_{1/2}(x)^2 and pi x/(1-x) both grow like
// pi/y, so with u = -ln x and Li_{1/2}(x) = sqrt(pi/u) + R(u) the difference is rearranged as
// pi (y - u)/(u y) + pi + 2 sqrt(pi/u) R + R^2, which has no cancellation.
double c0_integrand_near_one(double y) {
  if (y > 0.2) return c0_integrand(1.0 - y);
  const double u = -std::log1p(-y);
  // y - u = -(y^2/2 + y^3/3 + ...)
  double y_minus_u = 0.0, power = y;
  for (int k = 2; k < 40; ++k) {
    power *= y;
    y_minus_u -= power / k;
  }
  const double r = specfun::detail::polylog_regular_part(0.5, u);
  const double h = kPi * y_minus_u / (u * y) + kPi + 2.0 * std::sqrt(kPi / u) * r + r * r;
  return h / (1.0 - y);
}

double refined_integral(const std::function<double(double)>& f, double a, double b) {
  auto eval = [&](const quadrature::QuadratureRule& r) {
    return quadrature::affine_map(r, a, b).integrate(f);
  };
  return quadrature::refine_until(eval, 16, 1e-14).value;
}

}  // namespace

double right_tail(double t, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
  return 1.0 - 0.25 * gamma * specfun::erfc(t);
}

double c1(double gamma) {
  const double gb = edgelaw::gamma_bar(gamma);
  return specfun::polylog(PolylogOrder::three_halves(), gb) / (2.0 * std::sqrt(2.0 * kPi));
}

double series_coefficient(int n) {
  if (n < 1) throw ParameterError("series index must be positive");
  if (n <= kDefaultSeriesTerms) return coefficient_table(kDefaultSeriesTerms)[n];
  return direct_coefficient(n);
}

double c0_integral(double gamma) {
  const double gb = edgelaw::gamma_bar(gamma);
  if (gb >= 1.0) throw DomainError("c0_integral needs gamma < 1; use c0_series at gamma = 1");
  if (gb == 0.0) return 0.0;
  // Below 1/2 the integrand is smooth; above, x = 1 - s^2 absorbs the (1-x)^{-1/2}
  // behaviour at the upper end.
  constexpr double split = 0.5;
  double integral = refined_integral(c0_integrand, 0.0, std::min(gb, split));
  if (gb > split) {
    auto upper = [](double s) { return 2.0 * s * c0_integrand_near_one(s * s); };
    integral += refined_integral(upper, std::sqrt(1.0 - gb), std::sqrt(1.0 - split));
  }
  return log_prefactor(gamma) + integral / (4.0 * kPi);
}

double c0_series(double gamma, int n_max, double tol) {
  const double gb = edgelaw::gamma_bar(gamma);
  if (n_max < 100) throw ParameterError("c0_series needs n_max >= 100");
  if (gb == 0.0) return 0.0;
  const auto& a = coefficient_table(n_max);

  double sum = 0.0;
  double power = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    power *= gb;
    if (power == 0.0) break;
    sum += a[n] / n * power;
  }

  if (gb < 1.0) {
    // |a_n| < pi, so the remainder is below gbar^{N+1} / (4 (N+1) (1 - gbar)).
    const double bound = std::pow(gb, n_max + 1) / (4.0 * (n_max + 1) * (1.0 - gb));
    if (bound > tol)
      throw ConvergenceError("c0_series: n_max = " + std::to_string(n_max) +
                             " leaves a remainder bound of " + std::to_string(bound));
  } else {
    // Fit a_n = p1 n^{-1/2} + p2 n^{-1} + p3 n^{-3/2} through a_{N/4}, a_{N/2}, a_N and
    // sum the remainder with sum_{n > N} n^{-s} ~ (N + 1/2)^{1-s} / (s - 1).
    Eigen::Matrix3d basis;
    Eigen::Vector3d rhs;
    const int points[3] = {n_max / 4, n_max / 2, n_max};
    for (int r = 0; r < 3; ++r) {
      const double n = points[r];
      for (int c = 0; c < 3; ++c) basis(r, c) = std::pow(n, -0.5 * (c + 1));
      rhs[r] = a[points[r]];
    }
    const Eigen::Vector3d p = basis.fullPivLu().solve(rhs);
    const double h = n_max + 0.5;
    for (int c = 0; c < 3; ++c) {
      const double s = 0.5 * (c + 1) + 1.0;
      sum += p[c] * std::pow(h, 1.0 - s) / (s - 1.0);
    }
  }
  return log_prefactor(gamma) + sum / (4.0 * kPi);
}

double left_tail(double t, double gamma) { return std::exp(c1(gamma) * t + c0_series(gamma)); }

TailCoefficients coefficients(double gamma, int n_max) {
  TailCoefficients out;
  out.gamma = gamma;
  out.c1 = c1(gamma);
  out.c0_series = c0_series(gamma, n_max);
  out.c0_integral = edgelaw::gamma_bar(gamma) < 1.0 ? c0_integral(gamma)
                                                    : std::numeric_limits<double>::quiet_NaN();
  out.n_terms = n_max;
  return out;
}

}  // namespace ginedge::tails
