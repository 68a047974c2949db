#include "ginedge/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "ginedge/errors.hpp"

namespace ginedge::specfun {

namespace {

constexpr double kSeriesLimit = 0.8;
constexpr int kExpansionTerms = 12;

}  // namespace

namespace detail {

double polylog_series(double s, double x) {
  double sum = 0.0;
  double power = 1.0;
  for (int n = 1; n < 100000; ++n) {
    power *= x;
    const double term = power / std::pow(static_cast<double>(n), s);
    sum += term;
    if (term <= 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace detail

namespace {

// zeta(s - k) / k! for k = 0..kExpansionTerms.
std::array<double, kExpansionTerms + 1> expansion_coefficients(double s) {
  std::array<double, kExpansionTerms + 1> c{};
  double factorial = 1.0;
  for (int k = 0; k <= kExpansionTerms; ++k) {
    if (k > 0) factorial *= k;
    const double arg = s - k;
    const double z = (arg == 1.5) ? zeta_three_halves() : std::riemann_zeta(arg);
    c[k] = z / factorial;
  }
  return c;
}

}  // namespace

double detail::polylog_regular_part(double s, double u) {
  static const auto half = expansion_coefficients(0.5);
  static const auto three_halves = expansion_coefficients(1.5);
  const auto& c = (s == 0.5) ? half : three_halves;
  double sum = 0.0;
  for (int k = kExpansionTerms; k >= 0; --k) sum = sum * (-u) + c[k];
  return sum;
}

double detail::polylog_near_one(double s, double x) {
  const double u = -std::log(x);
  double sum = polylog_regular_part(s, u);
  if (u > 0.0) sum += std::tgamma(1.0 - s) * std::pow(u, s - 1.0);
  return sum;
}

double erfc(double x) {
  if (!std::isfinite(x)) throw DomainError("erfc: argument must be finite");
  return std::erfc(x);
}

double zeta_three_halves() {
  static const double value = [] {
    constexpr int n_terms = 2000;
    double sum = 0.0;
    for (int n = n_terms - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -1.5);
    // Euler-Maclaurin tail of sum_{n >= N} n^{-3/2}.
    const double big_n = n_terms;
    const double tail = 2.0 / std::sqrt(big_n) + 0.5 * std::pow(big_n, -1.5) +
                        (1.5 / 12.0) * std::pow(big_n, -2.5) -
                        (1.5 * 2.5 * 3.5 / 720.0) * std::pow(big_n, -4.5);
    return sum + tail;
  }();
  return value;
}

double polylog(PolylogOrder s, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("polylog: argument must lie in [0, 1]");
  const double order = s.value();
  if (x == 0.0) return 0.0;
  if (x == 1.0) {
    if (s == PolylogOrder::half()) throw DomainError("polylog: Li_{1/2}(1) diverges");
    return zeta_three_halves();
  }
  if (x <= kSeriesLimit) return detail::polylog_series(order, x);
  return detail::polylog_near_one(order, x);
}

}  // namespace ginedge::specfun
