#pragma once

namespace ginedge::tails {

inline constexpr int kDefaultSeriesTerms = 20000;

struct TailCoefficients {
  double gamma = 0.0;
  double c1 = 0.0;
  double c0_integral = 0.0;  ///< NaN at gamma = 1, where only the series form applies
  double c0_series = 0.0;
  int n_terms = 0;
};

/// 1 - (gamma/4) erfc(t), the large-t behaviour of P(t; gamma).
double right_tail(double t, double gamma);

/// Slope of ln P(t; gamma) as t -> -inf: Li_{3/2}(gbar) / (2 sqrt(2 pi)).
double c1(double gamma);

/// Intercept of ln P(t; gamma) as t -> -inf, from
/// (1/2) ln(2/(2-gamma)) + (1/4pi) int_0^gbar (Li_{1/2}(x)^2 - pi x/(1-x)) dx/x.
/// Requires gamma < 1; the integrand's endpoint singularity at gbar = 1 is only
/// integrable in the limit.
double c0_integral(double gamma);

/// The same constant from its power series in gbar with coefficients a_n / n.
/// At gbar = 1 the remainder is extrapolated from a fit a_n ~ p1 n^{-1/2} + p2 n^{-1} + p3 n^{-3/2}.
/// Throws ConvergenceError if the geometric remainder bound exceeds tol.
double c0_series(double gamma, int n_max = kDefaultSeriesTerms, double tol = 1e-10);

/// a_n = -pi + sum_{m=1}^{n-1} 1/sqrt(m(n-m)), n >= 1.
double series_coefficient(int n);

/// exp(c1 t + c0) with c0 from the series.
double left_tail(double t, double gamma);

TailCoefficients coefficients(double gamma, int n_max = kDefaultSeriesTerms);

}  // namespace ginedge::tails
