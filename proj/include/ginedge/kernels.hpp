#pragma once

namespace ginedge::kernels {

enum class KernelKind { S_SHIFTED, T_SHIFTED };

/// A kernel on the half-line [0, inf) together with its edge shift t.
struct KernelSpec {
  KernelKind kind = KernelKind::S_SHIFTED;
  double t = 0.0;

  double operator()(double x, double y) const;
  /// d/dt of the kernel at fixed (x, y).
  double dt(double x, double y) const;
};

/// Rank-one Gaussian pi^{-1/2} e^{-x^2}.
double g(double x);

/// S_t(x,y) = pi^{-1/2} e^{-(x+y+t)^2}.
double s_shifted(double t, double x, double y);

/// T_t(x,y) = e^{-(x-y)^2/2} erfc((x+y+2t)/sqrt2) / (2 sqrt(2 pi)), the square of S_t
/// on L^2(0, inf).
double t_shifted_closed(double t, double x, double y);

/// -2(x+y+t) S_t(x,y).
double s_shifted_dt(double t, double x, double y);

/// d/dt T_t(x,y) = -g(x+t) g(y+t).
double t_shifted_dt(double t, double x, double y);

/// Unshifted T on the whole line, (1/pi) int_0^inf e^{-(x+u)^2} e^{-(y+u)^2} du.
/// t_kernel(x + t, y + t) = t_shifted_closed(t, x, y).
double t_kernel(double x, double y);

}  // namespace ginedge::kernels
