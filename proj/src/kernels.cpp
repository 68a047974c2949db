#include "ginedge/kernels.hpp"

#include <cmath>
#include <numbers>

namespace ginedge::kernels {

namespace {
const double kInvSqrtPi = std::numbers::inv_sqrtpi;
const double kTNorm = 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::pi));
}  // namespace

double g(double x) { return kInvSqrtPi * std::exp(-x * x); }

double s_shifted(double t, double x, double y) {
  const double s = x + y + t;
  return kInvSqrtPi * std::exp(-s * s);
}

double t_shifted_closed(double t, double x, double y) {
  return t_kernel(x + t, y + t);
}

double s_shifted_dt(double t, double x, double y) {
  const double s = x + y + t;
  return -2.0 * s * kInvSqrtPi * std::exp(-s * s);
}

double t_shifted_dt(double t, double x, double y) { return -g(x + t) * g(y + t); }

double t_kernel(double x, double y) {
  const double d = x - y;
  return kTNorm * std::exp(-0.5 * d * d) * std::erfc((x + y) / std::numbers::sqrt2);
}

double KernelSpec::operator()(double x, double y) const {
  return kind == KernelKind::S_SHIFTED ? s_shifted(t, x, y) : t_shifted_closed(t, x, y);
}

double KernelSpec::dt(double x, double y) const {
  return kind == KernelKind::S_SHIFTED ? s_shifted_dt(t, x, y) : t_shifted_dt(t, x, y);
}

}  // namespace ginedge::kernels
