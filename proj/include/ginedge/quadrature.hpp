#pragma once

#include <functional>
#include <vector>

namespace ginedge::quadrature {

/// Nodes and positive weights on (a, b); nodes strictly increasing.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = -1.0;
  double b = 1.0;

  int size() const { return static_cast<int>(nodes.size()); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

inline constexpr int kMaxPoints = 2048;

/// m-point Gauss-Legendre rule on (-1, 1), 1 <= m <= 2048.
/// Rules are cached, so repeated calls with the same m are cheap.
QuadratureRule gauss_legendre(int m);

/// The same rule carried over to (a, b).
QuadratureRule affine_map(const QuadratureRule& rule, double a, double b);

/// m-point Gauss-Legendre rule directly on (a, b).
QuadratureRule gauss_legendre(int m, double a, double b);

struct Refined {
  double value;
  int m_used;
};

/// Doubles m from m0 until two successive evaluations agree to tol.
/// Throws ConvergenceError (carrying the last two values) once m would pass 2048.
Refined refine_until(const std::function<double(const QuadratureRule&)>& evaluate, int m0,
                     double tol);

}  // namespace ginedge::quadrature
