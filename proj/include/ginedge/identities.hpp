#pragma once

#include <map>
#include <string>
#include <vector>

#include "ginedge/fredholm.hpp"

namespace ginedge::identities {

using fredholm::kDefaultQuadPoints;

struct IdentityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  std::map<std::string, double> params;
};

/// Fills abs_err and rel_err (relative to |rhs|, or absolute when rhs = 0).
IdentityReport make_report(std::string name, double lhs, double rhs,
                           std::map<std::string, double> params);

/// det(1 - gbar T_t) from the T kernel against the product of the two S-determinants.
IdentityReport check_factorization(double t, double gamma, int quad_points = kDefaultQuadPoints);

/// The four integral relations between the resolvent of gbar T chi_t, g and G.
std::vector<IdentityReport> check_resolvent_identities(double t, double gamma,
                                                       int quad_points = kDefaultQuadPoints);

/// tau_1 from the integral form against exp(mu); params carry |tau_1 tau_2 - 1|.
IdentityReport check_tau_forms(double t, double gamma, int quad_points = kDefaultQuadPoints);

enum class HalfLine { POSITIVE_HALF, NEGATIVE_HALF };

/// int_I (T chi_t)^k (x + t, t) dx = int_t^inf Phi(u) ((T chi_t)^{k-1} g)(u) du with
/// Phi(x) = int_I g(x + v) dv, both sides scaled by gbar^k and evaluated with explicit
/// matrix powers.
IdentityReport check_shifted_power_integral(int k, double t, double gamma_bar, HalfLine interval,
                                            int quad_points = kDefaultQuadPoints);

/// int_R ((T chi_t)^k g)(x) dx = int_0^inf (T chi_t)^k (t, u + t) du (int g = 1),
/// scaled by gbar^k.
IdentityReport check_power_mass(int k, double t, double gamma_bar,
                                int quad_points = kDefaultQuadPoints);

/// int_{R + i omega} int_R e^{-a l^2/2 - b s^2/2} / (s - l)^2 ds dl = -2 pi sqrt(ab)/(a + b).
IdentityReport check_gaussian_contour(double a, double b, double omega);

/// generating_function against its form through det(1 - lbar T_t) and mu.
IdentityReport check_generating_function(double t, double lambda,
                                         int quad_points = kDefaultQuadPoints);

/// |cdf - cdf_via_mu|, reported as an absolute difference.
IdentityReport check_cdf_forms(double t, double gamma, int quad_points = kDefaultQuadPoints);

struct SuiteEntry {
  IdentityReport report;
  double tolerance = 0.0;
  bool relative = true;  ///< compare rel_err (else abs_err) against tolerance
  bool passed = false;
};

struct Grid {
  std::vector<double> t;
  std::vector<double> gamma;
};

/// t in {-8, -4, -2, 0, 2}, gamma in {0.2, 0.5, 0.8, 1}.
Grid default_grid();
/// A smaller grid for quick runs.
Grid quick_grid();

/// Every check over the grid, each compared against its tolerance.
std::vector<SuiteEntry> run_suite(const Grid& grid, int quad_points = kDefaultQuadPoints,
                                  int workers = 1);

}  // namespace ginedge::identities
