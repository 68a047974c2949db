#include "ginedge/identities.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "ginedge/edgelaw.hpp"
#include "ginedge/errors.hpp"
#include "ginedge/kernels.hpp"
#include "ginedge/parallel.hpp"
#include "ginedge/quadrature.hpp"

namespace ginedge::identities {

namespace {

using fredholm::NystromSystem;
using kernels::KernelKind;
using quadrature::QuadratureRule;

double big_g(double x) { return 0.5 * std::erfc(-x); }
double upper_g(double x) { return 0.5 * std::erfc(x); }

// GL rule on (a, b) at the same node density as the half-line discretization.
QuadratureRule dense_rule(double a, double b, int quad_points, int extra = 0) {
  const int n = static_cast<int>(std::ceil(quad_points * (b - a) / 10.0)) + extra;
  return quadrature::gauss_legendre(std::clamp(n, 20, quadrature::kMaxPoints), a, b);
}

// Everything is written in shifted coordinates xi = x - t, so chi_t becomes (0, inf)
// and T becomes the closed-form T_t.
struct WholeLine {
  double t;
  double gb;
  NystromSystem sys;
  QuadratureRule left;  // (xi_low, 0), i.e. x below t

  WholeLine(double t_, double gb_, int quad_points)
      : t(t_),
        gb(gb_),
        sys(NystromSystem::build({KernelKind::T_SHIFTED, t_}, gb_, quad_points)),
        left(dense_rule(std::min(0.0, -t_) - 16.0, 0.0, quad_points)) {}

  double kernel(double xi, double eta) const { return kernels::t_shifted_closed(t, xi, eta); }

  double half_integral(const std::vector<double>& u,
                       const std::function<double(double)>& weight) const {
    const auto& r = sys.rule();
    double sum = 0.0;
    for (int i = 0; i < r.size(); ++i) sum += r.weights[i] * weight(r.nodes[i]) * u[i];
    return sum;
  }

  double left_integral(const std::vector<double>& u, const std::function<double(double)>& f) const {
    return left.integrate([&](double xi) { return sys.extend(u, f, xi); });
  }
};

std::map<std::string, double> tg_params(double t, double gamma) {
  return {{"t", t}, {"gamma", gamma}};
}

// Matrix M_ij = T_t(v_i, v_j) w_j on the half-line nodes.
Eigen::MatrixXd power_matrix(double t, const QuadratureRule& rule) {
  const int m = rule.size();
  Eigen::MatrixXd mat(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      mat(i, j) = kernels::t_shifted_closed(t, rule.nodes[i], rule.nodes[j]) * rule.weights[j];
  return mat;
}

Eigen::VectorXd apply_power(const Eigen::MatrixXd& mat, Eigen::VectorXd v, int times) {
  for (int i = 0; i < times; ++i) v = mat * v;
  return v;
}

void check_power_args(int k, double gamma_bar) {
  if (k < 1) throw ParameterError("power k must be positive");
  if (!(gamma_bar >= 0.0 && gamma_bar <= 1.0)) throw DomainError("gamma_bar must lie in [0, 1]");
}

}  // namespace

IdentityReport make_report(std::string name, double lhs, double rhs,
                           std::map<std::string, double> params) {
  IdentityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::abs(lhs - rhs);
  r.rel_err = rhs != 0.0 ? r.abs_err / std::abs(rhs) : r.abs_err;
  r.params = std::move(params);
  return r;
}

IdentityReport check_factorization(double t, double gamma, int quad_points) {
  const double gb = edgelaw::gamma_bar(gamma);
  const double lhs = std::exp(fredholm::logdet_t(t, gb, quad_points));
  const auto pair = fredholm::det_pair(t, gb, quad_points);
  const double rhs = std::exp(pair.minus + pair.plus);
  return make_report("factorization", lhs, rhs, tg_params(t, gamma));
}

std::vector<IdentityReport> check_resolvent_identities(double t, double gamma, int quad_points) {
  const double gb = edgelaw::gamma_bar(gamma);
  const WholeLine line(t, gb, quad_points);
  const auto& sys = line.sys;

  auto g_shift = [t](double xi) { return kernels::g(xi + t); };
  auto big_g_shift = [t](double xi) { return big_g(xi + t); };
  auto r_source = [&](double xi) { return gb * line.kernel(xi, 0.0); };

  const auto u = sys.resolvent_apply(g_shift);       // (1 - gbar T chi_t)^{-1} g
  const auto v = sys.resolvent_apply(big_g_shift);   // (1 - gbar T chi_t)^{-1} G
  const auto r = sys.resolvent_apply(r_source);      // R(., t)
  auto one = [](double) { return 1.0; };

  const double u_left = line.left_integral(u, g_shift);
  const double u_right = line.half_integral(u, one);
  const double r_right = line.half_integral(r, one);
  const double r_left = line.left_integral(r, r_source);

  std::vector<IdentityReport> out;
  out.push_back(make_report("resolvent_G_at_t", sys.extend(v, big_g_shift, 0.0), u_left,
                            tg_params(t, gamma)));
  out.push_back(make_report(
      "resolvent_right_mass", r_right,
      gb * line.half_integral(u, [t](double xi) { return 1.0 - big_g(xi + t); }),
      tg_params(t, gamma)));
  out.push_back(make_report("resolvent_left_mass", r_left,
                            gb * line.half_integral(u, big_g_shift), tg_params(t, gamma)));
  out.push_back(make_report("resolvent_total_mass", 1.0 + r_right, u_left + u_right,
                            tg_params(t, gamma)));
  return out;
}

IdentityReport check_tau_forms(double t, double gamma, int quad_points) {
  const double gb = edgelaw::gamma_bar(gamma);
  const WholeLine line(t, gb, quad_points);
  const auto u = line.sys.resolvent_apply([t](double xi) { return kernels::g(xi + t); });
  const double a = std::sqrt(gb);
  auto tau = [&](double sign) {
    return 1.0 + sign * a *
                     line.half_integral(u, [&](double xi) { return 1.0 + sign * a * upper_g(xi + t); });
  };
  const double tau1 = tau(1.0);
  const double tau2 = tau(-1.0);
  const double rhs = std::exp(edgelaw::mu(t, gb, quad_points));
  auto report = make_report("tau_forms", tau1, rhs, tg_params(t, gamma));
  report.params["tau_product_err"] = std::abs(tau1 * tau2 - 1.0);
  return report;
}

IdentityReport check_shifted_power_integral(int k, double t, double gamma_bar, HalfLine interval,
                                            int quad_points) {
  check_power_args(k, gamma_bar);
  const auto rule = fredholm::half_line_rule(t, quad_points);
  const Eigen::MatrixXd mat = power_matrix(t, rule);
  const int m = rule.size();

  // h = (T chi_t)^{k-1}(., t) on the nodes; f = (T chi_t)^{k-1} g.
  Eigen::VectorXd h(m);
  Eigen::VectorXd f(m);
  for (int i = 0; i < m; ++i) {
    h[i] = kernels::t_shifted_closed(t, rule.nodes[i], 0.0);
    f[i] = kernels::g(rule.nodes[i] + t);
  }
  h = apply_power(mat, h, k - 2 >= 0 ? k - 2 : 0);
  f = apply_power(mat, f, k - 1);

  auto power_kernel = [&](double xi) {
    if (k == 1) return kernels::t_shifted_closed(t, xi, 0.0);
    double sum = 0.0;
    for (int j = 0; j < m; ++j)
      sum += kernels::t_shifted_closed(t, xi, rule.nodes[j]) * rule.weights[j] * h[j];
    return sum;
  };

  const bool positive = interval == HalfLine::POSITIVE_HALF;
  // An x rule independent of the Nystrom nodes.
  const auto x_rule = positive ? dense_rule(0.0, fredholm::truncation_bound(t), quad_points, 7)
                               : dense_rule(-20.0, 0.0, quad_points, 7);
  const double lhs = x_rule.integrate(power_kernel);

  double rhs = 0.0;
  for (int i = 0; i < m; ++i) {
    const double u = rule.nodes[i] + t;
    const double phi = positive ? upper_g(u) : big_g(u);
    rhs += rule.weights[i] * phi * f[i];
  }
  const double scale = std::pow(gamma_bar, k);
  return make_report(positive ? "shifted_power_integral_positive" : "shifted_power_integral_negative",
                     scale * lhs, scale * rhs,
                     {{"k", k}, {"t", t}, {"gamma_bar", gamma_bar}});
}

IdentityReport check_power_mass(int k, double t, double gamma_bar, int quad_points) {
  check_power_args(k, gamma_bar);
  const auto rule = fredholm::half_line_rule(t, quad_points);
  const Eigen::MatrixXd mat = power_matrix(t, rule);
  const int m = rule.size();

  Eigen::VectorXd f(m);
  Eigen::VectorXd h(m);
  for (int i = 0; i < m; ++i) {
    f[i] = kernels::g(rule.nodes[i] + t);
    h[i] = kernels::t_shifted_closed(t, rule.nodes[i], 0.0);
  }
  f = apply_power(mat, f, k - 1);
  h = apply_power(mat, h, k - 1);  // (T chi_t)^k (t, v_j)

  // ((T chi_t)^k g)(x) over the whole line, x = xi + t.
  auto power_g = [&](double xi) {
    double sum = 0.0;
    for (int j = 0; j < m; ++j)
      sum += kernels::t_shifted_closed(t, xi, rule.nodes[j]) * rule.weights[j] * f[j];
    return sum;
  };
  const auto x_rule =
      dense_rule(std::min(0.0, -t) - 16.0, fredholm::truncation_bound(t), quad_points, 7);
  const double lhs = x_rule.integrate(power_g);

  double rhs = 0.0;
  for (int j = 0; j < m; ++j) rhs += rule.weights[j] * h[j];
  const double scale = std::pow(gamma_bar, k);
  return make_report("power_mass", scale * lhs, scale * rhs,
                     {{"k", k}, {"t", t}, {"gamma_bar", gamma_bar}});
}

IdentityReport check_gaussian_contour(double a, double b, double omega) {
  if (!(a > 0.0 && b > 0.0 && omega > 0.0)) throw DomainError("a, b and omega must be positive");
  const double half_width = 12.0 / std::sqrt(std::min(a, b));
  // Panels no wider than omega keep the near-singular line s = Re(lambda) resolved.
  const double panel = std::min(1.0, omega);
  const int n_panels = static_cast<int>(std::ceil(2.0 * half_width / panel));
  const auto base = quadrature::gauss_legendre(12);
  std::vector<double> nodes;
  std::vector<double> weights;
  const double h = 2.0 * half_width / n_panels;
  for (int p = 0; p < n_panels; ++p) {
    const auto r = quadrature::affine_map(base, -half_width + p * h, -half_width + (p + 1) * h);
    nodes.insert(nodes.end(), r.nodes.begin(), r.nodes.end());
    weights.insert(weights.end(), r.weights.begin(), r.weights.end());
  }

  using cd = std::complex<double>;
  const std::size_t n = nodes.size();
  std::vector<double> gs(n);
  for (std::size_t j = 0; j < n; ++j) gs[j] = weights[j] * std::exp(-0.5 * b * nodes[j] * nodes[j]);
  cd total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cd lambda(nodes[i], omega);
    const cd outer = weights[i] * std::exp(-0.5 * a * lambda * lambda);
    cd inner = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const cd d = nodes[j] - lambda;
      inner += gs[j] / (d * d);
    }
    total += outer * inner;
  }
  const double rhs = -2.0 * std::numbers::pi * std::sqrt(a * b) / (a + b);
  auto report =
      make_report("gaussian_contour", total.real(), rhs, {{"a", a}, {"b", b}, {"omega", omega}});
  report.params["imag"] = total.imag();
  return report;
}

IdentityReport check_generating_function(double t, double lambda, int quad_points) {
  return make_report("generating_function", edgelaw::generating_function_via_mu(t, lambda, quad_points),
                     edgelaw::generating_function(t, lambda, quad_points),
                     {{"t", t}, {"lambda", lambda}});
}

IdentityReport check_cdf_forms(double t, double gamma, int quad_points) {
  return make_report("cdf_forms", edgelaw::cdf_via_mu(t, gamma, quad_points),
                     edgelaw::cdf(t, gamma, quad_points).cdf, tg_params(t, gamma));
}

Grid default_grid() { return {{-8.0, -4.0, -2.0, 0.0, 2.0}, {0.2, 0.5, 0.8, 1.0}}; }

Grid quick_grid() { return {{-4.0, 0.0, 2.0}, {0.5, 1.0}}; }

std::vector<SuiteEntry> run_suite(const Grid& grid, int quad_points, int workers) {
  // Each task yields one or more entries; tasks run in parallel, results are
  // concatenated in task order.
  using Task = std::function<std::vector<SuiteEntry>()>;
  std::vector<Task> tasks;
  auto single = [](IdentityReport r, double tol, bool relative = true) {
    return std::vector<SuiteEntry>{{std::move(r), tol, relative, false}};
  };

  for (double t : grid.t)
    for (double gamma : grid.gamma) {
      tasks.push_back([=] { return single(check_factorization(t, gamma, quad_points), 1e-10); });
      tasks.push_back([=] {
        std::vector<SuiteEntry> out;
        for (auto& r : check_resolvent_identities(t, gamma, quad_points))
          out.push_back({std::move(r), 1e-8, true, false});
        return out;
      });
      tasks.push_back([=] {
        auto r = check_tau_forms(t, gamma, quad_points);
        auto product = make_report("tau_product", r.params.at("tau_product_err"), 0.0, r.params);
        std::vector<SuiteEntry> out;
        out.push_back({std::move(r), t <= -8.0 ? 1e-7 : 1e-8, true, false});
        out.push_back({std::move(product), 1e-10, false, false});
        return out;
      });
      tasks.push_back([=] { return single(check_cdf_forms(t, gamma, quad_points), 1e-10, false); });
      tasks.push_back(
          [=] { return single(check_generating_function(t, gamma, quad_points), 1e-9, false); });
    }

  std::vector<double> bars;
  for (double gamma : grid.gamma) bars.push_back(edgelaw::gamma_bar(gamma));
  for (double t : grid.t)
    for (double gb : bars)
      for (int k = 1; k <= 3; ++k) {
        tasks.push_back([=] {
          std::vector<SuiteEntry> out;
          out.push_back({check_shifted_power_integral(k, t, gb, HalfLine::POSITIVE_HALF, quad_points),
                         1e-6, true, false});
          out.push_back({check_shifted_power_integral(k, t, gb, HalfLine::NEGATIVE_HALF, quad_points),
                         1e-6, true, false});
          out.push_back({check_power_mass(k, t, gb, quad_points), 1e-6, true, false});
          return out;
        });
      }

  for (auto [a, b, omega] : {std::tuple{1.0, 1.0, 1.0}, {2.0, 1.0, 0.5}, {3.0, 0.5, 1.0}})
    tasks.push_back([=] { return single(check_gaussian_contour(a, b, omega), 1e-8); });

  std::vector<std::vector<SuiteEntry>> results(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t i) { results[i] = tasks[i](); });

  std::vector<SuiteEntry> out;
  for (auto& group : results)
    for (auto& e : group) {
      const double err = e.relative ? e.report.rel_err : e.report.abs_err;
      e.passed = err <= e.tolerance;
      out.push_back(std::move(e));
    }
  return out;
}

}  // namespace ginedge::identities
