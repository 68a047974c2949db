#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "ginedge/edgelaw.hpp"
#include "ginedge/errors.hpp"
#include "ginedge/montecarlo.hpp"

using namespace ginedge;
using namespace ginedge::montecarlo;

TEST_CASE("Philox known answers") {
  const auto zero = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(zero == std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  const auto ones = philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff});
  CHECK(ones == std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  const auto pi = philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
  CHECK(pi == std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams") {
  RngStream a(42, 7), b(42, 7), c(42, 8), d(42, 7, kThinningStream);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u32();
    CHECK(x == b.next_u32());
    differs_c = differs_c || x != c.next_u32();
    differs_d = differs_d || x != d.next_u32();
  }
  CHECK(differs_c);
  CHECK(differs_d);
  RngStream u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  CHECK_THROWS_AS(RngStream(1, std::uint64_t{1} << 32), ParameterError);
}

TEST_CASE("sampled matrices") {
  RngStream s1(5, 3), s2(5, 3);
  const auto m1 = sample_matrix(50, s1);
  const auto m2 = sample_matrix(50, s2);
  CHECK(m1 == m2);
  RngStream bad(5, 3);
  CHECK_THROWS_AS(sample_matrix(1, bad), ParameterError);
  CHECK_THROWS_AS(sample_matrix(1001, bad), ParameterError);

  RngStream big(9, 0);
  const auto m = sample_matrix(1000, big);
  const double mean = m.mean();
  const double var = (m.array() - mean).square().sum() / (m.size() - 1);
  CHECK(std::abs(mean) <= 4.0 / 1000.0);
  CHECK(std::abs(var - 1.0) <= 0.01);
}

TEST_CASE("real eigenvalues") {
  Eigen::MatrixXd diag = Eigen::Vector3d(3, 1, 2).asDiagonal();
  CHECK(real_eigenvalues(diag) == std::vector<double>{1, 2, 3});
  Eigen::MatrixXd rot(2, 2);
  rot << 0, -1, 1, 0;
  CHECK(real_eigenvalues(rot).empty());
  // Companion matrix of (x - 1)(x^2 + 1) = x^3 - x^2 + x - 1.
  Eigen::MatrixXd comp(3, 3);
  comp << 1, -1, 1, 1, 0, 0, 0, 1, 0;
  // Root oracle: bisection of the cubic on [0, 2].
  double lo = 0.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((mid * mid * mid - mid * mid + mid - 1.0) < 0.0 ? lo : hi) = mid;
  }
  const auto roots = real_eigenvalues(comp);
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0] - lo) <= 1e-12);
  CHECK_THROWS_AS(real_eigenvalues(comp, 0.0), ParameterError);
}

TEST_CASE("complex eigenvalues come in conjugate pairs") {
  RngStream s(3, 1);
  const auto m = sample_matrix(80, s);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  auto values = solver.eigenvalues();
  std::vector<std::complex<double>> upper, lower;
  for (int i = 0; i < values.size(); ++i) {
    if (values[i].imag() > 1e-8) upper.push_back(values[i]);
    if (values[i].imag() < -1e-8) lower.push_back(std::conj(values[i]));
  }
  REQUIRE(upper.size() == lower.size());
  auto order = [](auto a, auto b) { return a.real() < b.real(); };
  std::sort(upper.begin(), upper.end(), order);
  std::sort(lower.begin(), lower.end(), order);
  for (std::size_t i = 0; i < upper.size(); ++i)
    CHECK(std::abs(upper[i] - lower[i]) <= 1e-10 * std::abs(upper[i]));
  const auto real = real_eigenvalues(m);
  CHECK(real.size() + 2 * upper.size() == 80);
  CHECK(std::is_sorted(real.begin(), real.end()));
}

TEST_CASE("thinning") {
  const std::vector<double> v{-1.0, 0.5, 2.0, 3.0};
  RngStream s(1, 0, kThinningStream);
  CHECK(thin(v, 1.0, s) == v);
  CHECK(thin(v, 0.0, s).empty());
  std::vector<double> many(100000, 1.0);
  const auto kept = thin(many, 0.6, s);
  CHECK(std::abs(kept.size() / 1e5 - 0.6) <= 0.01);
  CHECK_THROWS_AS(thin(v, 1.5, s), DomainError);
}

TEST_CASE("runs") {
  const auto none = run(20, 0.0, 50, 3);
  CHECK(none.maxima.empty());
  CHECK(none.empty_samples() == 50);
  CHECK(ks_distance(none, [](double) { return 1.0; }) == 0.0);

  const auto a = run(30, 0.7, 200, 17);
  CHECK(a == run(30, 0.7, 200, 17));
  CHECK(a == run(30, 0.7, 200, 17, 3));
  CHECK(a.retained_counts.size() == 200);
  CHECK(static_cast<int>(a.maxima.size()) + a.empty_samples() == 200);
  CHECK(!(a == run(30, 0.7, 200, 18)));
  CHECK(to_json(a) == to_json(run(30, 0.7, 200, 17, 2)));
  CHECK(from_json(to_json(a)) == a);
  CHECK(from_json(to_json(a, 2)) == a);
  CHECK(mean_maximum(a) < 1.0);
  CHECK_THROWS_AS(mean_maximum(none), ParameterError);
  CHECK_THROWS_AS(run(30, 0.7, 0, 17), ParameterError);
}

TEST_CASE("KS distance") {
  McRun steps;
  steps.num_samples = 4;
  steps.maxima = {0.0, 1.0, 1.0, 2.0};
  steps.retained_counts = {1, 1, 1, 1};
  auto step_cdf = [](double t) { return t < 0 ? 0.0 : t < 1 ? 0.25 : t < 2 ? 0.75 : 1.0; };
  CHECK(ks_distance(steps, step_cdf) == 0.0);
  CHECK(ks_two_sample(steps, steps) == 0.0);

  McRun uniform;
  RngStream s(2024, 0);
  uniform.num_samples = 10000;
  for (int i = 0; i < 10000; ++i) uniform.maxima.push_back(s.uniform());
  uniform.retained_counts.assign(10000, 1);
  CHECK(ks_distance(uniform, [](double t) { return std::clamp(t, 0.0, 1.0); }) <= 0.03);

  McRun empty;
  CHECK_THROWS_AS(ks_distance(empty, step_cdf), ParameterError);
}

TEST_CASE("thinning a full run matches a direct run at the thinned rate") {
  // n = 100, 5000 samples each, independent seeds.
  const auto full = sample_real_eigenvalues(100, 5000, 101);
  const auto direct = sample_real_eigenvalues(100, 5000, 202);
  const auto from_full = thin_run(full, 100, 0.6, 303);
  const auto direct_run = thin_run(direct, 100, 0.6, 202);
  CHECK(ks_two_sample(from_full, direct_run) <= 0.03);
  // Both against the limit law, with the finite-n allowance.
  CHECK(ks_distance(direct_run, [](double t) { return edgelaw::cdf(t, 0.6).cdf; }) <= 0.05);
}
