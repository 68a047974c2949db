#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ginedge::montecarlo {

/// Philox4x32-10 counter-based generator. A stream is fixed by (seed, index, purpose),
/// so sample i draws the same numbers regardless of which worker computes it.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t index, std::uint32_t purpose = 0);

  std::uint32_t next_u32();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by the Marsaglia polar method.
  double normal();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// One Philox4x32-10 block, exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

inline constexpr std::uint32_t kMatrixStream = 0;
inline constexpr std::uint32_t kThinningStream = 1;

/// n x n matrix of i.i.d. N(0, 1) entries, 2 <= n <= 1000.
Eigen::MatrixXd sample_matrix(int n, RngStream& stream);

/// Real eigenvalues in ascending order: those with |Im| <= tol (1 + ||A||_F).
std::vector<double> real_eigenvalues(const Eigen::MatrixXd& matrix, double tol = 1e-10);

/// Keeps each value independently with probability gamma.
std::vector<double> thin(const std::vector<double>& values, double gamma, RngStream& stream);

struct McRun {
  int n = 0;
  double gamma = 0.0;
  int num_samples = 0;
  std::uint64_t seed = 0;
  /// max(retained real eigenvalues) - sqrt(n), in sample order, for samples that keep any.
  std::vector<double> maxima;
  /// Retained real eigenvalue count per sample.
  std::vector<int> retained_counts;

  int empty_samples() const;
  bool operator==(const McRun&) const = default;
};

/// Real eigenvalues of each sampled matrix, indexed by sample.
std::vector<std::vector<double>> sample_real_eigenvalues(int n, int num_samples, std::uint64_t seed,
                                                         int workers = 1);

/// Thins precomputed per-sample eigenvalues with the thinning streams of `seed`.
McRun thin_run(const std::vector<std::vector<double>>& eigenvalues, int n, double gamma,
               std::uint64_t seed);

McRun run(int n, double gamma, int num_samples, std::uint64_t seed, int workers = 1);

/// sup over sample points of |F_emp - cdf|; samples without a retained eigenvalue sit
/// at -inf and count toward F_emp everywhere.
double ks_distance(const McRun& run, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance between runs, with the same convention.
double ks_two_sample(const McRun& a, const McRun& b);

/// Mean of the recorded maxima.
double mean_maximum(const McRun& run);

std::string to_json(const McRun& run, int indent = -1);
McRun from_json(const std::string& text);

}  // namespace ginedge::montecarlo
