#include "ginedge/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <string>

#include "ginedge/errors.hpp"
#include "ginedge/parallel.hpp"

namespace ginedge::montecarlo {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in [0, 1]");
}

void check_size(int n) {
  if (n < 2 || n > 1000) throw ParameterError("matrix size must lie in [2, 1000]");
}

// Right-continuous empirical CDF with n0 samples at -inf.
struct Empirical {
  std::vector<double> sorted;
  int at_minus_infinity;
  int total;
};

Empirical empirical(const McRun& run) {
  if (run.num_samples <= 0) throw ParameterError("empty Monte Carlo run");
  Empirical e{run.maxima, run.empty_samples(), run.num_samples};
  std::sort(e.sorted.begin(), e.sorted.end());
  return e;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t index, std::uint32_t purpose)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      counter_{0u, 0u, static_cast<std::uint32_t>(index), purpose} {
  if (index > std::numeric_limits<std::uint32_t>::max())
    throw ParameterError("stream index must fit in 32 bits");
}

void RngStream::refill() {
  block_ = philox4x32(counter_, key_);
  if (++counter_[0] == 0) ++counter_[1];
  used_ = 0;
}

std::uint32_t RngStream::next_u32() {
  if (used_ == 4) refill();
  return block_[used_++];
}

double RngStream::uniform() {
  const std::uint64_t hi = next_u32();
  const std::uint64_t lo = next_u32();
  return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

Eigen::MatrixXd sample_matrix(int n, RngStream& stream) {
  check_size(n);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = stream.normal();
  return a;
}

std::vector<double> real_eigenvalues(const Eigen::MatrixXd& matrix, double tol) {
  if (!(tol > 0.0)) throw ParameterError("eigenvalue tolerance must be positive");
  if (matrix.rows() != matrix.cols()) throw ParameterError("matrix must be square");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, false);
  if (solver.info() != Eigen::Success) throw EigensolverError("QR iteration did not converge");
  const double cutoff = tol * (1.0 + matrix.norm());
  std::vector<double> out;
  for (const auto& z : solver.eigenvalues())
    if (std::abs(z.imag()) <= cutoff) out.push_back(z.real());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> thin(const std::vector<double>& values, double gamma, RngStream& stream) {
  check_gamma(gamma);
  std::vector<double> kept;
  for (double v : values)
    if (stream.uniform() < gamma) kept.push_back(v);
  return kept;
}

int McRun::empty_samples() const {
  return static_cast<int>(std::count(retained_counts.begin(), retained_counts.end(), 0));
}

std::vector<std::vector<double>> sample_real_eigenvalues(int n, int num_samples, std::uint64_t seed,
                                                         int workers) {
  check_size(n);
  if (num_samples < 1) throw ParameterError("number of samples must be positive");
  std::vector<std::vector<double>> out(num_samples);
  parallel_for(out.size(), workers, [&](std::size_t i) {
    RngStream stream(seed, i, kMatrixStream);
    out[i] = real_eigenvalues(sample_matrix(n, stream));
  });
  return out;
}

McRun thin_run(const std::vector<std::vector<double>>& eigenvalues, int n, double gamma,
               std::uint64_t seed) {
  check_gamma(gamma);
  McRun run;
  run.n = n;
  run.gamma = gamma;
  run.num_samples = static_cast<int>(eigenvalues.size());
  run.seed = seed;
  run.retained_counts.reserve(eigenvalues.size());
  const double shift = std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    RngStream stream(seed, i, kThinningStream);
    const auto kept = thin(eigenvalues[i], gamma, stream);
    run.retained_counts.push_back(static_cast<int>(kept.size()));
    if (!kept.empty()) run.maxima.push_back(*std::max_element(kept.begin(), kept.end()) - shift);
  }
  return run;
}

McRun run(int n, double gamma, int num_samples, std::uint64_t seed, int workers) {
  check_gamma(gamma);
  return thin_run(sample_real_eigenvalues(n, num_samples, seed, workers), n, gamma, seed);
}

double ks_distance(const McRun& run, const std::function<double(double)>& cdf) {
  const auto e = empirical(run);
  const double total = e.total;
  double d = 0.0;
  // Compare left limits too; cdf is read just below each point so steps in cdf are exact.
  std::size_t i = 0;
  while (i < e.sorted.size()) {
    std::size_t j = i;
    while (j < e.sorted.size() && e.sorted[j] == e.sorted[i]) ++j;
    const double below = (e.at_minus_infinity + static_cast<double>(i)) / total;
    const double at = (e.at_minus_infinity + static_cast<double>(j)) / total;
    d = std::max({d, std::abs(at - cdf(e.sorted[i])),
                  std::abs(cdf(std::nextafter(e.sorted[i], -INFINITY)) - below)});
    i = j;
  }
  return d;
}

double ks_two_sample(const McRun& a, const McRun& b) {
  const auto ea = empirical(a);
  const auto eb = empirical(b);
  std::size_t i = 0;
  std::size_t j = 0;
  auto fa = [&] { return (ea.at_minus_infinity + static_cast<double>(i)) / ea.total; };
  auto fb = [&] { return (eb.at_minus_infinity + static_cast<double>(j)) / eb.total; };
  double d = std::abs(fa() - fb());
  while (i < ea.sorted.size() || j < eb.sorted.size()) {
    const double x = std::min(i < ea.sorted.size() ? ea.sorted[i] : INFINITY,
                              j < eb.sorted.size() ? eb.sorted[j] : INFINITY);
    while (i < ea.sorted.size() && ea.sorted[i] <= x) ++i;
    while (j < eb.sorted.size() && eb.sorted[j] <= x) ++j;
    d = std::max(d, std::abs(fa() - fb()));
  }
  return d;
}

double mean_maximum(const McRun& run) {
  if (run.maxima.empty()) throw ParameterError("run has no recorded maxima");
  double sum = 0.0;
  for (double x : run.maxima) sum += x;
  return sum / static_cast<double>(run.maxima.size());
}

std::string to_json(const McRun& run, int indent) {
  nlohmann::ordered_json j;
  j["n"] = run.n;
  j["gamma"] = run.gamma;
  j["num_samples"] = run.num_samples;
  j["seed"] = run.seed;
  j["maxima"] = run.maxima;
  j["retained_counts"] = run.retained_counts;
  return j.dump(indent);
}

McRun from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  McRun run;
  run.n = j.at("n").get<int>();
  run.gamma = j.at("gamma").get<double>();
  run.num_samples = j.at("num_samples").get<int>();
  run.seed = j.at("seed").get<std::uint64_t>();
  run.maxima = j.at("maxima").get<std::vector<double>>();
  run.retained_counts = j.at("retained_counts").get<std::vector<int>>();
  return run;
}

}  // namespace ginedge::montecarlo
