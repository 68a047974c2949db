#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ginedge::cli {

enum class Command { cdf, pdf, moments, tails, mth, gen, mc, check, table1 };
enum class Format { csv, json };

/// Exit statuses of the tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitCheckFailed = 3;

/// Environment variable that overrides the default quad_points.
inline constexpr const char* kQuadPointsEnv = "GINEDGE_QUAD_POINTS";

struct CliConfig {
  Command command = Command::cdf;
  std::vector<double> gamma;  ///< empty: the command's default set
  double t_min = -8.0;
  double t_max = 4.0;
  double t_step = 0.5;
  int quad_points = 50;
  double tol = 1e-14;  ///< tail threshold that fixes the lower end of moment integration
  std::uint64_t seed = 1;
  int matrix_size = 100;
  int samples = 5000;
  std::optional<Format> format;  ///< default: json for mc and check, csv otherwise
  std::string output;            ///< empty: stdout
  int workers = 1;
  std::string grid = "default";
  double t = 0.0;  ///< gen: the point t
  int m = 2;       ///< mth: how many of the largest eigenvalues
  double lambda_step = 0.05;
};

/// Parses argv. On --help or a usage error, writes to out/err and returns the exit status
/// in `exit_code` with no config.
struct ParseOutcome {
  std::optional<CliConfig> config;
  int exit_code = kExitOk;
};
ParseOutcome parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Checks the invariants of a config (ranges, t_min < t_max, ...); throws ParameterError.
void validate(const CliConfig& config);

/// Runs one command, writing results to out (or config.output) and diagnostics to err.
int run_command(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse + run_command.
int main_entry(int argc, const char* const* argv);

}  // namespace ginedge::cli
