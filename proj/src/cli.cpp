#include "ginedge/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "ginedge/edgelaw.hpp"
#include "ginedge/errors.hpp"
#include "ginedge/identities.hpp"
#include "ginedge/montecarlo.hpp"
#include "ginedge/parallel.hpp"
#include "ginedge/tails.hpp"

namespace ginedge::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::map<std::string, Command> kCommandNames = {
    {"cdf", Command::cdf},     {"pdf", Command::pdf},   {"moments", Command::moments},
    {"tails", Command::tails}, {"mth", Command::mth},   {"gen", Command::gen},
    {"mc", Command::mc},       {"check", Command::check}, {"table1", Command::table1}};

constexpr const char* kColumns = R"(CSV columns (header row always written, 12 significant digits):
  cdf      gamma,t,cdf
  pdf      gamma,t,pdf
  moments  gamma,mean,variance,skewness,kurtosis,excess_kurtosis
  tails    gamma,t,exact,right_tail,left_tail
           then a blank line and gamma,c1,c0_integral,c0_series
  mth      t,F1,...,Fm
  gen      lambda,E
  mc       n,gamma,samples,seed,ks_distance,mean_maximum,empty_samples
  check    name,passed,lhs,rhs,abs_err,rel_err,tolerance,params
  table1   gamma,mean,variance,skewness,kurtosis,dev_mean,dev_variance,dev_skewness,
           dev_kurtosis,within (kurtosis in excess form; within is 1 when mean and
           variance deviate by at most 5e-4 and skewness and kurtosis by at most 5e-3)
Exit status: 0 ok, 1 invalid input, 2 numerical failure, 3 identity check failed.)";

// Reference moments of the edge law (kurtosis in excess form).
struct ReferenceRow {
  double gamma, mean, variance, skewness, kurtosis;
};
constexpr ReferenceRow kReferenceMoments[] = {
    {1.0, -1.30319, 3.97536, -1.76969, 5.14560},
    {0.8, -1.94070, 6.87453, -1.86716, 5.57883},
    {0.6, -2.99680, 13.49947, -2.02286, 8.06831},
    {0.4, -5.12526, 36.37796, -3.02040, 22.14125},
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// A rectangular numeric result with named columns.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << fmt(row[c]);
    out << '\n';
  }
}

ordered_json table_json(const Table& table) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json obj;
    for (std::size_t c = 0; c < row.size(); ++c) obj[table.columns[c]] = std::stod(fmt(row[c]));
    rows.push_back(std::move(obj));
  }
  return rows;
}

std::vector<double> t_grid(const CliConfig& c) {
  std::vector<double> ts;
  const auto count = static_cast<long>(std::floor((c.t_max - c.t_min) / c.t_step + 1e-9));
  for (long i = 0; i <= count; ++i) ts.push_back(c.t_min + static_cast<double>(i) * c.t_step);
  return ts;
}

std::vector<double> gammas(const CliConfig& c, std::vector<double> fallback) {
  return c.gamma.empty() ? fallback : c.gamma;
}

Format format_of(const CliConfig& c) {
  if (c.format) return *c.format;
  return (c.command == Command::mc || c.command == Command::check) ? Format::json : Format::csv;
}

Table curve(const CliConfig& c, bool density) {
  Table table{{"gamma", "t", density ? "pdf" : "cdf"}, {}};
  const auto ts = t_grid(c);
  for (double gamma : gammas(c, {1.0})) {
    std::vector<double> values(ts.size());
    parallel_for(ts.size(), c.workers, [&](std::size_t i) {
      values[i] = density ? edgelaw::pdf(ts[i], gamma, c.quad_points)
                          : edgelaw::cdf(ts[i], gamma, c.quad_points).cdf;
    });
    for (std::size_t i = 0; i < ts.size(); ++i) table.rows.push_back({gamma, ts[i], values[i]});
  }
  return table;
}

edgelaw::MomentSummary moments_for(const CliConfig& c, double gamma) {
  edgelaw::MomentOptions options;
  options.quad_points = c.quad_points;
  options.workers = c.workers;
  options.tail_threshold = c.tol;
  return edgelaw::moments(gamma, options);
}

Table moments_table(const CliConfig& c) {
  Table table{{"gamma", "mean", "variance", "skewness", "kurtosis", "excess_kurtosis"}, {}};
  for (double gamma : gammas(c, {1.0, 0.8, 0.6, 0.4})) {
    const auto m = moments_for(c, gamma);
    table.rows.push_back({gamma, m.mean, m.variance, m.skewness, m.kurtosis, m.excess_kurtosis});
  }
  return table;
}

std::pair<Table, Table> tails_tables(const CliConfig& c) {
  Table rows{{"gamma", "t", "exact", "right_tail", "left_tail"}, {}};
  Table coef{{"gamma", "c1", "c0_integral", "c0_series"}, {}};
  const auto ts = t_grid(c);
  for (double gamma : gammas(c, {0.5, 1.0})) {
    std::vector<double> exact(ts.size());
    parallel_for(ts.size(), c.workers, [&](std::size_t i) {
      exact[i] = edgelaw::cdf(ts[i], gamma, c.quad_points).cdf;
    });
    for (std::size_t i = 0; i < ts.size(); ++i)
      rows.rows.push_back({gamma, ts[i], exact[i], tails::right_tail(ts[i], gamma),
                           tails::left_tail(ts[i], gamma)});
    const auto k = tails::coefficients(gamma);
    coef.rows.push_back({gamma, k.c1, k.c0_integral, k.c0_series});
  }
  return {rows, coef};
}

Table mth_table(const CliConfig& c) {
  Table table{{"t"}, {}};
  for (int k = 1; k <= c.m; ++k) table.columns.push_back("F" + std::to_string(k));
  const auto ts = t_grid(c);
  std::vector<std::vector<double>> values(ts.size());
  edgelaw::MthLargestOptions options;
  options.quad_points = c.quad_points;
  parallel_for(ts.size(), c.workers,
               [&](std::size_t i) { values[i] = edgelaw::largest_cdfs(c.m, ts[i], options); });
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::vector<double> row{ts[i]};
    row.insert(row.end(), values[i].begin(), values[i].end());
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table gen_table(const CliConfig& c) {
  Table table{{"lambda", "E"}, {}};
  const auto count = static_cast<long>(std::floor(1.0 / c.lambda_step + 1e-9));
  std::vector<double> lambdas;
  for (long i = 0; i <= count; ++i) lambdas.push_back(std::min(1.0, static_cast<double>(i) * c.lambda_step));
  std::vector<double> values(lambdas.size());
  parallel_for(lambdas.size(), c.workers, [&](std::size_t i) {
    values[i] = edgelaw::generating_function(c.t, lambdas[i], c.quad_points);
  });
  for (std::size_t i = 0; i < lambdas.size(); ++i) table.rows.push_back({lambdas[i], values[i]});
  return table;
}

int run_mc(const CliConfig& c, std::ostream& out) {
  ordered_json runs = ordered_json::array();
  Table table{{"n", "gamma", "samples", "seed", "ks_distance", "mean_maximum", "empty_samples"}, {}};
  const auto gs = gammas(c, {1.0});
  const auto eigenvalues =
      montecarlo::sample_real_eigenvalues(c.matrix_size, c.samples, c.seed, c.workers);
  for (double gamma : gs) {
    const auto run = montecarlo::thin_run(eigenvalues, c.matrix_size, gamma, c.seed);
    const double ks = montecarlo::ks_distance(
        run, [&](double t) { return edgelaw::cdf(t, gamma, c.quad_points).cdf; });
    const double mean = run.maxima.empty() ? std::nan("") : montecarlo::mean_maximum(run);
    table.rows.push_back({static_cast<double>(run.n), gamma, static_cast<double>(run.num_samples),
                          static_cast<double>(run.seed), ks, mean,
                          static_cast<double>(run.empty_samples())});
    ordered_json j = ordered_json::parse(montecarlo::to_json(run));
    j["ks_distance"] = ks;
    if (!run.maxima.empty()) j["mean_maximum"] = mean;
    j["empty_samples"] = run.empty_samples();
    runs.push_back(std::move(j));
  }
  if (format_of(c) == Format::json) {
    ordered_json doc;
    doc["runs"] = std::move(runs);
    out << doc.dump(2) << '\n';
  } else {
    write_csv(table, out);
  }
  return kExitOk;
}

int run_check(const CliConfig& c, std::ostream& out, std::ostream& err) {
  identities::Grid grid;
  if (c.grid == "default") {
    grid = identities::default_grid();
  } else if (c.grid == "quick") {
    grid = identities::quick_grid();
  } else {
    throw ParameterError("--grid must be 'default' or 'quick'");
  }
  if (!c.gamma.empty()) grid.gamma = c.gamma;
  const auto entries = identities::run_suite(grid, c.quad_points, c.workers);
  int failed = 0;
  const bool json = format_of(c) == Format::json;
  if (!json) out << "name,passed,lhs,rhs,abs_err,rel_err,tolerance,params\n";
  for (const auto& e : entries) {
    if (!e.passed) ++failed;
    if (json) {
      ordered_json j;
      j["name"] = e.report.name;
      j["passed"] = e.passed;
      j["lhs"] = e.report.lhs;
      j["rhs"] = e.report.rhs;
      j["abs_err"] = e.report.abs_err;
      j["rel_err"] = e.report.rel_err;
      j["tolerance"] = e.tolerance;
      j["relative"] = e.relative;
      j["params"] = e.report.params;
      out << j.dump() << '\n';
    } else {
      std::string params;
      for (const auto& [k, v] : e.report.params) params += (params.empty() ? "" : ";") + k + "=" + fmt(v);
      out << e.report.name << ',' << (e.passed ? "pass" : "FAIL") << ',' << fmt(e.report.lhs) << ','
          << fmt(e.report.rhs) << ',' << fmt(e.report.abs_err) << ',' << fmt(e.report.rel_err) << ','
          << fmt(e.tolerance) << ',' << params << '\n';
    }
  }
  err << entries.size() - failed << "/" << entries.size() << " identities within tolerance\n";
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

Table table1(const CliConfig& c) {
  Table table{{"gamma", "mean", "variance", "skewness", "kurtosis", "dev_mean", "dev_variance",
               "dev_skewness", "dev_kurtosis", "within"},
              {}};
  const double tolerance[4] = {5e-4, 5e-4, 5e-3, 5e-3};
  for (const auto& ref : kReferenceMoments) {
    if (!c.gamma.empty() &&
        std::none_of(c.gamma.begin(), c.gamma.end(),
                     [&](double g) { return std::abs(g - ref.gamma) < 1e-12; }))
      continue;
    const auto m = moments_for(c, ref.gamma);
    const double computed[4] = {m.mean, m.variance, m.skewness, m.excess_kurtosis};
    const double reference[4] = {ref.mean, ref.variance, ref.skewness, ref.kurtosis};
    std::vector<double> row{ref.gamma, computed[0], computed[1], computed[2], computed[3]};
    bool within = true;
    for (int q = 0; q < 4; ++q) {
      row.push_back(computed[q] - reference[q]);
      within = within && std::abs(computed[q] - reference[q]) <= tolerance[q];
    }
    row.push_back(within ? 1.0 : 0.0);
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw ParameterError("--gamma selects no reference row (1, 0.8, 0.6, 0.4)");
  return table;
}

void emit(const CliConfig& c, const Table& table, std::ostream& out) {
  if (format_of(c) == Format::json)
    out << table_json(table).dump(2) << '\n';
  else
    write_csv(table, out);
}

int dispatch(const CliConfig& c, std::ostream& out, std::ostream& err) {
  switch (c.command) {
    case Command::cdf:
      emit(c, curve(c, false), out);
      return kExitOk;
    case Command::pdf:
      emit(c, curve(c, true), out);
      return kExitOk;
    case Command::moments:
      emit(c, moments_table(c), out);
      return kExitOk;
    case Command::tails: {
      const auto [rows, coef] = tails_tables(c);
      if (format_of(c) == Format::json) {
        ordered_json doc;
        doc["rows"] = table_json(rows);
        doc["coefficients"] = table_json(coef);
        out << doc.dump(2) << '\n';
      } else {
        write_csv(rows, out);
        out << '\n';
        write_csv(coef, out);
      }
      return kExitOk;
    }
    case Command::mth:
      emit(c, mth_table(c), out);
      return kExitOk;
    case Command::gen:
      emit(c, gen_table(c), out);
      return kExitOk;
    case Command::mc:
      return run_mc(c, out);
    case Command::check:
      return run_check(c, out, err);
    case Command::table1:
      emit(c, table1(c), out);
      return kExitOk;
  }
  return kExitValidation;
}

int default_quad_points() {
  if (const char* env = std::getenv(kQuadPointsEnv)) {
    try {
      std::size_t used = 0;
      const int value = std::stoi(env, &used);
      if (used == std::string(env).size() && value >= 2) return value;
    } catch (const std::exception&) {
    }
    throw ParameterError(std::string(kQuadPointsEnv) + " must be an integer >= 2");
  }
  return 50;
}

}  // namespace

void validate(const CliConfig& c) {
  if (!(c.t_min < c.t_max)) throw ParameterError("--t-min must be below --t-max");
  if (!(c.t_step > 0.0)) throw ParameterError("--t-step must be positive");
  if ((c.t_max - c.t_min) / c.t_step > 1e6) throw ParameterError("--t-step gives too many points");
  for (double g : c.gamma)
    if (!(g >= 0.0 && g <= 1.0)) throw ParameterError("--gamma values must lie in [0, 1]");
  if (c.quad_points < 2) throw ParameterError("--quad-points must be at least 2");
  if (!(c.tol > 0.0 && c.tol < 1.0)) throw ParameterError("--tol must lie in (0, 1)");
  if (c.matrix_size < 2 || c.matrix_size > 1000)
    throw ParameterError("--matrix-size must lie in [2, 1000]");
  if (c.samples < 1) throw ParameterError("--samples must be positive");
  if (c.workers < 1) throw ParameterError("--workers must be positive");
  if (c.m < 1 || c.m > 4) throw ParameterError("--m must lie in [1, 4]");
  if (!(c.lambda_step > 0.0 && c.lambda_step <= 1.0))
    throw ParameterError("--lambda-step must lie in (0, 1]");
  if (!std::isfinite(c.t)) throw ParameterError("--t must be finite");
}

ParseOutcome parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig c;
  try {
    c.quad_points = default_quad_points();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return {std::nullopt, kExitValidation};
  }

  CLI::App app{"Edge law of the largest real eigenvalue in the thinned real Ginibre ensemble"};
  app.footer(kColumns);
  app.require_subcommand(1);

  std::string format;
  app.add_option("--gamma", c.gamma, "Thinning parameter(s) in [0,1], comma separated")
      ->delimiter(',');
  app.add_option("--t-min", c.t_min, "Left end of the t grid")->capture_default_str();
  app.add_option("--t-max", c.t_max, "Right end of the t grid")->capture_default_str();
  app.add_option("--t-step", c.t_step, "Spacing of the t grid")->capture_default_str();
  app.add_option("--quad-points", c.quad_points,
                 std::string("Nystrom nodes per 10 units of half-line (env ") + kQuadPointsEnv + ")")
      ->capture_default_str();
  app.add_option("--tol", c.tol, "Left-tail threshold ending moment integration")
      ->capture_default_str();
  app.add_option("--seed", c.seed, "Monte Carlo seed")->capture_default_str();
  app.add_option("--matrix-size", c.matrix_size, "Monte Carlo matrix dimension n")
      ->capture_default_str();
  app.add_option("--samples", c.samples, "Monte Carlo sample count")->capture_default_str();
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", c.output, "Write results to this file instead of stdout");
  app.add_option("--workers", c.workers, "Worker threads")->capture_default_str();
  app.add_option("--grid", c.grid, "Identity grid for check: default or quick")
      ->check(CLI::IsMember({"default", "quick"}))
      ->capture_default_str();
  app.add_option("--t", c.t, "Point t for gen")->capture_default_str();
  app.add_option("--m", c.m, "Number of largest eigenvalues for mth")->capture_default_str();
  app.add_option("--lambda-step", c.lambda_step, "lambda spacing for gen")->capture_default_str();

  const std::map<std::string, std::string> help = {
      {"cdf", "P(t;gamma) on the t grid"},
      {"pdf", "density of P(t;gamma) on the t grid"},
      {"moments", "mean, variance, skewness and kurtosis"},
      {"tails", "exact law against both tail expansions, and the tail constants"},
      {"mth", "laws of the m largest eigenvalues"},
      {"gen", "generating function E((t,inf);lambda) on a lambda grid"},
      {"mc", "Monte Carlo sampling with KS distance to the exact law"},
      {"check", "operator and integral identity suite"},
      {"table1", "reference moment table with deviations"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, text] : help) {
    auto* sub = app.add_subcommand(name, text);
    sub->fallthrough();
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return {std::nullopt, app.exit(e, out, err)};
  } catch (const CLI::CallForAllHelp& e) {
    return {std::nullopt, app.exit(e, out, err)};
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return {std::nullopt, kExitValidation};
  }
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) c.command = kCommandNames.at(name);
  if (!format.empty()) c.format = format == "json" ? Format::json : Format::csv;
  return {c, kExitOk};
}

int run_command(const CliConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    if (config.output.empty()) return dispatch(config, out, err);
    std::ostringstream buffer;
    const int status = dispatch(config, buffer, err);
    std::ofstream file(config.output, std::ios::binary);
    if (!file) throw ParameterError("cannot open --output file " + config.output);
    file << buffer.str();
    return status;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int main_entry(int argc, const char* const* argv) {
  const auto parsed = parse(argc, argv, std::cout, std::cerr);
  if (!parsed.config) return parsed.exit_code;
  return run_command(*parsed.config, std::cout, std::cerr);
}

}  // namespace ginedge::cli
