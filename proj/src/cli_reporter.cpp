#include "mertens/cli_reporter.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mertens/errors.hpp"
#include "mertens/prime_engine.hpp"

namespace mertens::cli {
namespace {

constexpr const char* kDensityColumns = "t,primes_used,skipped_bad,log_density,density,scaled_density";
constexpr const char* kFitColumns = "spec,C_pred,r_pred,C_hat,r_hat,r_rounded,rel_err_C,residual_rms,verdict";
constexpr const char* kSerreColumns = "p,ratio,b,theta";
constexpr const char* kEcColumns = "p,a,ratio,b,theta";

VarietySpec parse_spec_or_usage(const std::string& text) {
  try {
    return parse_spec(text);
  } catch (const std::invalid_argument& e) {
    const std::string message = e.what();
    if (message.find(kSpecGrammar) != std::string::npos) throw UsageError(message);
    throw UsageError(fmt::format("{} (grammar: {})", message, kSpecGrammar));
  }
}

VarietySpec spec_for(const RunConfig& config) {
  if (config.command == "ec") return parse_spec_or_usage("ec:" + *config.curve);
  return parse_spec_or_usage(*config.spec);
}

void require(bool condition, const std::string& message) {
  if (!condition) throw UsageError(message);
}

void check_bound(const std::optional<double>& value, const char* flag, double lo) {
  if (!value) return;
  require(std::isfinite(*value) && *value >= lo, fmt::format("{} must be >= {}", flag, format_number(lo)));
  require(*value <= kMaxBound, fmt::format("{} exceeds the cap of {}", flag, format_number(kMaxBound)));
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::uint64_t parse_count(const std::string& text) {
  std::size_t used = 0;
  const auto value = std::stoull(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad integer field: " + text);
  return value;
}

class OutputTarget {
 public:
  OutputTarget(const std::optional<std::string>& path, std::ostream& fallback) {
    if (!path) {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(*path);
    if (!*file_) throw std::runtime_error("cannot open output file " + *path);
    stream_ = file_.get();
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

// RFC 4180 quoting for fields such as "gr:4,2".
std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"") == std::string::npos) return text;
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

void write_header(const char* columns, const RunConfig& config, std::ostream& out) {
  out << "# columns=" << columns << ' ' << config_echo(config) << '\n';
}

void write_deviation_footer(const DeviationReport& report, bool elliptic, std::ostream& out) {
  out << "# empirical_B=" << format_number(report.empirical_B) << '\n';
  out << "# signs: positive=" << report.signs.positive << " zero=" << report.signs.zero
      << " negative=" << report.signs.negative << '\n';
  out << "# samples=" << report.samples.size() << " skipped_bad=" << report.skipped_bad.size() << '\n';
  if (!elliptic) return;
  bool hasse = true;
  bool window = true;
  for (const auto& s : report.samples) {
    const auto a = *s.trace;
    hasse = hasse && static_cast<std::uint64_t>(a * a) <= 4 * s.p;
    window = window && s.b > -2.0 && s.b < 3.0;
  }
  out << "# hasse_bound_ok: " << (hasse ? "true" : "false") << '\n';
  out << "# all_good_b_in_(-2,3): " << (window ? "true" : "false") << '\n';
}

int run_density(const RunConfig& config, std::ostream& out) {
  const auto spec = spec_for(config);
  const auto profile = density_profile(spec, *config.t_max, config.checkpoints_per_decade);
  write_density_csv(profile, config, out);
  return kOk;
}

int run_fit(const RunConfig& config, std::ostream& out) {
  VarietySpec spec = VarietySpec::circle();
  std::vector<DensityCheckpoint> rows;
  if (config.input_path) {
    std::ifstream in(*config.input_path);
    if (!in) throw std::runtime_error("cannot open input file " + *config.input_path);
    auto csv = read_density_csv(in);
    if (!csv.spec) throw std::runtime_error("input file has no spec= entry in its header");
    spec = *csv.spec;
    rows = std::move(csv.rows);
  } else {
    spec = spec_for(config);
    rows = density_profile(spec, *config.t_max, config.checkpoints_per_decade).checkpoints;
  }
  if (rows.empty()) throw std::runtime_error("no density checkpoints to fit");
  const double t_hi = config.window ? config.window->second : rows.back().t;
  const double t_lo = config.window ? config.window->first : t_hi / 100.0;
  const auto fit = fit_dh(rows, t_lo, t_hi);
  write_fit_row(fit, spec, config, out);
  return kOk;
}

int run_serre(const RunConfig& config, std::ostream& out) {
  if (config.synthetic_d) {
    write_deviation_csv(scan_synthetic(*config.synthetic_d, *config.p_max), config, false, out);
    return kOk;
  }
  const auto spec = spec_for(config);
  write_deviation_csv(scan_deviations(spec, *config.p_max), config, spec.is_elliptic(), out);
  return kOk;
}

int run_primes(const RunConfig& config, std::ostream& out) {
  const auto limit = static_cast<std::uint64_t>(*config.max);
  if (config.count) {
    write_header("count", config, out);
    out << prime_count(limit) << '\n';
    return kOk;
  }
  write_header("p", config, out);
  PrimeStream stream(limit);
  for (const auto p : stream) out << p << '\n';
  return kOk;
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) return "0";  // folds -0
  return fmt::format("{:.12g}", x);
}

double parse_number(const std::string& text, const std::string& flag) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError(fmt::format("{}: '{}' is not a number", flag, text));
  }
  if (used != text.size()) throw UsageError(fmt::format("{}: '{}' is not a number", flag, text));
  return value;
}

std::pair<double, double> parse_pair(const std::string& text, const std::string& flag) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw UsageError(fmt::format("{}: expected lo,hi, got '{}'", flag, text));
  return {parse_number(parts[0], flag), parse_number(parts[1], flag)};
}

void validate(const RunConfig& config) {
  const auto& cmd = config.command;
  require(cmd == "density" || cmd == "fit" || cmd == "serre" || cmd == "ec" || cmd == "primes",
          "unknown command '" + cmd + "'");
  require(config.checkpoints_per_decade >= 1 && config.checkpoints_per_decade <= kMaxCheckpointsPerDecade,
          fmt::format("--checkpoints-per-decade must be in [1, {}]", kMaxCheckpointsPerDecade));
  check_bound(config.t_max, "--tmax", 2.0);
  check_bound(config.p_max, "--pmax", 5.0);
  check_bound(config.max, "--max", 0.0);

  if (cmd == "density") {
    require(config.spec && config.t_max, "density requires --spec and --tmax");
  } else if (cmd == "fit") {
    require(config.input_path || (config.spec && config.t_max), "fit requires --in PATH, or --spec and --tmax");
  } else if (cmd == "serre") {
    require(config.p_max.has_value(), "serre requires --pmax");
    require(config.spec.has_value() != config.synthetic_d.has_value(), "serre requires exactly one of --spec, --synthetic");
  } else if (cmd == "ec") {
    require(config.curve && config.p_max, "ec requires --curve and --pmax");
  } else {
    require(config.max.has_value(), "primes requires --max");
    require(std::floor(*config.max) == *config.max, "--max must be an integer");
  }
  if (config.window) {
    require(config.window->first >= 3.0 && config.window->first < config.window->second,
            "--window must satisfy 3 <= lo < hi");
  }
  if (config.spec || config.curve) static_cast<void>(spec_for(config));
}

std::string config_echo(const RunConfig& config) {
  std::string echo = "command=" + config.command;
  if (config.spec) echo += " spec=" + *config.spec;
  if (config.curve) echo += " curve=" + *config.curve;
  if (config.synthetic_d) echo += fmt::format(" synthetic={}", *config.synthetic_d);
  if (config.t_max) echo += " tmax=" + format_number(*config.t_max);
  if (config.p_max) echo += " pmax=" + format_number(*config.p_max);
  if (config.max) echo += " max=" + format_number(*config.max);
  if (config.command == "primes") echo += config.count ? " count=true" : " count=false";
  if (config.command == "density" || (config.command == "fit" && !config.input_path)) {
    echo += fmt::format(" checkpoints_per_decade={}", config.checkpoints_per_decade);
  }
  if (config.window) {
    echo += " window=" + format_number(config.window->first) + "," + format_number(config.window->second);
  }
  if (config.input_path) echo += " in=" + *config.input_path;
  return echo;
}

void write_density_csv(const DensityProfile& profile, const RunConfig& config, std::ostream& out) {
  // scaled_density = density * (log t)^(-r_pred): flat at C when the prediction holds.
  std::optional<int> r_pred;
  if (has_prediction(profile.spec)) r_pred = predicted_dh(profile.spec).r;
  RunConfig echo = config;
  echo.spec = to_string(profile.spec);
  echo.curve.reset();
  write_header(kDensityColumns, echo, out);
  for (const auto& c : profile.checkpoints) {
    out << format_number(c.t) << ',' << c.primes_used << ',' << c.skipped_bad << ','
        << format_number(c.log_density) << ',' << format_number(c.density) << ',';
    if (r_pred) out << format_number(c.density * std::pow(std::log(c.t), -*r_pred));
    out << '\n';
  }
}

void write_fit_row(const DHFit& fit, const VarietySpec& spec, const RunConfig& config, std::ostream& out) {
  RunConfig echo = config;
  echo.window = std::make_pair(fit.t_lo, fit.t_hi);
  write_header(kFitColumns, echo, out);
  out << csv_field(to_string(spec)) << ',';
  if (has_prediction(spec)) {
    const auto pred = predicted_dh(spec);
    const double rel = std::fabs(fit.C_hat - pred.C) / pred.C;
    std::string verdict = !fit.reliable() ? "unreliable"
                          : (fit.r_rounded == pred.r && rel <= kReportTolerance) ? "match"
                                                                                  : "mismatch";
    out << format_number(pred.C) << ',' << pred.r << ',' << format_number(fit.C_hat) << ','
        << format_number(fit.r_hat) << ',' << fit.r_rounded << ',' << format_number(rel) << ','
        << format_number(fit.residual_rms) << ',' << verdict << '\n';
  } else {
    out << ",," << format_number(fit.C_hat) << ',' << format_number(fit.r_hat) << ',' << fit.r_rounded << ",,"
        << format_number(fit.residual_rms) << ",no-prediction\n";
  }
}

void write_deviation_csv(const DeviationReport& report, const RunConfig& config, bool elliptic_columns,
                         std::ostream& out) {
  write_header(elliptic_columns ? kEcColumns : kSerreColumns, config, out);
  for (const auto& s : report.samples) {
    out << s.p << ',';
    if (elliptic_columns) out << *s.trace << ',';
    out << format_number(s.ratio) << ',' << format_number(s.b) << ',';
    if (s.theta) out << format_number(*s.theta);
    out << '\n';
  }
  write_deviation_footer(report, elliptic_columns, out);
}

DensityCsv read_density_csv(std::istream& in) {
  DensityCsv csv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream tokens(line.substr(1));
      std::string token;
      while (tokens >> token) {
        if (token.rfind("spec=", 0) == 0) csv.spec = parse_spec(token.substr(5));
      }
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 6) throw std::runtime_error("malformed density row: " + line);
    csv.rows.push_back(DensityCheckpoint{std::stod(fields[0]), parse_count(fields[1]), parse_count(fields[2]),
                                         std::stod(fields[3]), std::stod(fields[4])});
  }
  return csv;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    OutputTarget target(config.output_path, out);
    auto& os = target.stream();
    if (config.command == "density") return run_density(config, os);
    if (config.command == "fit") return run_fit(config, os);
    if (config.command == "serre" || config.command == "ec") return run_serre(config, os);
    return run_primes(config, os);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prime-indexed density products, density-hypothesis fits and Serre deviations"};
  app.require_subcommand(1);

  RunConfig config;
  std::string spec, curve, tmax, pmax, max, window, output, input;
  unsigned synthetic = 0;

  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", output, "Write to PATH instead of stdout"); };
  auto add_cpd = [&](CLI::App* sub) {
    sub->add_option("--checkpoints-per-decade", config.checkpoints_per_decade, "Geometric schedule density");
  };

  auto* density = app.add_subcommand("density", "Stream ||X||_t over the primes and emit checkpoints");
  density->add_option("--spec", spec, std::string("Variety: ") + std::string(kSpecGrammar));
  density->add_option("--tmax", tmax, "Largest threshold t");
  add_cpd(density);
  add_out(density);

  auto* fit = app.add_subcommand("fit", "Fit (C, r) to a density profile and compare with the prediction");
  fit->add_option("--spec", spec, "Variety spec (inline run)");
  fit->add_option("--tmax", tmax, "Largest threshold t (inline run)");
  fit->add_option("--in", input, "Density CSV produced by the density command");
  fit->add_option("--window", window, "Fit window lo,hi (default tmax/100,tmax)");
  add_cpd(fit);
  add_out(fit);

  auto* serre = app.add_subcommand("serre", "Scan b(p) = sqrt(p) (A(p)/p^d - 1) over primes");
  serre->add_option("--spec", spec, "Variety spec");
  serre->add_option("--synthetic", synthetic, "Scan A(p) = p^d + p^(d-1/3) for this d instead");
  serre->add_option("--pmax", pmax, "Largest prime scanned");
  add_out(serre);

  auto* ec = app.add_subcommand("ec", "Trace of Frobenius and b(p) window for y^2 = x^3 + a4 x + a6");
  ec->add_option("--curve", curve, "a4,a6");
  ec->add_option("--pmax", pmax, "Largest prime scanned");
  add_out(ec);

  auto* primes = app.add_subcommand("primes", "List or count primes");
  primes->add_option("--max", max, "Inclusive upper bound");
  primes->add_flag("--count", config.count, "Print only the count");
  add_out(primes);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    config.command = app.get_subcommands().front()->get_name();
    auto* sub = app.get_subcommands().front();
    auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
    if (given("--spec")) config.spec = spec;
    if (given("--curve")) config.curve = curve;
    if (given("--tmax")) config.t_max = parse_number(tmax, "--tmax");
    if (given("--pmax")) config.p_max = parse_number(pmax, "--pmax");
    if (given("--max")) config.max = parse_number(max, "--max");
    if (given("--window")) config.window = parse_pair(window, "--window");
    if (given("--out")) config.output_path = output;
    if (given("--in")) config.input_path = input;
    if (given("--synthetic")) config.synthetic_d = synthetic;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }
  return run(config, out, err);
}

}  // namespace mertens::cli
