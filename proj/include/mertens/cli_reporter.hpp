#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mertens/density_stream.hpp"
#include "mertens/dh_analysis.hpp"
#include "mertens/serre_deviation.hpp"

namespace mertens::cli {

inline constexpr double kMaxBound = 1e9;
inline constexpr int kMaxCheckpointsPerDecade = 16;

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2 };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;  // density | fit | serre | ec | primes
  std::optional<std::string> spec;
  std::optional<std::string> curve;  // "a4,a6"
  std::optional<double> t_max;
  std::optional<double> p_max;
  std::optional<double> max;  // primes --max
  bool count = false;         // primes --count
  int checkpoints_per_decade = 4;
  std::optional<std::pair<double, double>> window;
  std::optional<std::string> output_path;
  std::optional<std::string> input_path;  // fit --in
  std::optional<unsigned> synthetic_d;    // serre --synthetic
};

// 12 significant digits, shortest form.
std::string format_number(double x);

// Accepts plain and scientific notation; throws UsageError.
double parse_number(const std::string& text, const std::string& flag);
std::pair<double, double> parse_pair(const std::string& text, const std::string& flag);

// Validates caps and per-command required flags; throws UsageError.
void validate(const RunConfig& config);

// "key=value" tokens for the header line.
std::string config_echo(const RunConfig& config);

void write_density_csv(const DensityProfile& profile, const RunConfig& config, std::ostream& out);
void write_fit_row(const DHFit& fit, const VarietySpec& spec, const RunConfig& config, std::ostream& out);
void write_deviation_csv(const DeviationReport& report, const RunConfig& config, bool elliptic_columns,
                         std::ostream& out);

struct DensityCsv {
  std::optional<VarietySpec> spec;
  std::vector<DensityCheckpoint> rows;
};

// Parses output of write_density_csv.
DensityCsv read_density_csv(std::istream& in);

// Executes a validated config; returns an ExitCode. Errors go to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (CLI11) and runs.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mertens::cli
