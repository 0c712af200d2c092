#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mertens/execution.hpp"
#include "mertens/variety_catalog.hpp"

namespace mertens {

// A(p)/p^d = 1 + b/sqrt(p).
struct DeviationSample {
  std::uint64_t p;
  double ratio;
  double b;
  std::optional<double> theta;        // Frobenius angle in [0, pi], elliptic only
  std::optional<std::int64_t> trace;  // a(p), elliptic only
};

struct SignSummary {
  std::size_t positive = 0;
  std::size_t zero = 0;
  std::size_t negative = 0;
};

struct DeviationReport {
  std::string tag;  // spec text, or "synthetic:d"
  std::vector<DeviationSample> samples;
  double empirical_B = 0.0;  // max |b| over the samples
  SignSummary signs;
  std::vector<std::uint64_t> skipped_bad;
};

double b_deviation(double ratio, std::uint64_t p);

// Closed forms exist for proj:n, affine:n, gl:1, gl:2 and sl:2.
bool has_closed_form_b(const VarietySpec& spec);
// Throws UnsupportedError for other specs.
double closed_form_b(const VarietySpec& spec, std::uint64_t p);

// b(p) for A(p) = p^d + p^(d - 1/3), which is p^(1/6) for every d.
double synthetic_unbounded_b(unsigned d, std::uint64_t p);

// Throws BadReductionError at bad p.
DeviationSample ec_b_and_theta(const EcCurve& curve, std::uint64_t p);

// Tolerance for the per-sample closed-form cross-check in scan_deviations.
inline constexpr double kClosedFormTolerance = 1e-10;

// Samples every prime <= p_max (good primes only for elliptic specs) through
// the generic b_deviation path. Samples with a closed form are cross-checked
// and an InternalConsistencyError is raised on disagreement.
DeviationReport scan_deviations(const VarietySpec& spec, double p_max,
                                Execution exec = Execution::parallel);

DeviationReport scan_synthetic(unsigned d, double p_max);

// Recomputes empirical_B and signs from samples.
void summarize(DeviationReport& report);

}  // namespace mertens
