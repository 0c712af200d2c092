#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mertens/execution.hpp"
#include "mertens/prime_engine.hpp"
#include "mertens/variety_catalog.hpp"

namespace mertens {

// One sample of the prime-indexed density product at threshold t.
struct DensityCheckpoint {
  double t;
  std::uint64_t primes_used;   // primes p <= t that contributed a factor
  std::uint64_t skipped_bad;   // primes p <= t skipped as bad (elliptic only)
  double log_density;          // sum_{p <= t} log(|X(F_p)| / p^d)
  double density;              // exp(log_density)
};

struct DensityProfile {
  VarietySpec spec;
  double t_max;
  std::vector<DensityCheckpoint> checkpoints;
  std::vector<std::uint64_t> bad_primes;  // side channel for elliptic specs
};

inline constexpr double kScheduleStart = 100.0;

// Thresholds 10^(2 + k / per_decade) that are <= t_max, followed by t_max
// itself when it is not already on the grid. For t_max < 100 the schedule
// is just {t_max}.
std::vector<double> geometric_schedule(double t_max, int per_decade = 4,
                                       double t_start = kScheduleStart);

// Streams log_local_ratio over the primes <= t_max in ascending order and
// accumulates with compensated summation, emitting one checkpoint per
// threshold. thresholds must be strictly increasing and lie in [2, t_max].
// The parallel path evaluates local ratios for several segments
// concurrently; the reduction is always in ascending prime order, so both
// paths give bit-identical results.
DensityProfile density_profile(const VarietySpec& spec, double t_max,
                               std::span<const double> thresholds,
                               Execution exec = Execution::parallel,
                               std::uint64_t segment_size = kDefaultSegmentSize);

DensityProfile density_profile(const VarietySpec& spec, double t_max, int per_decade = 4,
                               Execution exec = Execution::parallel);

// (t, prod_{p<=t}(1 - 1/p) * log t) on the default schedule; tends to exp(-gamma).
std::vector<std::pair<double, double>> mertens_check(double t_max, int per_decade = 4);

}  // namespace mertens
