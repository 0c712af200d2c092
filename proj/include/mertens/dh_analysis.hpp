#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "mertens/density_stream.hpp"
#include "mertens/variety_catalog.hpp"

namespace mertens {

// Closed-form asymptotic ||X||_t ~ C (log t)^r.
struct DHPrediction {
  double C;
  int r;
};

// Least-squares estimate of (C, r) from log ||X||_t = log C + r log log t.
struct DHFit {
  static constexpr double kReliabilityBand = 0.3;

  double C_hat;
  double r_hat;
  int r_rounded;
  double residual_rms;
  double t_lo;
  double t_hi;
  std::size_t points;

  bool reliable() const;
};

bool has_prediction(const VarietySpec& spec);

// Throws UnsupportedError for elliptic curves.
DHPrediction predicted_dh(const VarietySpec& spec);

// Fits the checkpoints with t_lo <= t <= t_hi. Needs at least 3 points, all
// with t >= 3, and distinct log log t values; std::invalid_argument otherwise.
DHFit fit_dh(std::span<const DensityCheckpoint> profile, double t_lo, double t_hi);

struct DHReport {
  VarietySpec spec;
  DHPrediction prediction;
  DHFit fit;
  double rel_err_C;
  bool r_match;
  std::string verdict;  // "match", "mismatch" or "unreliable"
};

// Relative C error accepted by the "match" verdict.
inline constexpr double kReportTolerance = 0.05;

// Compares predicted_dh with fit_dh over [t_max / 100, t_max] unless a
// window is supplied.
DHReport dh_report(const VarietySpec& spec, double t_max, int per_decade = 4);
DHReport compare_with_prediction(const DensityProfile& profile, double t_lo, double t_hi);

}  // namespace mertens
