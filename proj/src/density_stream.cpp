#include "mertens/density_stream.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "mertens/summation.hpp"

namespace mertens {
namespace {

// A prime whose local factor is undefined (bad elliptic reduction).
constexpr double kSkip = std::numeric_limits<double>::quiet_NaN();

struct SegmentTerms {
  std::vector<std::uint64_t> primes;
  std::vector<double> log_terms;
};

void evaluate_segment(const SegmentedSieve& sieve, const LocalFactor& factor, std::size_t index,
                      SegmentTerms& out) {
  out.primes.clear();
  out.log_terms.clear();
  sieve.sieve_segment(index, out.primes);
  out.log_terms.resize(out.primes.size());
  const bool elliptic = factor.spec().is_elliptic();
  for (std::size_t i = 0; i < out.primes.size(); ++i) {
    const auto p = out.primes[i];
    if (elliptic && !factor.spec().curve().good(p)) {
      out.log_terms[i] = kSkip;
    } else {
      out.log_terms[i] = factor.log_ratio(p);
    }
  }
}

class Accumulator {
 public:
  Accumulator(std::span<const double> thresholds, DensityProfile& profile)
      : thresholds_(thresholds), profile_(profile) {}

  void consume(const SegmentTerms& seg) {
    for (std::size_t i = 0; i < seg.primes.size(); ++i) {
      const auto p = static_cast<double>(seg.primes[i]);
      while (next_ < thresholds_.size() && thresholds_[next_] < p) emit();
      if (std::isnan(seg.log_terms[i])) {
        ++skipped_;
        profile_.bad_primes.push_back(seg.primes[i]);
      } else {
        sum_ += seg.log_terms[i];
        ++used_;
      }
    }
  }

  void finish() {
    while (next_ < thresholds_.size()) emit();
  }

 private:
  void emit() {
    const double log_density = sum_.value();
    profile_.checkpoints.push_back({thresholds_[next_], used_, skipped_, log_density, std::exp(log_density)});
    ++next_;
  }

  std::span<const double> thresholds_;
  DensityProfile& profile_;
  CompensatedSum sum_;
  std::uint64_t used_ = 0;
  std::uint64_t skipped_ = 0;
  std::size_t next_ = 0;
};

void validate(double t_max, std::span<const double> thresholds) {
  if (!(t_max >= 2.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument(fmt::format("density_profile: t_max must be >= 2, got {}", t_max));
  }
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double t = thresholds[i];
    if (!(t >= 2.0) || t > t_max || (i > 0 && !(t > thresholds[i - 1]))) {
      throw std::invalid_argument("density_profile: thresholds must increase within [2, t_max]");
    }
  }
}

}  // namespace

std::vector<double> geometric_schedule(double t_max, int per_decade, double t_start) {
  if (per_decade < 1) throw std::invalid_argument("geometric_schedule: per_decade must be >= 1");
  if (!(t_max >= 2.0)) throw std::invalid_argument("geometric_schedule: t_max must be >= 2");
  std::vector<double> out;
  const double e0 = std::log10(t_start);
  for (int k = 0;; ++k) {
    const double t = std::pow(10.0, e0 + static_cast<double>(k) / per_decade);
    if (t > t_max * (1.0 + 1e-12)) break;
    out.push_back(std::min(t, t_max));
  }
  if (out.empty() || out.back() < t_max) out.push_back(t_max);
  return out;
}

DensityProfile density_profile(const VarietySpec& spec, double t_max, std::span<const double> thresholds,
                               Execution exec, std::uint64_t segment_size) {
  validate(t_max, thresholds);
  DensityProfile profile{spec, t_max, {}, {}};
  profile.checkpoints.reserve(thresholds.size());

  const LocalFactor factor(spec);
  const SegmentedSieve sieve(static_cast<std::uint64_t>(std::floor(t_max)), segment_size);
  Accumulator acc(thresholds, profile);

  if (exec == Execution::serial) {
    SegmentTerms seg;
    for (std::size_t i = 0; i < sieve.segment_count(); ++i) {
      evaluate_segment(sieve, factor, i, seg);
      acc.consume(seg);
    }
  } else {
    // Batches of segments are evaluated concurrently, then reduced in order.
    const std::size_t batch = static_cast<std::size_t>(std::max(1, max_threads())) * 2;
    std::vector<SegmentTerms> terms(batch);
    for (std::size_t first = 0; first < sieve.segment_count(); first += batch) {
      const auto n = static_cast<std::int64_t>(std::min(batch, sieve.segment_count() - first));
#pragma omp parallel for schedule(dynamic)
      for (std::int64_t j = 0; j < n; ++j) {
        evaluate_segment(sieve, factor, first + static_cast<std::size_t>(j), terms[static_cast<std::size_t>(j)]);
      }
      for (std::int64_t j = 0; j < n; ++j) acc.consume(terms[static_cast<std::size_t>(j)]);
    }
  }
  acc.finish();
  return profile;
}

DensityProfile density_profile(const VarietySpec& spec, double t_max, int per_decade, Execution exec) {
  const auto schedule = geometric_schedule(t_max, per_decade);
  return density_profile(spec, t_max, schedule, exec);
}

std::vector<std::pair<double, double>> mertens_check(double t_max, int per_decade) {
  if (!(t_max >= 10.0)) throw std::invalid_argument("mertens_check: t_max must be >= 10");
  const auto profile = density_profile(VarietySpec::gl(1), t_max, per_decade);
  std::vector<std::pair<double, double>> out;
  out.reserve(profile.checkpoints.size());
  for (const auto& c : profile.checkpoints) out.emplace_back(c.t, c.density * std::log(c.t));
  return out;
}

}  // namespace mertens
