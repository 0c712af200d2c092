#include "mertens/serre_deviation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include <fmt/format.h>

#include "mertens/errors.hpp"
#include "mertens/prime_engine.hpp"

namespace mertens {

double b_deviation(double ratio, std::uint64_t p) {
  return std::sqrt(static_cast<double>(p)) * (ratio - 1.0);
}

bool has_closed_form_b(const VarietySpec& spec) {
  const auto& k = spec.kind();
  if (std::holds_alternative<variety::Projective>(k) || std::holds_alternative<variety::Affine>(k)) return true;
  if (const auto* gl = std::get_if<variety::GeneralLinear>(&k)) return gl->n <= 2;
  if (const auto* sl = std::get_if<variety::SpecialLinear>(&k)) return sl->n == 2;
  return false;
}

double closed_form_b(const VarietySpec& spec, std::uint64_t p) {
  if (!has_closed_form_b(spec)) {
    throw UnsupportedError(fmt::format("no closed-form b(p) for {}", to_string(spec)));
  }
  const double pd = static_cast<double>(p);
  const double rp = std::sqrt(pd);
  const auto& k = spec.kind();
  if (const auto* proj = std::get_if<variety::Projective>(&k)) {
    const double q = 1.0 / pd;
    return (1.0 / rp) * (1.0 - std::pow(q, proj->n)) / (1.0 - q);
  }
  if (std::holds_alternative<variety::Affine>(k)) return 0.0;
  if (const auto* gl = std::get_if<variety::GeneralLinear>(&k)) {
    if (gl->n == 1) return -1.0 / rp;
    return -1.0 / rp - 1.0 / (pd * rp) + 1.0 / (pd * pd * rp);
  }
  return -1.0 / (pd * rp);  // sl:2
}

double synthetic_unbounded_b(unsigned d, std::uint64_t p) {
  // sqrt(p) * ((p^d + p^(d - 1/3)) / p^d - 1); the p^d cancels.
  static_cast<void>(d);
  return std::pow(static_cast<double>(p), 1.0 / 6.0);
}

DeviationSample ec_b_and_theta(const EcCurve& curve, std::uint64_t p) {
  const auto a = ec_trace(curve, p);
  const double pd = static_cast<double>(p);
  const double rp = std::sqrt(pd);
  const double theta = std::acos(std::clamp(static_cast<double>(a) / (2.0 * rp), -1.0, 1.0));
  const double ratio = static_cast<double>(static_cast<std::int64_t>(p + 1) - a) / pd;
  return DeviationSample{p, ratio, 1.0 / rp - 2.0 * std::cos(theta), theta, a};
}

void summarize(DeviationReport& report) {
  report.empirical_B = 0.0;
  report.signs = {};
  for (const auto& s : report.samples) {
    report.empirical_B = std::max(report.empirical_B, std::fabs(s.b));
    if (s.b > 0.0) {
      ++report.signs.positive;
    } else if (s.b < 0.0) {
      ++report.signs.negative;
    } else {
      ++report.signs.zero;
    }
  }
}

DeviationReport scan_deviations(const VarietySpec& spec, double p_max, Execution exec) {
  if (!(p_max >= 5.0) || !std::isfinite(p_max)) {
    throw std::invalid_argument(fmt::format("scan_deviations: p_max must be >= 5, got {}", p_max));
  }
  const auto primes = primes_up_to(static_cast<std::uint64_t>(std::floor(p_max)), kDefaultSegmentSize, exec);
  const LocalFactor factor(spec);
  const bool elliptic = spec.is_elliptic();
  const bool closed = has_closed_form_b(spec);

  std::vector<DeviationSample> samples(primes.size());
  std::vector<char> bad(primes.size(), 0);

  auto evaluate = [&](std::size_t i) {
    const auto p = primes[i];
    if (elliptic && !spec.curve().good(p)) {
      bad[i] = 1;
      return;
    }
    DeviationSample s{p, 0.0, 0.0, std::nullopt, std::nullopt};
    if (elliptic) {
      const auto ec = ec_b_and_theta(spec.curve(), p);
      s.ratio = ec.ratio;
      s.theta = ec.theta;
      s.trace = ec.trace;
    } else {
      s.ratio = std::exp(factor.log_ratio(p));
    }
    s.b = b_deviation(s.ratio, p);
    if (closed && std::fabs(s.b - closed_form_b(spec, p)) >= kClosedFormTolerance) {
      throw InternalConsistencyError(fmt::format("b({}) disagrees with closed form for {}", p, to_string(spec)));
    }
    samples[i] = s;
  };

  const auto n = static_cast<std::int64_t>(primes.size());
  if (exec == Execution::serial) {
    for (std::int64_t i = 0; i < n; ++i) evaluate(static_cast<std::size_t>(i));
  } else {
    // Exceptions must not escape the parallel region; capture the first one.
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        evaluate(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  DeviationReport report;
  report.tag = to_string(spec);
  report.samples.reserve(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (bad[i]) {
      report.skipped_bad.push_back(primes[i]);
    } else {
      report.samples.push_back(samples[i]);
    }
  }
  summarize(report);
  return report;
}

DeviationReport scan_synthetic(unsigned d, double p_max) {
  if (!(p_max >= 5.0) || !std::isfinite(p_max)) {
    throw std::invalid_argument(fmt::format("scan_synthetic: p_max must be >= 5, got {}", p_max));
  }
  DeviationReport report;
  report.tag = fmt::format("synthetic:{}", d);
  for (const auto p : primes_up_to(static_cast<std::uint64_t>(std::floor(p_max)))) {
    const double b = synthetic_unbounded_b(d, p);
    report.samples.push_back({p, 1.0 + b / std::sqrt(static_cast<double>(p)), b, std::nullopt, std::nullopt});
  }
  summarize(report);
  return report;
}

}  // namespace mertens
