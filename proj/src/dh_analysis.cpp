#include "mertens/dh_analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "mertens/errors.hpp"
#include "mertens/prime_engine.hpp"
#include "mertens/special_constants.hpp"

namespace mertens {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double zeta_value(int k) { return zeta(k).value; }

// prod_{k=first}^{last} zeta(k)^{-1}; empty range gives 1.
double inverse_zeta_product(int first, int last, int step = 1) {
  double product = 1.0;
  for (int k = first; k <= last; k += step) product /= zeta_value(k);
  return product;
}

}  // namespace

bool DHFit::reliable() const { return std::fabs(r_hat - r_rounded) <= kReliabilityBand; }

bool has_prediction(const VarietySpec& spec) { return !spec.is_elliptic(); }

DHPrediction predicted_dh(const VarietySpec& spec) {
  const double g = euler_gamma();
  return std::visit(
      Overloaded{
          [g](const variety::GeneralLinear& v) {
            return DHPrediction{std::exp(-g) * inverse_zeta_product(2, v.n), -1};
          },
          [](const variety::SpecialLinear& v) { return DHPrediction{inverse_zeta_product(2, v.n), 0}; },
          [](const variety::Symplectic& v) { return DHPrediction{inverse_zeta_product(2, 2 * v.n, 2), 0}; },
          [](const variety::Affine&) { return DHPrediction{1.0, 0}; },
          [g](const variety::Projective& v) { return DHPrediction{std::exp(g) / zeta_value(v.n + 1), 1}; },
          [g](const variety::Grassmannian& v) {
            // e^gamma * prod_{k=2}^{m} zeta(k) / prod_{k=n-m+1}^{n} zeta(k)
            const double numerator = 1.0 / inverse_zeta_product(2, v.m);
            return DHPrediction{std::exp(g) * numerator * inverse_zeta_product(v.n - v.m + 1, v.n), 1};
          },
          [](const variety::Circle&) { return DHPrediction{4.0 / std::numbers::pi, 0}; },
          [g](const variety::Cyclotomic& v) {
            // e^{-gamma mu(n)} prod_{d|n, d>1} zeta(d)^{-mu(n/d)}, r = -mu(n)
            const auto n = static_cast<std::uint64_t>(v.n);
            const int mu_n = mobius(n);
            double C = std::exp(-g * mu_n);
            for (const auto d : divisors(n)) {
              if (d == 1) continue;
              const int mu = mobius(n / d);
              if (mu != 0) C *= std::pow(zeta_value(static_cast<int>(d)), -mu);
            }
            return DHPrediction{C, -mu_n};
          },
          [](const variety::Elliptic&) -> DHPrediction {
            throw UnsupportedError("no density prediction for elliptic curves");
          },
      },
      spec.kind());
}

DHFit fit_dh(std::span<const DensityCheckpoint> profile, double t_lo, double t_hi) {
  const double slack = 1e-9;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& c : profile) {
    if (c.t < t_lo * (1.0 - slack) || c.t > t_hi * (1.0 + slack)) continue;
    if (c.t < 3.0) throw std::invalid_argument("fit_dh: checkpoints must have t >= 3");
    xs.push_back(std::log(std::log(c.t)));
    ys.push_back(c.log_density);
  }
  if (xs.size() < 3) {
    throw std::invalid_argument(
        fmt::format("fit_dh: need >= 3 checkpoints in [{}, {}], found {}", t_lo, t_hi, xs.size()));
  }

  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_dh: degenerate window (all log log t equal)");

  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ss += r * r;
  }
  return DHFit{std::exp(intercept),
               slope,
               static_cast<int>(std::lround(slope)),
               std::sqrt(ss / n),
               t_lo,
               t_hi,
               xs.size()};
}

DHReport compare_with_prediction(const DensityProfile& profile, double t_lo, double t_hi) {
  const auto prediction = predicted_dh(profile.spec);
  const auto fit = fit_dh(profile.checkpoints, t_lo, t_hi);
  const double rel_err = std::fabs(fit.C_hat - prediction.C) / prediction.C;
  const bool r_match = fit.r_rounded == prediction.r;
  std::string verdict;
  if (!fit.reliable()) {
    verdict = "unreliable";
  } else if (r_match && rel_err <= kReportTolerance) {
    verdict = "match";
  } else {
    verdict = "mismatch";
  }
  return DHReport{profile.spec, prediction, fit, rel_err, r_match, std::move(verdict)};
}

DHReport dh_report(const VarietySpec& spec, double t_max, int per_decade) {
  if (!has_prediction(spec)) throw UnsupportedError("no density prediction for elliptic curves");
  const auto profile = density_profile(spec, t_max, per_decade);
  return compare_with_prediction(profile, t_max / 100.0, t_max);
}

}  // namespace mertens
