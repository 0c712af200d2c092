#include "mertens/special_constants.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mertens {
namespace {

// B_{2j} / (2j)! for j = 1..8.
constexpr std::array<double, 8> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
};

constexpr int kHeadTerms = 16;

}  // namespace

// zeta(k) = sum_{n<N} n^-k + N^{1-k}/(k-1) + N^-k/2
//           + sum_j B_{2j}/(2j)! * k(k+1)...(k+2j-2) * N^{-k-2j+1} + R
// The remainder R is bounded by the first omitted correction term.
ZetaValue zeta(int k) {
  if (k < 2) throw std::invalid_argument("zeta: argument must be an integer >= 2");

  const double kd = k;
  const double N = kHeadTerms;

  // Smallest terms first.
  double head = 0.0;
  for (int n = kHeadTerms - 1; n >= 1; --n) head += std::pow(static_cast<double>(n), -kd);

  double tail = std::pow(N, 1.0 - kd) / (kd - 1.0) + 0.5 * std::pow(N, -kd);
  double rising = kd;  // k(k+1)...(k+2j-2)
  double omitted = 0.0;
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    const double term = kBernoulliOverFactorial[j] * rising * std::pow(N, -kd - 2.0 * j - 1.0);
    if (j + 1 == kBernoulliOverFactorial.size()) {
      omitted = std::fabs(term);
      break;
    }
    tail += term;
    rising *= (kd + 2.0 * j + 1.0) * (kd + 2.0 * j + 2.0);
  }

  const double value = head + tail;
  const double rounding = 4.0 * kHeadTerms * std::numeric_limits<double>::epsilon() * value;
  return {k, value, omitted + rounding};
}

}  // namespace mertens
