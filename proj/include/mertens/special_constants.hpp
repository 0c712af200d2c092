#pragma once

namespace mertens {

struct ZetaValue {
  int k;
  double value;
  double abs_error_bound;
};

// Riemann zeta at an integer k >= 2 (std::invalid_argument otherwise).
// Partial sum plus an Euler-Maclaurin tail; abs_error_bound <= 1e-12.
ZetaValue zeta(int k);

// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.577215664901532860606512090082;

constexpr double euler_gamma() { return kEulerGamma; }

}  // namespace mertens
