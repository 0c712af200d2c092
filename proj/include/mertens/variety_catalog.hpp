#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mertens {

// Short Weierstrass curve y^2 = x^3 + a4*x + a6 over Q.
class EcCurve {
 public:
  // Coefficient magnitude limit; keeps the discriminant inside 128 bits and
  // x^3 + a4*x + a6 reductions inside 64 bits.
  static constexpr std::int64_t kMaxCoefficient = 1'000'000'000;

  // Throws std::invalid_argument for a singular curve or oversized coefficients.
  EcCurve(std::int64_t a4, std::int64_t a6);

  std::int64_t a4() const { return a4_; }
  std::int64_t a6() const { return a6_; }

  // -16 (4 a4^3 + 27 a6^2)
  __int128 discriminant() const { return discriminant_; }
  std::string discriminant_string() const;

  // p prime of good reduction: p not dividing the discriminant and p >= 5.
  bool good(std::uint64_t p) const;

  friend bool operator==(const EcCurve&, const EcCurve&) = default;

 private:
  std::int64_t a4_;
  std::int64_t a6_;
  __int128 discriminant_;
};

namespace variety {

struct GeneralLinear { int n; friend bool operator==(const GeneralLinear&, const GeneralLinear&) = default; };
struct SpecialLinear { int n; friend bool operator==(const SpecialLinear&, const SpecialLinear&) = default; };
struct Symplectic { int n; friend bool operator==(const Symplectic&, const Symplectic&) = default; };
struct Affine { int n; friend bool operator==(const Affine&, const Affine&) = default; };
struct Projective { int n; friend bool operator==(const Projective&, const Projective&) = default; };
struct Grassmannian { int n; int m; friend bool operator==(const Grassmannian&, const Grassmannian&) = default; };
struct Circle { friend bool operator==(const Circle&, const Circle&) = default; };
struct Cyclotomic { int n; friend bool operator==(const Cyclotomic&, const Cyclotomic&) = default; };
struct Elliptic { EcCurve curve; friend bool operator==(const Elliptic&, const Elliptic&) = default; };

}  // namespace variety

// A member of the variety catalog. Construct through the named factories,
// which validate parameters and throw std::invalid_argument.
class VarietySpec {
 public:
  using Kind = std::variant<variety::GeneralLinear, variety::SpecialLinear, variety::Symplectic,
                            variety::Affine, variety::Projective, variety::Grassmannian,
                            variety::Circle, variety::Cyclotomic, variety::Elliptic>;

  // Upper bound on n for every family; keeps dimensions and exact counts sane.
  static constexpr int kMaxRank = 1000;
  static constexpr int kMaxCyclotomicIndex = 1'000'000;

  static VarietySpec gl(int n);
  static VarietySpec sl(int n);
  static VarietySpec sp(int n);
  static VarietySpec affine(int n);
  static VarietySpec proj(int n);
  // n > m >= 1; m = 1 is accepted and coincides with proj(n - 1).
  static VarietySpec gr(int n, int m);
  static VarietySpec circle();
  static VarietySpec cyclotomic(int n);
  static VarietySpec elliptic(std::int64_t a4, std::int64_t a6);

  const Kind& kind() const { return kind_; }
  bool is_elliptic() const { return std::holds_alternative<variety::Elliptic>(kind_); }
  // Only valid when is_elliptic().
  const EcCurve& curve() const { return std::get<variety::Elliptic>(kind_).curve; }

  friend bool operator==(const VarietySpec&, const VarietySpec&) = default;

 private:
  explicit VarietySpec(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

// Text grammar: gl:n sl:n sp:n affine:n proj:n gr:n,m circle phi:n ec:a4,a6
inline constexpr std::string_view kSpecGrammar =
    "gl:n | sl:n | sp:n | affine:n | proj:n | gr:n,m | circle | phi:n | ec:a4,a6";

// Throws std::invalid_argument on malformed text or invalid parameters.
VarietySpec parse_spec(std::string_view text);
std::string to_string(const VarietySpec& spec);

// Exponent d in |X(F_p)| / p^d. For phi:n this is deg Phi_n = phi(n).
std::uint64_t dimension(const VarietySpec& spec);

// |X(F_p)| with integer arithmetic only. p must be prime (std::invalid_argument
// otherwise); elliptic specs throw BadReductionError at bad primes.
mpz_class exact_count(const VarietySpec& spec, std::uint64_t p);

// log(|X(F_p)| / p^d) from the rational form in 1/p. p is assumed prime.
// Elliptic specs throw BadReductionError at bad primes.
double log_local_ratio(const VarietySpec& spec, std::uint64_t p);

// Trace of Frobenius a(p) = p + 1 - |E(F_p)|. Throws BadReductionError if
// p is bad. ec_trace runs a table-driven character sum; ec_trace_reference
// sums Legendre symbols via Euler's criterion and is kept for testing.
std::int64_t ec_trace(const EcCurve& curve, std::uint64_t p);
std::int64_t ec_trace_reference(const EcCurve& curve, std::uint64_t p);

}  // namespace mertens

namespace mertens {

// log_local_ratio with per-spec setup hoisted out of the per-prime call
// (divisor/Mobius tables for phi:n). Immutable after construction; safe to
// share across threads.
class LocalFactor {
 public:
  explicit LocalFactor(const VarietySpec& spec);

  const VarietySpec& spec() const { return spec_; }

  // Same contract as log_local_ratio.
  double log_ratio(std::uint64_t p) const;

 private:
  struct MobiusTerm {
    int exponent;  // d
    int weight;    // mu(n/d), nonzero
  };

  VarietySpec spec_;
  std::vector<MobiusTerm> cyclotomic_terms_;
};

}  // namespace mertens
