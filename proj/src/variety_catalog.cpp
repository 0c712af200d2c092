#include "mertens/variety_catalog.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "mertens/errors.hpp"
#include "mertens/prime_engine.hpp"

namespace mertens {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string int128_to_string(__int128 v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  unsigned __int128 u = negative ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  std::string digits;
  while (u > 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  return negative ? "-" + digits : digits;
}

void require_rank(int n, int min, const char* family) {
  if (n < min || n > VarietySpec::kMaxRank) {
    throw std::invalid_argument(
        fmt::format("{}: parameter must be in [{}, {}], got {}", family, min, VarietySpec::kMaxRank, n));
  }
}

mpz_class pow_ui(std::uint64_t base, unsigned long exp) {
  mpz_class result;
  mpz_ui_pow_ui(result.get_mpz_t(), base, exp);
  return result;
}

mpz_class divide_exact(const mpz_class& num, const mpz_class& den, const char* what) {
  if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) {
    throw InternalConsistencyError(fmt::format("{}: non-exact division", what));
  }
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

void require_good(const EcCurve& curve, std::uint64_t p) {
  if (!curve.good(p)) {
    throw BadReductionError(fmt::format("bad reduction at p = {} for y^2 = x^3 + {}x + {}", p,
                                        curve.a4(), curve.a6()));
  }
}

std::uint64_t reduce(std::int64_t a, std::uint64_t p) {
  const auto sp = static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(((a % sp) + sp) % sp);
}

// sum_{k=first}^{last} log(1 - q^k)
double log_q_pochhammer(double q, int first, int last) {
  double sum = 0.0;
  double term = std::pow(q, first);
  for (int k = first; k <= last && term > 0.0; ++k) {
    sum += std::log1p(-term);
    term *= q;
  }
  return sum;
}

int parse_int(std::string_view text, std::string_view full) {
  long long value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw std::invalid_argument(
        fmt::format("cannot parse spec '{}'; expected one of: {}", full, kSpecGrammar));
  }
  if (value < -EcCurve::kMaxCoefficient || value > EcCurve::kMaxCoefficient) {
    throw std::invalid_argument(fmt::format("spec '{}': parameter out of range", full));
  }
  return static_cast<int>(value);
}

std::vector<std::int64_t> parse_int_list(std::string_view text, std::string_view full) {
  std::vector<std::int64_t> values;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    values.push_back(parse_int(piece, full));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return values;
}

}  // namespace

EcCurve::EcCurve(std::int64_t a4, std::int64_t a6) : a4_(a4), a6_(a6) {
  if (std::llabs(a4) > kMaxCoefficient || std::llabs(a6) > kMaxCoefficient) {
    throw std::invalid_argument(
        fmt::format("elliptic coefficients must satisfy |a| <= {}", kMaxCoefficient));
  }
  const __int128 c4 = a4;
  const __int128 c6 = a6;
  discriminant_ = -16 * (4 * c4 * c4 * c4 + 27 * c6 * c6);
  if (discriminant_ == 0) {
    throw std::invalid_argument(fmt::format("singular curve: y^2 = x^3 + {}x + {} has zero discriminant", a4, a6));
  }
}

std::string EcCurve::discriminant_string() const { return int128_to_string(discriminant_); }

bool EcCurve::good(std::uint64_t p) const {
  if (p < 5) return false;
  return discriminant_ % static_cast<__int128>(p) != 0;
}

VarietySpec VarietySpec::gl(int n) { require_rank(n, 1, "gl"); return VarietySpec(variety::GeneralLinear{n}); }
VarietySpec VarietySpec::sl(int n) { require_rank(n, 1, "sl"); return VarietySpec(variety::SpecialLinear{n}); }
VarietySpec VarietySpec::sp(int n) { require_rank(n, 1, "sp"); return VarietySpec(variety::Symplectic{n}); }
VarietySpec VarietySpec::affine(int n) { require_rank(n, 1, "affine"); return VarietySpec(variety::Affine{n}); }
VarietySpec VarietySpec::proj(int n) { require_rank(n, 1, "proj"); return VarietySpec(variety::Projective{n}); }

VarietySpec VarietySpec::gr(int n, int m) {
  require_rank(n, 2, "gr");
  if (m < 1 || m >= n) throw std::invalid_argument(fmt::format("gr: need n > m >= 1, got n={}, m={}", n, m));
  return VarietySpec(variety::Grassmannian{n, m});
}

VarietySpec VarietySpec::circle() { return VarietySpec(variety::Circle{}); }

VarietySpec VarietySpec::cyclotomic(int n) {
  if (n < 1 || n > kMaxCyclotomicIndex) {
    throw std::invalid_argument(fmt::format("phi: n must be in [1, {}], got {}", kMaxCyclotomicIndex, n));
  }
  return VarietySpec(variety::Cyclotomic{n});
}

VarietySpec VarietySpec::elliptic(std::int64_t a4, std::int64_t a6) {
  return VarietySpec(variety::Elliptic{EcCurve(a4, a6)});
}

VarietySpec parse_spec(std::string_view text) {
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  const auto args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  auto arity = [&](std::size_t want) {
    if (colon == std::string_view::npos && want > 0) {
      throw std::invalid_argument(fmt::format("cannot parse spec '{}'; expected one of: {}", text, kSpecGrammar));
    }
    auto values = want == 0 ? std::vector<std::int64_t>{} : parse_int_list(args, text);
    if (values.size() != want || (want == 0 && colon != std::string_view::npos)) {
      throw std::invalid_argument(fmt::format("cannot parse spec '{}'; expected one of: {}", text, kSpecGrammar));
    }
    return values;
  };
  auto as_int = [](std::int64_t v) { return static_cast<int>(v); };

  if (head == "gl") return VarietySpec::gl(as_int(arity(1)[0]));
  if (head == "sl") return VarietySpec::sl(as_int(arity(1)[0]));
  if (head == "sp") return VarietySpec::sp(as_int(arity(1)[0]));
  if (head == "affine") return VarietySpec::affine(as_int(arity(1)[0]));
  if (head == "proj") return VarietySpec::proj(as_int(arity(1)[0]));
  if (head == "gr") {
    const auto v = arity(2);
    return VarietySpec::gr(as_int(v[0]), as_int(v[1]));
  }
  if (head == "circle") {
    arity(0);
    return VarietySpec::circle();
  }
  if (head == "phi") return VarietySpec::cyclotomic(as_int(arity(1)[0]));
  if (head == "ec") {
    const auto v = arity(2);
    return VarietySpec::elliptic(v[0], v[1]);
  }
  throw std::invalid_argument(fmt::format("cannot parse spec '{}'; expected one of: {}", text, kSpecGrammar));
}

std::string to_string(const VarietySpec& spec) {
  return std::visit(
      Overloaded{
          [](const variety::GeneralLinear& v) { return fmt::format("gl:{}", v.n); },
          [](const variety::SpecialLinear& v) { return fmt::format("sl:{}", v.n); },
          [](const variety::Symplectic& v) { return fmt::format("sp:{}", v.n); },
          [](const variety::Affine& v) { return fmt::format("affine:{}", v.n); },
          [](const variety::Projective& v) { return fmt::format("proj:{}", v.n); },
          [](const variety::Grassmannian& v) { return fmt::format("gr:{},{}", v.n, v.m); },
          [](const variety::Circle&) { return std::string("circle"); },
          [](const variety::Cyclotomic& v) { return fmt::format("phi:{}", v.n); },
          [](const variety::Elliptic& v) { return fmt::format("ec:{},{}", v.curve.a4(), v.curve.a6()); },
      },
      spec.kind());
}

std::uint64_t dimension(const VarietySpec& spec) {
  return std::visit(
      Overloaded{
          [](const variety::GeneralLinear& v) -> std::uint64_t { return std::uint64_t(v.n) * v.n; },
          [](const variety::SpecialLinear& v) -> std::uint64_t { return std::uint64_t(v.n) * v.n - 1; },
          [](const variety::Symplectic& v) -> std::uint64_t { return std::uint64_t(v.n) * (2 * v.n + 1); },
          [](const variety::Affine& v) -> std::uint64_t { return v.n; },
          [](const variety::Projective& v) -> std::uint64_t { return v.n; },
          [](const variety::Grassmannian& v) -> std::uint64_t { return std::uint64_t(v.m) * (v.n - v.m); },
          [](const variety::Circle&) -> std::uint64_t { return 1; },
          [](const variety::Cyclotomic& v) -> std::uint64_t { return euler_phi(v.n); },
          [](const variety::Elliptic&) -> std::uint64_t { return 1; },
      },
      spec.kind());
}

mpz_class exact_count(const VarietySpec& spec, std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument(fmt::format("exact_count: {} is not prime", p));
  return std::visit(
      Overloaded{
          [p](const variety::GeneralLinear& v) {
            // prod_{k=0}^{n-1} (p^n - p^k)
            const mpz_class pn = pow_ui(p, v.n);
            mpz_class count = 1;
            for (int k = 0; k < v.n; ++k) count *= pn - pow_ui(p, k);
            return count;
          },
          [p](const variety::SpecialLinear& v) {
            const auto gl = exact_count(VarietySpec::gl(v.n), p);
            return divide_exact(gl, mpz_class(p - 1), "sl");
          },
          [p](const variety::Symplectic& v) {
            // p^{n^2} prod_{k=1}^{n} (p^{2k} - 1)
            mpz_class count = pow_ui(p, static_cast<unsigned long>(v.n) * v.n);
            for (int k = 1; k <= v.n; ++k) count *= pow_ui(p, 2 * k) - 1;
            return count;
          },
          [p](const variety::Affine& v) { return pow_ui(p, v.n); },
          [p](const variety::Projective& v) {
            mpz_class count = 0;
            for (int k = 0; k <= v.n; ++k) count += pow_ui(p, k);
            return count;
          },
          [p](const variety::Grassmannian& v) {
            // Gaussian binomial [n choose m]_p
            mpz_class num = 1;
            mpz_class den = 1;
            for (int i = 0; i < v.m; ++i) {
              num *= pow_ui(p, v.n - i) - 1;
              den *= pow_ui(p, i + 1) - 1;
            }
            return divide_exact(num, den, "gr");
          },
          [p](const variety::Circle&) {
            if (p == 2) return mpz_class(2);
            return p % 4 == 1 ? mpz_class(p - 1) : mpz_class(p + 1);
          },
          [p](const variety::Cyclotomic& v) {
            // Phi_n(p) = prod_{d|n} (p^d - 1)^{mu(n/d)}
            mpz_class num = 1;
            mpz_class den = 1;
            for (const auto d : divisors(v.n)) {
              const int mu = mobius(v.n / d);
              if (mu == 1) num *= pow_ui(p, d) - 1;
              if (mu == -1) den *= pow_ui(p, d) - 1;
            }
            return divide_exact(num, den, "phi");
          },
          [p](const variety::Elliptic& v) {
            const auto a = ec_trace(v.curve, p);
            return mpz_class(static_cast<long>(p + 1) - static_cast<long>(a));
          },
      },
      spec.kind());
}

LocalFactor::LocalFactor(const VarietySpec& spec) : spec_(spec) {
  if (const auto* c = std::get_if<variety::Cyclotomic>(&spec_.kind())) {
    for (const auto d : divisors(c->n)) {
      const int mu = mobius(c->n / d);
      if (mu != 0) cyclotomic_terms_.push_back({static_cast<int>(d), mu});
    }
  }
}

double LocalFactor::log_ratio(std::uint64_t p) const {
  const double q = 1.0 / static_cast<double>(p);
  return std::visit(
      Overloaded{
          [q](const variety::GeneralLinear& v) { return log_q_pochhammer(q, 1, v.n); },
          [q](const variety::SpecialLinear& v) { return log_q_pochhammer(q, 2, v.n); },
          [q](const variety::Symplectic& v) { return log_q_pochhammer(q * q, 1, v.n); },
          [](const variety::Affine&) { return 0.0; },
          [q](const variety::Projective& v) {
            return std::log1p(-std::pow(q, v.n + 1)) - std::log1p(-q);
          },
          [q](const variety::Grassmannian& v) {
            return log_q_pochhammer(q, v.n - v.m + 1, v.n) - log_q_pochhammer(q, 1, v.m);
          },
          [p, q](const variety::Circle&) {
            if (p == 2) return 0.0;
            return p % 4 == 1 ? std::log1p(-q) : std::log1p(q);
          },
          [this, q](const variety::Cyclotomic&) {
            double sum = 0.0;
            for (const auto& t : cyclotomic_terms_) sum += t.weight * std::log1p(-std::pow(q, t.exponent));
            return sum;
          },
          [p](const variety::Elliptic& v) {
            const auto a = ec_trace(v.curve, p);
            const double count = static_cast<double>(static_cast<std::int64_t>(p + 1) - a);
            return std::log(count / static_cast<double>(p));
          },
      },
      spec_.kind());
}

double log_local_ratio(const VarietySpec& spec, std::uint64_t p) {
  return LocalFactor(spec).log_ratio(p);
}

std::int64_t ec_trace_reference(const EcCurve& curve, std::uint64_t p) {
  require_good(curve, p);
  const std::uint64_t a4 = reduce(curve.a4(), p);
  const std::uint64_t a6 = reduce(curve.a6(), p);
  const unsigned __int128 P = p;
  std::int64_t sum = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    const unsigned __int128 X = x;
    const auto rhs = static_cast<std::int64_t>((X * X % P * X + a4 * X + a6) % P);
    sum += legendre_symbol(rhs, p);
  }
  return -sum;
}

namespace {

// Largest p for which the quadratic-character table is built.
constexpr std::uint64_t kTraceTableLimit = std::uint64_t{1} << 27;

}  // namespace

std::int64_t ec_trace(const EcCurve& curve, std::uint64_t p) {
  require_good(curve, p);
  if (p > kTraceTableLimit) return ec_trace_reference(curve, p);

  // chi[r] = quadratic character of r mod p.
  thread_local std::vector<signed char> chi;
  chi.assign(p, -1);
  chi[0] = 0;
  std::uint64_t square = 0;  // y^2 mod p, advanced by 2y+1
  std::uint64_t step = 1;  // 2y + 1 mod p
  for (std::uint64_t y = 1; y < (p + 1) / 2; ++y) {
    square += step;
    square = square >= p ? square - p : square;
    step += 2;
    step = step >= p ? step - p : step;
    chi[square] = 1;
  }

  // f(x) = x^3 + a4 x + a6 by forward differences:
  // df(x) = 3x^2 + 3x + 1 + a4, d2f(x) = 6x + 6, d3f = 6.
  const std::uint64_t six = 6 % p;
  std::uint64_t f = reduce(curve.a6(), p);
  std::uint64_t d1 = (1 + reduce(curve.a4(), p)) % p;
  std::uint64_t d2 = six;
  std::int64_t sum = 0;
  const signed char* table = chi.data();
  for (std::uint64_t x = 0; x < p; ++x) {
    sum += table[f];
    f += d1;
    f = f >= p ? f - p : f;
    d1 += d2;
    d1 = d1 >= p ? d1 - p : d1;
    d2 += six;
    d2 = d2 >= p ? d2 - p : d2;
  }
  return -sum;
}

}  // namespace mertens
