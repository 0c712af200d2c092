#include "mertens/prime_engine.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mertens {

int max_threads() { return omp_get_max_threads(); }

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint64_t> simple_sieve(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<char> composite(limit + 1, 0);
  for (std::uint64_t i = 2; i * i <= limit; ++i) {
    if (composite[i]) continue;
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (!composite[i]) primes.push_back(i);
  }
  return primes;
}

SegmentedSieve::SegmentedSieve(std::uint64_t limit, std::uint64_t segment_size)
    : limit_(limit), segment_size_(segment_size), segment_count_(0) {
  if (segment_size_ == 0) throw std::invalid_argument("segment size must be >= 1");
  if (limit_ >= 2) {
    const std::uint64_t span = limit_ - 1;  // integers in [2, limit]
    segment_count_ = static_cast<std::size_t>((span + segment_size_ - 1) / segment_size_);
    base_primes_ = simple_sieve(isqrt(limit_));
  }
}

void SegmentedSieve::sieve_segment(std::size_t index, std::vector<std::uint64_t>& out) const {
  if (index >= segment_count_) return;
  const std::uint64_t low = 2 + static_cast<std::uint64_t>(index) * segment_size_;
  const std::uint64_t high = std::min(low + segment_size_, limit_ + 1);  // exclusive
  std::vector<char> composite(high - low, 0);
  for (const std::uint64_t p : base_primes_) {
    if (p * p >= high) break;
    std::uint64_t start = std::max(p * p, (low + p - 1) / p * p);
    for (std::uint64_t j = start; j < high; j += p) composite[j - low] = 1;
  }
  for (std::uint64_t n = low; n < high; ++n) {
    if (!composite[n - low]) out.push_back(n);
  }
}

void PrimeStream::iterator::advance_segment() {
  buffer_.clear();
  pos_ = 0;
  while (buffer_.empty() && next_segment_ < sieve_->segment_count()) {
    sieve_->sieve_segment(next_segment_++, buffer_);
  }
  if (buffer_.empty()) sieve_ = nullptr;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit, std::uint64_t segment_size,
                                        Execution exec) {
  const SegmentedSieve sieve(limit, segment_size);
  std::vector<std::uint64_t> primes;
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < sieve.segment_count(); ++i) sieve.sieve_segment(i, primes);
    return primes;
  }

  const auto count = static_cast<std::int64_t>(sieve.segment_count());
  std::vector<std::vector<std::uint64_t>> parts(sieve.segment_count());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    sieve.sieve_segment(static_cast<std::size_t>(i), parts[static_cast<std::size_t>(i)]);
  }
  std::size_t total = 0;
  for (const auto& part : parts) total += part.size();
  primes.reserve(total);
  for (const auto& part : parts) primes.insert(primes.end(), part.begin(), part.end());
  return primes;
}

std::uint64_t prime_count(std::uint64_t limit, Execution exec) {
  const SegmentedSieve sieve(limit);
  const auto count = static_cast<std::int64_t>(sieve.segment_count());
  std::uint64_t total = 0;
  if (exec == Execution::serial) {
    std::vector<std::uint64_t> buf;
    for (std::int64_t i = 0; i < count; ++i) {
      buf.clear();
      sieve.sieve_segment(static_cast<std::size_t>(i), buf);
      total += buf.size();
    }
    return total;
  }
#pragma omp parallel
  {
    std::vector<std::uint64_t> buf;
#pragma omp for schedule(dynamic) reduction(+ : total)
    for (std::int64_t i = 0; i < count; ++i) {
      buf.clear();
      sieve.sieve_segment(static_cast<std::size_t>(i), buf);
      total += buf.size();
    }
  }
  return total;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d <= n / d; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

int mobius(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("mobius: n must be >= 1");
  int sign = 1;
  for (std::uint64_t d = 2; d <= n / d; ++d) {
    if (n % d != 0) continue;
    n /= d;
    if (n % d == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("euler_phi: n must be >= 1");
  std::uint64_t result = n;
  for (std::uint64_t d = 2; d <= n / d; ++d) {
    if (n % d != 0) continue;
    while (n % d == 0) n /= d;
    result -= result / d;
  }
  if (n > 1) result -= result / n;
  return result;
}

std::vector<std::uint64_t> divisors(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("divisors: n must be >= 1");
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d <= n / d; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  if (mod == 1) return 0;
  unsigned __int128 result = 1;
  unsigned __int128 b = base % mod;
  while (exp > 0) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

int legendre_symbol(std::int64_t a, std::uint64_t p) {
  if (p < 3 || p % 2 == 0) throw std::invalid_argument("legendre_symbol: p must be an odd prime");
  const auto sp = static_cast<std::int64_t>(p);
  const auto residue = static_cast<std::uint64_t>(((a % sp) + sp) % sp);
  if (residue == 0) return 0;
  const std::uint64_t e = mod_pow(residue, (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

}  // namespace mertens
