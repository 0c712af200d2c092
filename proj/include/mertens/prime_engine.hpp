#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <vector>

#include "mertens/execution.hpp"

namespace mertens {

inline constexpr std::uint64_t kDefaultSegmentSize = std::uint64_t{1} << 20;

// Plain sieve of Eratosthenes; all primes <= limit.
std::vector<std::uint64_t> simple_sieve(std::uint64_t limit);

// Largest r with r*r <= n.
std::uint64_t isqrt(std::uint64_t n);

// Segmented sieve over [2, limit]. Segment k covers
// [2 + k*segment_size, 2 + (k+1)*segment_size) clipped to limit + 1.
// Segments are independent of each other and may be sieved concurrently.
class SegmentedSieve {
 public:
  explicit SegmentedSieve(std::uint64_t limit,
                          std::uint64_t segment_size = kDefaultSegmentSize);

  std::uint64_t limit() const { return limit_; }
  std::uint64_t segment_size() const { return segment_size_; }
  std::size_t segment_count() const { return segment_count_; }

  // Appends the primes of segment `index` to `out` in ascending order.
  void sieve_segment(std::size_t index, std::vector<std::uint64_t>& out) const;

 private:
  std::uint64_t limit_;
  std::uint64_t segment_size_;
  std::size_t segment_count_;
  std::vector<std::uint64_t> base_primes_;
};

// Ascending stream of the primes <= limit. Holds one segment at a time.
// Single consumer.
class PrimeStream {
 public:
  explicit PrimeStream(std::uint64_t limit,
                       std::uint64_t segment_size = kDefaultSegmentSize)
      : sieve_(limit, segment_size) {}

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = std::uint64_t;
    using difference_type = std::ptrdiff_t;
    using pointer = const std::uint64_t*;
    using reference = const std::uint64_t&;

    iterator() = default;
    explicit iterator(const SegmentedSieve* sieve) : sieve_(sieve) { advance_segment(); }

    reference operator*() const { return buffer_[pos_]; }
    iterator& operator++() {
      if (++pos_ == buffer_.size()) advance_segment();
      return *this;
    }
    void operator++(int) { ++*this; }

    friend bool operator==(const iterator& a, const iterator& b) {
      return a.sieve_ == b.sieve_ && (a.sieve_ == nullptr || a.pos_ == b.pos_);
    }

   private:
    void advance_segment();

    const SegmentedSieve* sieve_ = nullptr;
    std::size_t next_segment_ = 0;
    std::vector<std::uint64_t> buffer_;
    std::size_t pos_ = 0;
  };

  iterator begin() const { return iterator(&sieve_); }
  iterator end() const { return iterator(); }

  const SegmentedSieve& sieve() const { return sieve_; }

 private:
  SegmentedSieve sieve_;
};

// All primes <= limit in ascending order. The parallel path sieves
// segments concurrently and concatenates them in order.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit,
                                        std::uint64_t segment_size = kDefaultSegmentSize,
                                        Execution exec = Execution::serial);

std::uint64_t prime_count(std::uint64_t limit, Execution exec = Execution::parallel);

// Deterministic trial division.
bool is_prime(std::uint64_t n);

// Throw std::invalid_argument for n = 0.
int mobius(std::uint64_t n);
std::uint64_t euler_phi(std::uint64_t n);

// Positive divisors of n, ascending.
std::vector<std::uint64_t> divisors(std::uint64_t n);

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

// Euler's criterion. p must be an odd prime (p >= 3), else std::invalid_argument.
int legendre_symbol(std::int64_t a, std::uint64_t p);

}  // namespace mertens
