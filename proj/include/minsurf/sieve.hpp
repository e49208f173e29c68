#pragma once

#include <cassert>
#include <cstdint>
#include <utility>
#include <vector>

#include "minsurf/errors.hpp"

namespace minsurf {

// Hard ceiling on every n handled by this library.  Below 2^40 each surface
// numerator sum_j n/v_j fits in 64 bits (it is at most k*n with small k) and
// each pairwise product v_j * p fits in 128 bits, so all comparisons made by
// the solver and the scan experiments stay exact.
inline constexpr uint64_t kMaxSieveLimit = uint64_t{1} << 40;

// Default memory budget for the smallest-prime-factor table, in bytes.
// The table stores one uint32_t per index.
inline constexpr uint64_t kDefaultSieveMemoryCap = uint64_t{2} << 30;

// Value of the smallest prime factor P^-(n).  P^-(1) = +infinity by
// convention; the infinite case is a tagged state rather than a sentinel
// integer so that comparisons against it can never overflow or collide
// with a genuine prime.
class MinPrime {
 public:
  static constexpr MinPrime infinity() { return MinPrime(0); }
  static constexpr MinPrime of(uint64_t p) { return MinPrime(p); }

  constexpr bool is_infinite() const { return p_ == 0; }

  // Finite value; callers must check is_infinite() first.
  constexpr uint64_t value() const {
    assert(p_ != 0);
    return p_;
  }

  // Compares as if the infinite state were larger than every integer.
  constexpr bool operator>=(uint64_t b) const { return p_ == 0 || p_ >= b; }
  constexpr bool operator<(uint64_t b) const { return !(*this >= b); }
  constexpr bool operator==(const MinPrime& o) const { return p_ == o.p_; }

 private:
  explicit constexpr MinPrime(uint64_t p) : p_(p) {}
  uint64_t p_;  // 0 encodes infinity, never exposed as a number
};

// n = prod p^e with primes listed in increasing order.  n = 1 has an empty
// factor list.
struct PrimeFactorization {
  uint64_t n = 1;
  std::vector<std::pair<uint64_t, int>> factors;
};

// Smallest-prime-factor table for 2..limit, filled by a linear sieve.
// spf(i) is the least prime dividing i, so spf(p) == p exactly when p is
// prime.  Entries are uint32_t: a limit below 2^40 has every smallest prime
// factor below 2^20 for composites, and primes up to the limit only appear
// at their own index, which the accessor widens on the fly.
class SieveTable {
 public:
  uint64_t limit() const { return limit_; }

  uint64_t spf(uint64_t i) const {
    assert(i >= 2 && i <= limit_);
    return spf_[i] == 0 ? i : spf_[i];
  }

  bool is_prime(uint64_t i) const {
    assert(i <= limit_);
    return i >= 2 && spf_[i] == 0;
  }

 private:
  friend SieveTable build_sieve(uint64_t limit, uint64_t memory_cap_bytes);
  uint64_t limit_ = 0;
  std::vector<uint32_t> spf_;  // 0 at primes (and at 0, 1); factor otherwise
};

// Builds the table in O(limit) time.  Throws std::domain_error when
// limit < 2 or limit > kMaxSieveLimit, and resource_error when the table
// would not fit in memory_cap_bytes.
SieveTable build_sieve(uint64_t limit,
                       uint64_t memory_cap_bytes = kDefaultSieveMemoryCap);

// Factorization of 1 <= n <= limit by repeated spf division.
PrimeFactorization factorize(uint64_t n, const SieveTable& sieve);

// All divisors of n in increasing order.  divisors_into reuses the caller's
// buffer, which the solver leans on to avoid per-n allocation.
std::vector<uint64_t> divisors(uint64_t n, const SieveTable& sieve);
void divisors_into(uint64_t n, const SieveTable& sieve,
                   std::vector<uint64_t>& out);

// P^-(n), with P^-(1) = +infinity.
MinPrime smallest_prime_factor(uint64_t n, const SieveTable& sieve);

// Omega(n): number of prime factors counted with multiplicity; Omega(1) = 0.
int omega_total(uint64_t n, const SieveTable& sieve);

// Moebius function in {-1, 0, +1}.
int mobius(uint64_t n, const SieveTable& sieve);

}  // namespace minsurf
