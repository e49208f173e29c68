#include "minsurf/sieve.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace minsurf {

SieveTable build_sieve(uint64_t limit, uint64_t memory_cap_bytes) {
  if (limit < 2) {
    throw std::domain_error("build_sieve: limit must be at least 2");
  }
  if (limit > kMaxSieveLimit) {
    throw std::domain_error("build_sieve: limit exceeds 2^40");
  }
  const uint64_t bytes = (limit + 1) * sizeof(uint32_t);
  if (bytes > memory_cap_bytes) {
    throw resource_error("build_sieve: table of " + std::to_string(bytes) +
                         " bytes exceeds memory cap of " +
                         std::to_string(memory_cap_bytes));
  }

  SieveTable table;
  table.limit_ = limit;
  table.spf_.assign(limit + 1, 0);
  auto& spf = table.spf_;

  // Linear sieve.  Each composite m is marked exactly once, as m = p * i
  // with p = P^-(m) <= P^-(i).  Only primes p <= limit / i enter the inner
  // loop, and p <= P^-(i) <= sqrt(limit) there, so the helper list of primes
  // can stop at sqrt(limit) and fit in uint32_t.
  std::vector<uint32_t> primes;
  for (uint64_t i = 2; i <= limit; ++i) {
    const uint64_t cap = limit / i;
    const uint64_t spf_i = spf[i] == 0 ? i : spf[i];
    if (spf[i] == 0 && i <= cap) {
      primes.push_back(static_cast<uint32_t>(i));
    }
    for (uint32_t p : primes) {
      if (p > spf_i || p > cap) break;
      spf[i * p] = p;
    }
  }
  return table;
}

PrimeFactorization factorize(uint64_t n, const SieveTable& sieve) {
  if (n < 1 || n > sieve.limit()) {
    throw std::out_of_range("factorize: n outside [1, sieve limit]");
  }
  PrimeFactorization f;
  f.n = n;
  while (n > 1) {
    const uint64_t p = sieve.spf(n);
    int e = 0;
    do {
      n /= p;
      ++e;
    } while (n > 1 && sieve.spf(n) == p);
    f.factors.emplace_back(p, e);
  }
  return f;
}

void divisors_into(uint64_t n, const SieveTable& sieve,
                   std::vector<uint64_t>& out) {
  const PrimeFactorization f = factorize(n, sieve);
  out.clear();
  out.push_back(1);
  for (const auto& [p, e] : f.factors) {
    const size_t base = out.size();
    uint64_t pe = 1;
    for (int t = 0; t < e; ++t) {
      pe *= p;
      for (size_t i = 0; i < base; ++i) {
        out.push_back(out[i] * pe);
      }
    }
  }
  std::sort(out.begin(), out.end());
}

std::vector<uint64_t> divisors(uint64_t n, const SieveTable& sieve) {
  std::vector<uint64_t> out;
  divisors_into(n, sieve, out);
  return out;
}

MinPrime smallest_prime_factor(uint64_t n, const SieveTable& sieve) {
  if (n < 1 || n > sieve.limit()) {
    throw std::out_of_range("smallest_prime_factor: n outside [1, limit]");
  }
  if (n == 1) return MinPrime::infinity();
  return MinPrime::of(sieve.spf(n));
}

int omega_total(uint64_t n, const SieveTable& sieve) {
  if (n < 1 || n > sieve.limit()) {
    throw std::out_of_range("omega_total: n outside [1, sieve limit]");
  }
  int count = 0;
  while (n > 1) {
    n /= sieve.spf(n);
    ++count;
  }
  return count;
}

int mobius(uint64_t n, const SieveTable& sieve) {
  if (n < 1 || n > sieve.limit()) {
    throw std::out_of_range("mobius: n outside [1, sieve limit]");
  }
  int sign = 1;
  while (n > 1) {
    const uint64_t p = sieve.spf(n);
    n /= p;
    if (n > 1 && sieve.spf(n) == p) return 0;  // p^2 | original n
    sign = -sign;
  }
  return sign;
}

}  // namespace minsurf
