#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "minsurf/sieve.hpp"

namespace minsurf {

// A point of E_n: k divisors of n in non-decreasing order whose product is
// n, together with the exact surface numerator
//
//   surface_num = sum_j n / v_j  =  n * sum_j 1 / v_j.
//
// Minimizing sum_j 1/v_j over E_n is the same as minimizing surface_num,
// and the numerator is an integer below k * n, so every comparison the
// solver makes is exact.
struct FactorTuple {
  uint64_t n = 1;
  std::vector<uint64_t> factors;
  uint64_t surface_num = 0;

  int k() const { return static_cast<int>(factors.size()); }
};

// Validates membership in E_n (entries >= 1, non-decreasing, product == n)
// and fills in the surface numerator.  Throws invalid_tuple_error.
FactorTuple make_factor_tuple(std::vector<uint64_t> factors, uint64_t n);

// sum_j n / v_j for v in E_n.  Throws invalid_tuple_error when v is not a
// sorted factorization of n.
uint64_t surface_numerator(const std::vector<uint64_t>& factors, uint64_t n);

// The surface 2 * n * sum_j 1/v_j of the box with side lengths v.
uint64_t surface_area(const std::vector<uint64_t>& factors, uint64_t n);

// Minimizer of the surface over E_n.  rho holds the lexicographically
// smallest minimizing tuple, so rho.factors[j-1] is the j-th smallest side
// rho_j(n); tie_count is the total number of minimizing tuples (1 means
// the minimum is attained by a single tuple).
struct OptimalProfile {
  uint64_t n = 1;
  FactorTuple rho;
  uint64_t tie_count = 1;

  int k() const { return rho.k(); }

  // rho_j(n), 1-based.
  uint64_t factor(int j) const;

  // pi_j = rho_1 * ... * rho_j, 1-based; pi_k == n.
  uint64_t partial_product(int j) const;
};

// Reusable solver bound to one sieve.  Methods validate 1 <= n <= limit
// and k >= 2.  The instance keeps scratch buffers alive between calls,
// which matters in full-range sweeps; it is not safe to share one instance
// across threads.
class Solver {
 public:
  explicit Solver(const SieveTable& sieve) : sieve_(&sieve) {}

  OptimalProfile solve(uint64_t n, int k);

  // Same result as solve() but reuses the caller's object, so a sweep does
  // not allocate per n once capacities are warm.
  void solve_into(uint64_t n, int k, OptimalProfile& out);

  // Every tuple of E_n in lexicographic order.
  void for_each_tuple(uint64_t n, int k,
                      const std::function<void(const FactorTuple&)>& fn);

  // All minimizing tuples in lexicographic order (size == tie_count).
  std::vector<FactorTuple> minimizers(uint64_t n, int k);

 private:
  const SieveTable* sieve_;
  std::vector<uint64_t> divs_;
  std::vector<uint64_t> prefix_;
  std::vector<uint64_t> best_;
};

// One-shot conveniences over a throwaway Solver.
OptimalProfile solve(uint64_t n, int k, const SieveTable& sieve);
std::vector<FactorTuple> enumerate_tuples(uint64_t n, int k,
                                          const SieveTable& sieve);

// One step of the surface-decreasing transfer move.  Scans pairs j < h in
// order of increasing h, then increasing j, and when v_j * P^-(v_h) < v_h
// moves that prime from slot h to slot j, re-sorts, and returns the new
// tuple, whose surface numerator is strictly smaller.  Returns nullopt when
// no pair qualifies.
std::optional<FactorTuple> improve_once(const FactorTuple& t,
                                        const SieveTable& sieve);

// Applies improve_once until it returns nullopt.  Terminates because the
// integer surface numerator strictly decreases at each step.
FactorTuple local_search(FactorTuple t, const SieveTable& sieve);

// True when v_j * P^-(v_h) >= v_h for every pair j < h, the necessary
// optimality condition.  Every optimal tuple satisfies it; the converse
// fails, e.g. (4, 9) for n = 36 is stable but not optimal.
bool is_transfer_stable(const FactorTuple& t, const SieveTable& sieve);

// Profiles for n = lo..hi (sweep: 1..x) in increasing n order.  Chunks of
// kChunkSize are solved by `workers` threads; fn runs on the calling
// thread and sees exactly the same sequence for every worker count.  The
// optional chunk_done(b) hook fires after fn has seen all n of the chunk
// ending at b and may return false to stop before the next chunk, which is
// the checkpoint/resume seam.
void sweep_range(uint64_t lo, uint64_t hi, int k, const SieveTable& sieve,
                 int workers,
                 const std::function<void(const OptimalProfile&)>& fn,
                 const std::function<bool(uint64_t)>& chunk_done = {});
void sweep(uint64_t x, int k, const SieveTable& sieve, int workers,
           const std::function<void(const OptimalProfile&)>& fn);

}  // namespace minsurf
