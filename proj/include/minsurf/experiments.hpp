#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minsurf/sieve.hpp"
#include "minsurf/solver.hpp"

namespace minsurf {

// One comparison point: an exact sum or count next to the theorem's main
// term or envelope.  For evaluation points below the predictor's domain
// (x <= 1 for main terms, x < 16 for the log log envelopes) predicted and
// ratio are NaN: the exact value still gets reported, the comparison does
// not exist there.
struct ReportRow {
  uint64_t x = 0;
  uint64_t exact = 0;
  double predicted = 0.0;
  double ratio = 0.0;
};

// An n that failed a scan, with a human-readable witness.
struct Violation {
  uint64_t n = 0;
  std::string detail;
};

// Outcome of a yes/no scan over n <= x.  checked counts the n actually
// examined against the property (all of them for the census, only the n
// above the threshold for the structure scan).
struct ScanReport {
  int k = 0;
  int j = 0;  // 0 when the scan has no j parameter
  uint64_t x = 0;
  uint64_t checked = 0;
  std::vector<Violation> violations;
};

// Dyadic shell histogram: counts[l] = #{n <= x : x^{1/k}/2^{l+1} < rho_1(n)
// <= x^{1/k}/2^l}, plus any failures of the two-sided shell bound for the
// higher indices.  The shells partition [1, x], so total() == x.
struct ShellCensus {
  int k = 0;
  uint64_t x = 0;
  std::vector<uint64_t> counts;
  std::vector<Violation> sandwich_violations;

  uint64_t total() const;
};

struct LogMeanRow {
  uint64_t x = 0;
  double sum_log = 0.0;  // sum_{n<=x} log rho_1(n) for k = 2
  double c_hat = 0.0;    // sum_log / (x log x)
};

struct IndexShiftRow {
  uint64_t x = 0;
  uint64_t sum_reduced = 0;  // sum of rho_{k-h, j-h}(n)
  uint64_t sum_full = 0;     // sum of rho_{k, j}(n)
  double ratio = 0.0;        // sum_reduced / sum_full
};

// ---- per-n predicates, shared by the batch scans and the resumable CLI
// loops so both paths apply identical arithmetic ----

// The unique l >= 0 with (2^l rho1)^k <= x < (2^{l+1} rho1)^k, i.e.
// x^{1/k}/2^{l+1} < rho1 <= x^{1/k}/2^l, decided by exact integer powers.
// Requires rho1^k <= x, which every optimal profile of an n <= x satisfies.
uint32_t shell_index(uint64_t rho1, int k, uint64_t x);

// Exact test of rho_j > x^{alpha_j} with alpha_j = 2/(2 gamma + 1):
// equivalent to rho_j^{2 gamma + 1} > x^2, decided in 128-bit integers.
bool over_alpha_threshold(uint64_t rho_j, int gamma, uint64_t x);

// Composite top factor above the threshold, if any: the scanned structure
// property says rho_h(n) is prime for every h >= j once
// rho_j(n) > x^{alpha_j}.  Returns the witness description on failure.
std::optional<std::string> structure_violation(const OptimalProfile& p, int j,
                                               uint64_t x,
                                               const SieveTable& sieve);

// Two-sided shell bound for one profile: for every j >= 2,
// x^{1/k}/2^{l+1} < rho_j(n) <= 2^{(l+1)(k-1)} x^{1/k} where l is the shell
// of rho_1(n).  Lower side is exact in 128 bits; the upper side needs
// integers beyond 128 bits and is decided in exact big-integer arithmetic.
std::optional<std::string> shell_sandwich_violation(const OptimalProfile& p,
                                                    uint32_t l, uint64_t x);

// Witness string "(a,b,c);(d,e,f)" listing all minimizing tuples of n.
std::string tie_witnesses(uint64_t n, int k, const SieveTable& sieve);

// Mean-value row assembly: predicted is the j >= 2 main term, or the j = 1
// envelope, with NaN outside the predictor's domain.
ReportRow make_mean_row(int k, int j, uint64_t x, uint64_t exact_sum);

// ---- batch experiments ----

// sum_{n<=x} rho_j(n) against the main term (j >= 2) or envelope (j = 1)
// at each grid point.  Grid must be strictly increasing, within the sieve.
std::vector<ReportRow> mean_value_table(int k, int j,
                                        const std::vector<uint64_t>& grid,
                                        const SieveTable& sieve, int workers);

// Ties of problem (P_{n,k}) for n <= x: every n with tie_count >= 2 becomes
// a violation listing all minimizers.  checked == x.
ScanReport uniqueness_census(int k, uint64_t x, const SieveTable& sieve,
                             int workers);

// Scan of the prime-structure property at threshold x^{alpha_j}, 2 <= j <= k.
// checked counts the n above threshold; the property is a theorem, so any
// violation indicates an implementation bug.
ScanReport structure_scan(int k, int j, uint64_t x, const SieveTable& sieve,
                          int workers);

// Shell histogram plus sandwich verification for all n <= x.
ShellCensus shell_census(int k, uint64_t x, const SieveTable& sieve,
                         int workers);

// Number of tuples (d_1, ..., d_m) with d_1 ... d_m | n and
// v_i < d_i <= 2 v_i for each i.
uint64_t localized_divisor_count(uint64_t n, const std::vector<double>& v,
                                 const SieveTable& sieve);

// exact = #{n <= x : some tuple as above exists}; predicted =
// x / ((log x)^{Q(1/log r)} (log log x)^{3/2}) with r = (m+1)^{1/m}.
ReportRow windowed_divisor_census(uint64_t x, const std::vector<double>& v,
                                  const SieveTable& sieve, int workers);

// Squarefree n in (x/2, x] carrying a (k-1)-tuple of divisors, each in
// (x^{1/k}/2, x^{1/k}], with product dividing n.  Window membership is
// decided exactly: d is in the window iff d^k <= x < (2d)^k.
uint64_t squarefree_witness_count(uint64_t x, int k, const SieveTable& sieve);

// exact = sum over primes p <= y^{1/gamma} of p * #{n <= y/p : P^-(n) >= p,
// Omega(n) = k - j}; predicted = the T_j main term.  For j = k the inner
// count is 1, so exact is the sum of primes up to y.
ReportRow top_prime_sum(int k, int j, uint64_t y, const SieveTable& sieve);

// k = 2 envelope table: exact = sum_{n<=x} rho_1(n) with the k = 2
// envelope as predictor (ratio-only comparison).
std::vector<ReportRow> smallest_factor_envelope_table(
    const std::vector<uint64_t>& grid, const SieveTable& sieve, int workers);

// k = 2 logarithmic mean: sum_{n<=x} log rho_1(n) and the estimator
// c_hat = sum / (x log x).  Grid entries must be >= 3.
std::vector<LogMeanRow> log_mean_table(const std::vector<uint64_t>& grid,
                                       const SieveTable& sieve, int workers);

// Index-shift comparison: sum rho_{k-h, j-h} vs sum rho_{k, j} on the same
// grid (their main terms agree, both pairs sharing gamma).  2 <= j <= k,
// 0 <= h <= j-2.
std::vector<IndexShiftRow> index_shift_table(int k, int j, int h,
                                             const std::vector<uint64_t>& grid,
                                             const SieveTable& sieve,
                                             int workers);

}  // namespace minsurf
