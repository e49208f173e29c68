#include "minsurf/experiments.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "minsurf/asymptotics.hpp"
#include "minsurf/intmath.hpp"
#include "minsurf/parallel.hpp"

namespace minsurf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_tuple(const std::vector<uint64_t>& v) {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  os << ')';
  return os.str();
}

void check_grid(const std::vector<uint64_t>& grid, const SieveTable& sieve,
                uint64_t min_entry) {
  uint64_t prev = 0;
  for (uint64_t x : grid) {
    if (x < min_entry) {
      throw std::domain_error("grid: entry below the smallest admissible x");
    }
    if (x <= prev) throw std::domain_error("grid: must be strictly increasing");
    if (x > sieve.limit()) {
      throw std::out_of_range("grid: entry above sieve limit");
    }
    prev = x;
  }
}

// sum_{n <= x} rho_j(n) at every grid point, one sweep to max(grid).
std::vector<uint64_t> sums_at_grid(int k, int j,
                                   const std::vector<uint64_t>& grid,
                                   const SieveTable& sieve, int workers) {
  std::vector<uint64_t> sums;
  sums.reserve(grid.size());
  if (grid.empty()) return sums;
  uint64_t acc = 0;
  size_t gi = 0;
  sweep(grid.back(), k, sieve, workers, [&](const OptimalProfile& p) {
    acc += p.factor(j);
    if (gi < grid.size() && p.n == grid[gi]) {
      sums.push_back(acc);
      ++gi;
    }
  });
  return sums;
}

}  // namespace

uint64_t ShellCensus::total() const {
  return std::accumulate(counts.begin(), counts.end(), uint64_t{0});
}

uint32_t shell_index(uint64_t rho1, int k, uint64_t x) {
  if (rho1 < 1 || x < 1 || pow_exceeds(rho1, k, x)) {
    throw std::domain_error("shell_index: requires 1 <= rho1 with rho1^k <= x");
  }
  uint32_t l = 0;
  for (;;) {
    // Invariant: (2^l rho1)^k <= x, hence rho1 << l <= x^{1/k} < 2^41 and
    // the next shift cannot overflow.
    const uint64_t next = rho1 << (l + 1);
    if (pow_exceeds(next, k, x)) return l;
    ++l;
  }
}

bool over_alpha_threshold(uint64_t rho_j, int gamma, uint64_t x) {
  // rho_j > x^{2/(2 gamma + 1)}  <=>  rho_j^{2 gamma + 1} > x^2.
  const unsigned __int128 bound =
      static_cast<unsigned __int128>(x) * static_cast<unsigned __int128>(x);
  return pow_exceeds_u128(rho_j, 2 * gamma + 1, bound);
}

std::optional<std::string> structure_violation(const OptimalProfile& p, int j,
                                               uint64_t x,
                                               const SieveTable& sieve) {
  (void)x;
  const int k = p.k();
  for (int h = j; h <= k; ++h) {
    const uint64_t f = p.factor(h);
    if (!sieve.is_prime(f)) {
      std::ostringstream os;
      os << "rho=" << format_tuple(p.rho.factors) << " rho_" << h << "=" << f
         << " composite";
      return os.str();
    }
  }
  return std::nullopt;
}

std::optional<std::string> shell_sandwich_violation(const OptimalProfile& p,
                                                    uint32_t l, uint64_t x) {
  namespace mp = boost::multiprecision;
  const int k = p.k();
  for (int j = 2; j <= k; ++j) {
    const uint64_t rho_j = p.factor(j);

    // Lower side: x^{1/k}/2^{l+1} < rho_j  <=>  x < (2^{l+1} rho_j)^k.
    // b <= 2^40 * 2^42 and acc <= x before each multiply, so the 128-bit
    // product never wraps.
    const unsigned __int128 b = static_cast<unsigned __int128>(rho_j)
                                << (l + 1);
    unsigned __int128 acc = 1;
    bool lower_ok = false;
    for (int i = 0; i < k; ++i) {
      acc *= b;
      if (acc > x) {
        lower_ok = true;
        break;
      }
    }
    // Upper side: rho_j <= 2^{(l+1)(k-1)} x^{1/k}  <=>
    // rho_j^k <= 2^{k(l+1)(k-1)} x.  The right side can exceed 128 bits,
    // so this one runs in arbitrary precision.
    const unsigned shift =
        static_cast<unsigned>(k) * (l + 1) * static_cast<unsigned>(k - 1);
    const bool upper_ok =
        mp::pow(mp::cpp_int(rho_j), static_cast<unsigned>(k)) <=
        (mp::cpp_int(x) << shift);

    if (!lower_ok || !upper_ok) {
      std::ostringstream os;
      os << "rho=" << format_tuple(p.rho.factors) << " shell l=" << l
         << " rho_" << j << "=" << rho_j << " outside "
         << (lower_ok ? "upper" : "lower") << " bound";
      return os.str();
    }
  }
  return std::nullopt;
}

std::string tie_witnesses(uint64_t n, int k, const SieveTable& sieve) {
  Solver solver(sieve);
  const std::vector<FactorTuple> mins = solver.minimizers(n, k);
  std::string out;
  for (size_t i = 0; i < mins.size(); ++i) {
    if (i) out += ';';
    out += format_tuple(mins[i].factors);
  }
  return out;
}

ReportRow make_mean_row(int k, int j, uint64_t x, uint64_t exact_sum) {
  ReportRow row;
  row.x = x;
  row.exact = exact_sum;
  if (j == 1) {
    row.predicted = x >= 16 ? smallest_factor_envelope(k, static_cast<double>(x))
                            : kNaN;
  } else {
    row.predicted =
        x > 1 ? mean_main_term(k, j, static_cast<double>(x)) : kNaN;
  }
  row.ratio = static_cast<double>(exact_sum) / row.predicted;
  return row;
}

std::vector<ReportRow> mean_value_table(int k, int j,
                                        const std::vector<uint64_t>& grid,
                                        const SieveTable& sieve, int workers) {
  gamma_alpha(k, j);  // validates k >= 2, 1 <= j <= k
  check_grid(grid, sieve, 1);
  const std::vector<uint64_t> sums = sums_at_grid(k, j, grid, sieve, workers);
  std::vector<ReportRow> rows;
  rows.reserve(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    rows.push_back(make_mean_row(k, j, grid[i], sums[i]));
  }
  return rows;
}

ScanReport uniqueness_census(int k, uint64_t x, const SieveTable& sieve,
                             int workers) {
  ScanReport report;
  report.k = k;
  report.j = 0;
  report.x = x;
  sweep(x, k, sieve, workers, [&](const OptimalProfile& p) {
    ++report.checked;
    if (p.tie_count >= 2) {
      report.violations.push_back({p.n, tie_witnesses(p.n, k, sieve)});
    }
  });
  return report;
}

ScanReport structure_scan(int k, int j, uint64_t x, const SieveTable& sieve,
                          int workers) {
  if (j < 2) throw std::domain_error("structure_scan: j must be >= 2");
  const int gamma = gamma_alpha(k, j).gamma;
  ScanReport report;
  report.k = k;
  report.j = j;
  report.x = x;
  sweep(x, k, sieve, workers, [&](const OptimalProfile& p) {
    if (!over_alpha_threshold(p.factor(j), gamma, x)) return;
    ++report.checked;
    if (auto witness = structure_violation(p, j, x, sieve)) {
      report.violations.push_back({p.n, std::move(*witness)});
    }
  });
  return report;
}

ShellCensus shell_census(int k, uint64_t x, const SieveTable& sieve,
                         int workers) {
  ShellCensus census;
  census.k = k;
  census.x = x;
  sweep(x, k, sieve, workers, [&](const OptimalProfile& p) {
    const uint32_t l = shell_index(p.factor(1), k, x);
    if (census.counts.size() <= l) census.counts.resize(l + 1, 0);
    ++census.counts[l];
    if (auto witness = shell_sandwich_violation(p, l, x)) {
      census.sandwich_violations.push_back({p.n, std::move(*witness)});
    }
  });
  return census;
}

namespace {

// Tuple recursion over the sorted divisor list of the original n: at each
// window, candidates are divisors d of the remaining product with
// v < d <= 2v.  Divisor values are below 2^40, hence exact as doubles.
uint64_t count_window_tuples(const std::vector<uint64_t>& divs, uint64_t m,
                             const double* v, size_t windows) {
  if (windows == 0) return 1;
  uint64_t total = 0;
  for (uint64_t d : divs) {
    const double dd = static_cast<double>(d);
    if (dd > 2.0 * v[0]) break;  // divisors sorted: nothing further fits
    if (dd <= v[0] || m % d != 0) continue;
    total += count_window_tuples(divs, m / d, v + 1, windows - 1);
  }
  return total;
}

bool has_window_tuple(const std::vector<uint64_t>& divs, uint64_t m,
                      const double* v, size_t windows) {
  if (windows == 0) return true;
  for (uint64_t d : divs) {
    const double dd = static_cast<double>(d);
    if (dd > 2.0 * v[0]) break;
    if (dd <= v[0] || m % d != 0) continue;
    if (has_window_tuple(divs, m / d, v + 1, windows - 1)) return true;
  }
  return false;
}

void check_windows(const std::vector<double>& v) {
  if (v.empty()) throw std::domain_error("windows: need at least one base");
  for (double b : v) {
    if (!(b >= 0.0)) throw std::domain_error("windows: bases must be >= 0");
  }
}

}  // namespace

uint64_t localized_divisor_count(uint64_t n, const std::vector<double>& v,
                                 const SieveTable& sieve) {
  if (n < 1 || n > sieve.limit()) {
    throw std::out_of_range("localized_divisor_count: n outside sieve");
  }
  check_windows(v);
  const std::vector<uint64_t> divs = divisors(n, sieve);
  return count_window_tuples(divs, n, v.data(), v.size());
}

ReportRow windowed_divisor_census(uint64_t x, const std::vector<double>& v,
                                  const SieveTable& sieve, int workers) {
  if (x < 1 || x > sieve.limit()) {
    throw std::out_of_range("windowed_divisor_census: x outside sieve");
  }
  check_windows(v);
  if (workers < 1) workers = 1;

  std::function<uint64_t(uint64_t, uint64_t)> work = [&](uint64_t a,
                                                         uint64_t b) {
    uint64_t count = 0;
    std::vector<uint64_t> divs;
    for (uint64_t n = a; n <= b; ++n) {
      divisors_into(n, sieve, divs);
      if (has_window_tuple(divs, n, v.data(), v.size())) ++count;
    }
    return count;
  };
  uint64_t exact = 0;
  std::function<bool(uint64_t, uint64_t, uint64_t&&)> consume =
      [&](uint64_t, uint64_t, uint64_t&& c) {
        exact += c;
        return true;
      };
  for_chunks_ordered<uint64_t>(1, x, workers, work, consume);

  const size_t m = v.size();
  const double r = std::pow(static_cast<double>(m + 1), 1.0 / m);
  ReportRow row;
  row.x = x;
  row.exact = exact;
  row.predicted =
      x >= 16 ? iterated_log_envelope(1.0, q_rate(1.0 / std::log(r)),
                                      static_cast<double>(x))
              : kNaN;
  row.ratio = static_cast<double>(exact) / row.predicted;
  return row;
}

namespace {

// d lies in (x^{1/k}/2, x^{1/k}]  <=>  d^k <= x < (2d)^k, decided exactly.
bool in_root_window(uint64_t d, int k, uint64_t x) {
  return !pow_exceeds(d, k, x) && pow_exceeds(2 * d, k, x);
}

bool has_root_window_tuple(const std::vector<uint64_t>& divs, uint64_t m,
                           int slots, int k, uint64_t x) {
  if (slots == 0) return true;
  for (uint64_t d : divs) {
    if (pow_exceeds(d, k, x)) break;  // beyond the window's top edge
    if (!in_root_window(d, k, x) || m % d != 0) continue;
    if (has_root_window_tuple(divs, m / d, slots - 1, k, x)) return true;
  }
  return false;
}

}  // namespace

uint64_t squarefree_witness_count(uint64_t x, int k, const SieveTable& sieve) {
  if (k < 2) throw std::domain_error("squarefree_witness_count: k >= 2");
  if (x < 1 || x > sieve.limit()) {
    throw std::out_of_range("squarefree_witness_count: x outside sieve");
  }
  uint64_t count = 0;
  std::vector<uint64_t> divs;
  for (uint64_t n = x / 2 + 1; n <= x; ++n) {
    if (mobius(n, sieve) == 0) continue;
    divisors_into(n, sieve, divs);
    if (has_root_window_tuple(divs, n, k - 1, k, x)) ++count;
  }
  return count;
}

ReportRow top_prime_sum(int k, int j, uint64_t y, const SieveTable& sieve) {
  if (j < 2) throw std::domain_error("top_prime_sum: j must be >= 2");
  const int gamma = gamma_alpha(k, j).gamma;
  if (y < 1 || y > sieve.limit()) {
    throw std::out_of_range("top_prime_sum: y outside sieve");
  }

  const uint64_t p_max = nth_root_floor(y, gamma);
  uint64_t exact = 0;
  if (j == k) {
    // Inner count is #{n <= y/p : P^-(n) >= p, Omega(n) = 0} = #{1} = 1.
    for (uint64_t p = 2; p <= p_max; ++p) {
      if (sieve.is_prime(p)) exact += p;
    }
  } else {
    const int target = k - j;
    const uint64_t half = y / 2;  // largest inner bound, reached at p = 2
    std::vector<uint8_t> omega(half + 1, 0);
    for (uint64_t n = 2; n <= half; ++n) {
      omega[n] = static_cast<uint8_t>(omega[n / sieve.spf(n)] + 1);
    }
    for (uint64_t p = 2; p <= p_max; ++p) {
      if (!sieve.is_prime(p)) continue;
      const uint64_t bound = y / p;
      uint64_t inner = 0;
      for (uint64_t n = 2; n <= bound; ++n) {
        if (sieve.spf(n) >= p && omega[n] == target) ++inner;
      }
      exact += p * inner;
    }
  }

  ReportRow row;
  row.x = y;
  row.exact = exact;
  row.predicted =
      y > 1 ? top_prime_sum_main_term(k, j, static_cast<double>(y)) : kNaN;
  row.ratio = static_cast<double>(exact) / row.predicted;
  return row;
}

std::vector<ReportRow> smallest_factor_envelope_table(
    const std::vector<uint64_t>& grid, const SieveTable& sieve, int workers) {
  return mean_value_table(2, 1, grid, sieve, workers);
}

std::vector<LogMeanRow> log_mean_table(const std::vector<uint64_t>& grid,
                                       const SieveTable& sieve, int workers) {
  check_grid(grid, sieve, 3);
  std::vector<LogMeanRow> rows;
  rows.reserve(grid.size());
  if (grid.empty()) return rows;
  double acc = 0.0;
  size_t gi = 0;
  // The accumulation runs on the consumer thread in n order, so the
  // floating-point sum is identical for every worker count.
  sweep(grid.back(), 2, sieve, workers, [&](const OptimalProfile& p) {
    acc += std::log(static_cast<double>(p.factor(1)));
    if (gi < grid.size() && p.n == grid[gi]) {
      LogMeanRow row;
      row.x = p.n;
      row.sum_log = acc;
      row.c_hat =
          acc / (static_cast<double>(p.n) * std::log(static_cast<double>(p.n)));
      rows.push_back(row);
      ++gi;
    }
  });
  return rows;
}

std::vector<IndexShiftRow> index_shift_table(int k, int j, int h,
                                             const std::vector<uint64_t>& grid,
                                             const SieveTable& sieve,
                                             int workers) {
  if (j < 2 || j > k) throw std::domain_error("index_shift: 2 <= j <= k");
  if (h < 0 || h > j - 2) throw std::domain_error("index_shift: 0 <= h <= j-2");
  check_grid(grid, sieve, 1);
  const std::vector<uint64_t> reduced =
      sums_at_grid(k - h, j - h, grid, sieve, workers);
  const std::vector<uint64_t> full = sums_at_grid(k, j, grid, sieve, workers);
  std::vector<IndexShiftRow> rows;
  rows.reserve(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    IndexShiftRow row;
    row.x = grid[i];
    row.sum_reduced = reduced[i];
    row.sum_full = full[i];
    row.ratio = static_cast<double>(reduced[i]) / static_cast<double>(full[i]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace minsurf
