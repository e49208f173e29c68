#include "minsurf/solver.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <stdexcept>

#include "minsurf/errors.hpp"
#include "minsurf/intmath.hpp"
#include "minsurf/parallel.hpp"

namespace minsurf {

namespace {

void check_solver_domain(uint64_t n, int k, const SieveTable& sieve) {
  if (k < 2) throw std::domain_error("solver: k must be at least 2");
  if (n < 1 || n > sieve.limit()) {
    throw std::out_of_range("solver: n outside [1, sieve limit]");
  }
}

// Membership checks for E_n plus the surface numerator.  The running
// product is tracked in 128 bits and bailed out as soon as it passes n, so
// adversarial inputs cannot overflow it.
uint64_t checked_surface(const std::vector<uint64_t>& v, uint64_t n) {
  if (n < 1) throw invalid_tuple_error("tuple: n must be positive");
  if (v.empty()) throw invalid_tuple_error("tuple: empty factor list");
  unsigned __int128 prod = 1;
  uint64_t prev = 1;
  for (uint64_t f : v) {
    if (f < 1) throw invalid_tuple_error("tuple: factor must be positive");
    if (f < prev) throw invalid_tuple_error("tuple: factors not non-decreasing");
    prev = f;
    prod *= f;
    if (prod > n) throw invalid_tuple_error("tuple: factor product exceeds n");
  }
  if (prod != n) throw invalid_tuple_error("tuple: factor product is not n");
  uint64_t s = 0;
  for (uint64_t f : v) s += n / f;  // exact: each f divides the product n
  return s;
}

// Depth-first walk over E_m restricted to factors >= min_factor, yielding
// tuples in lexicographic order.  divs is the sorted divisor list of the
// original n; every divisor of the remaining product m also divides n, so
// candidates are the d in divs with min_factor <= d, d | m and
// d^slots <= m (a smaller smallest-entry cannot complete the tuple, a
// larger one is some other branch's tail).  The final slot takes m itself;
// m >= min_factor holds there because the previous level enforced
// d <= sqrt(previous m).
template <class Sink>
void walk(const std::vector<uint64_t>& divs, uint64_t n, uint64_t m,
          int slots, uint64_t min_factor, uint64_t surface_acc,
          std::vector<uint64_t>& prefix, Sink&& sink) {
  if (slots == 1) {
    prefix.push_back(m);
    sink(prefix, surface_acc + n / m);
    prefix.pop_back();
    return;
  }
  const uint64_t cutoff = nth_root_floor(m, slots);
  auto it = std::lower_bound(divs.begin(), divs.end(), min_factor);
  for (; it != divs.end() && *it <= cutoff; ++it) {
    const uint64_t d = *it;
    if (m % d != 0) continue;
    prefix.push_back(d);
    walk(divs, n, m / d, slots - 1, d, surface_acc + n / d, prefix, sink);
    prefix.pop_back();
  }
}

}  // namespace

FactorTuple make_factor_tuple(std::vector<uint64_t> factors, uint64_t n) {
  FactorTuple t;
  t.surface_num = checked_surface(factors, n);
  t.n = n;
  t.factors = std::move(factors);
  return t;
}

uint64_t surface_numerator(const std::vector<uint64_t>& factors, uint64_t n) {
  return checked_surface(factors, n);
}

uint64_t surface_area(const std::vector<uint64_t>& factors, uint64_t n) {
  // sigma = 2 sum_h prod_{m != h} v_m = 2 n sum_h 1/v_h.
  return 2 * checked_surface(factors, n);
}

uint64_t OptimalProfile::factor(int j) const {
  if (j < 1 || j > k()) throw std::out_of_range("profile: factor index");
  return rho.factors[static_cast<size_t>(j) - 1];
}

uint64_t OptimalProfile::partial_product(int j) const {
  if (j < 1 || j > k()) throw std::out_of_range("profile: product index");
  uint64_t pi = 1;
  for (int i = 0; i < j; ++i) pi *= rho.factors[static_cast<size_t>(i)];
  return pi;  // divides n, so no overflow
}

void Solver::solve_into(uint64_t n, int k, OptimalProfile& out) {
  check_solver_domain(n, k, *sieve_);
  divisors_into(n, *sieve_, divs_);
  prefix_.clear();
  best_.clear();
  uint64_t best_surface = std::numeric_limits<uint64_t>::max();
  uint64_t ties = 0;
  walk(divs_, n, n, k, 1, 0, prefix_,
       [&](const std::vector<uint64_t>& v, uint64_t s) {
         if (s < best_surface) {
           best_surface = s;
           ties = 1;
           best_.assign(v.begin(), v.end());
         } else if (s == best_surface) {
           ++ties;
         }
       });
  assert(ties >= 1);
  out.n = n;
  out.tie_count = ties;
  out.rho.n = n;
  out.rho.surface_num = best_surface;
  out.rho.factors.assign(best_.begin(), best_.end());
}

OptimalProfile Solver::solve(uint64_t n, int k) {
  OptimalProfile out;
  solve_into(n, k, out);
  return out;
}

void Solver::for_each_tuple(uint64_t n, int k,
                            const std::function<void(const FactorTuple&)>& fn) {
  check_solver_domain(n, k, *sieve_);
  divisors_into(n, *sieve_, divs_);
  prefix_.clear();
  FactorTuple t;
  t.n = n;
  walk(divs_, n, n, k, 1, 0, prefix_,
       [&](const std::vector<uint64_t>& v, uint64_t s) {
         t.factors.assign(v.begin(), v.end());
         t.surface_num = s;
         fn(t);
       });
}

std::vector<FactorTuple> Solver::minimizers(uint64_t n, int k) {
  check_solver_domain(n, k, *sieve_);
  divisors_into(n, *sieve_, divs_);
  prefix_.clear();
  uint64_t best_surface = std::numeric_limits<uint64_t>::max();
  std::vector<FactorTuple> out;
  walk(divs_, n, n, k, 1, 0, prefix_,
       [&](const std::vector<uint64_t>& v, uint64_t s) {
         if (s < best_surface) {
           best_surface = s;
           out.clear();
         }
         if (s == best_surface) {
           FactorTuple t;
           t.n = n;
           t.factors.assign(v.begin(), v.end());
           t.surface_num = s;
           out.push_back(std::move(t));
         }
       });
  return out;
}

OptimalProfile solve(uint64_t n, int k, const SieveTable& sieve) {
  Solver solver(sieve);
  return solver.solve(n, k);
}

std::vector<FactorTuple> enumerate_tuples(uint64_t n, int k,
                                          const SieveTable& sieve) {
  std::vector<FactorTuple> out;
  Solver solver(sieve);
  solver.for_each_tuple(n, k,
                        [&](const FactorTuple& t) { out.push_back(t); });
  return out;
}

std::optional<FactorTuple> improve_once(const FactorTuple& t,
                                        const SieveTable& sieve) {
  const uint64_t surface_before = checked_surface(t.factors, t.n);
  if (t.n > sieve.limit()) {
    throw std::out_of_range("improve_once: n outside sieve limit");
  }
  const auto& v = t.factors;
  const int k = t.k();
  for (int h = 1; h < k; ++h) {
    const uint64_t vh = v[static_cast<size_t>(h)];
    if (vh == 1) continue;  // P^-(1) = +infinity: no pair can qualify
    const uint64_t p = sieve.spf(vh);
    for (int j = 0; j < h; ++j) {
      // v_j * p < v_h, in 128 bits so the product cannot wrap.
      if (static_cast<unsigned __int128>(v[static_cast<size_t>(j)]) * p < vh) {
        std::vector<uint64_t> w = v;
        w[static_cast<size_t>(j)] *= p;
        w[static_cast<size_t>(h)] = vh / p;
        std::sort(w.begin(), w.end());
        FactorTuple next = make_factor_tuple(std::move(w), t.n);
        assert(next.surface_num < surface_before);
        (void)surface_before;
        return next;
      }
    }
  }
  return std::nullopt;
}

FactorTuple local_search(FactorTuple t, const SieveTable& sieve) {
  for (;;) {
    std::optional<FactorTuple> next = improve_once(t, sieve);
    if (!next) return t;
    assert(next->surface_num < t.surface_num);
    t = std::move(*next);
  }
}

bool is_transfer_stable(const FactorTuple& t, const SieveTable& sieve) {
  checked_surface(t.factors, t.n);  // validate membership
  if (t.n > sieve.limit()) {
    throw std::out_of_range("is_transfer_stable: n outside sieve limit");
  }
  const auto& v = t.factors;
  const int k = t.k();
  for (int h = 1; h < k; ++h) {
    const uint64_t vh = v[static_cast<size_t>(h)];
    if (vh == 1) continue;
    const uint64_t p = sieve.spf(vh);
    for (int j = 0; j < h; ++j) {
      if (static_cast<unsigned __int128>(v[static_cast<size_t>(j)]) * p < vh) {
        return false;
      }
    }
  }
  return true;
}

namespace {

// Per-chunk transport for parallel sweeps: plain arrays, one slab per
// chunk, so workers allocate O(1) times per chunk and the consumer can
// replay profiles without touching the allocator per n.
struct ChunkProfiles {
  std::vector<uint64_t> flat;     // k factors per n, concatenated
  std::vector<uint64_t> surface;  // surface numerators
  std::vector<uint64_t> ties;     // tie counts
};

}  // namespace

void sweep_range(uint64_t lo, uint64_t hi, int k, const SieveTable& sieve,
                 int workers,
                 const std::function<void(const OptimalProfile&)>& fn,
                 const std::function<bool(uint64_t)>& chunk_done) {
  if (lo < 1) throw std::out_of_range("sweep: range must start at 1 or above");
  if (hi > sieve.limit()) throw std::out_of_range("sweep: bound above sieve limit");
  if (k < 2) throw std::domain_error("sweep: k must be at least 2");
  if (lo > hi) return;
  if (workers < 1) workers = 1;

  const size_t width = static_cast<size_t>(k);
  std::function<ChunkProfiles(uint64_t, uint64_t)> work =
      [&sieve, k, width](uint64_t a, uint64_t b) {
        ChunkProfiles cp;
        const size_t count = static_cast<size_t>(b - a + 1);
        cp.flat.reserve(count * width);
        cp.surface.reserve(count);
        cp.ties.reserve(count);
        Solver solver(sieve);
        OptimalProfile p;
        for (uint64_t n = a; n <= b; ++n) {
          solver.solve_into(n, k, p);
          cp.flat.insert(cp.flat.end(), p.rho.factors.begin(),
                         p.rho.factors.end());
          cp.surface.push_back(p.rho.surface_num);
          cp.ties.push_back(p.tie_count);
        }
        return cp;
      };

  OptimalProfile out;
  out.rho.factors.reserve(width);
  std::function<bool(uint64_t, uint64_t, ChunkProfiles&&)> consume =
      [&](uint64_t a, uint64_t b, ChunkProfiles&& cp) {
        size_t i = 0;
        for (uint64_t n = a; n <= b; ++n, ++i) {
          out.n = n;
          out.rho.n = n;
          out.rho.factors.assign(cp.flat.begin() + static_cast<ptrdiff_t>(i * width),
                                 cp.flat.begin() + static_cast<ptrdiff_t>((i + 1) * width));
          out.rho.surface_num = cp.surface[i];
          out.tie_count = cp.ties[i];
          fn(out);
        }
        return chunk_done ? chunk_done(b) : true;
      };

  for_chunks_ordered<ChunkProfiles>(lo, hi, workers, work, consume);
}

void sweep(uint64_t x, int k, const SieveTable& sieve, int workers,
           const std::function<void(const OptimalProfile&)>& fn) {
  if (x < 1) throw std::out_of_range("sweep: x must be at least 1");
  sweep_range(1, x, k, sieve, workers, fn);
}

}  // namespace minsurf
