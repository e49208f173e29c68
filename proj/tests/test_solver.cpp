#include "minsurf/solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "minsurf/errors.hpp"
#include "minsurf/parallel.hpp"
#include "minsurf/sieve.hpp"

using namespace minsurf;

namespace {

// Independent oracle: enumerate every non-decreasing factor tuple by trying
// all integers d in [min_d, m] (no root cutoff, no divisor table), so the
// solver's pruning is checked against an enumeration that has none.
void oracle_tuples(uint64_t m, int slots, uint64_t min_d,
                   std::vector<uint64_t>& cur,
                   std::vector<std::vector<uint64_t>>& out) {
  if (slots == 1) {
    if (m >= min_d) {
      cur.push_back(m);
      out.push_back(cur);
      cur.pop_back();
    }
    return;
  }
  for (uint64_t d = min_d; d <= m; ++d) {
    if (m % d != 0) continue;
    cur.push_back(d);
    oracle_tuples(m / d, slots - 1, d, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<uint64_t>> oracle_enumerate(uint64_t n, int k) {
  std::vector<uint64_t> cur;
  std::vector<std::vector<uint64_t>> out;
  oracle_tuples(n, k, 1, cur, out);
  return out;
}

uint64_t oracle_surface(const std::vector<uint64_t>& v, uint64_t n) {
  uint64_t s = 0;
  for (uint64_t f : v) s += n / f;
  return s;
}

// Minimal surface over the unpruned enumeration, with minimizer count.
struct OracleOptimum {
  uint64_t surface = 0;
  std::vector<uint64_t> lex_smallest;
  uint64_t count = 0;
};

OracleOptimum oracle_solve(uint64_t n, int k) {
  OracleOptimum best;
  for (const auto& v : oracle_enumerate(n, k)) {
    const uint64_t s = oracle_surface(v, n);
    if (best.count == 0 || s < best.surface) {
      best.surface = s;
      best.lex_smallest = v;
      best.count = 1;
    } else if (s == best.surface) {
      ++best.count;
    }
  }
  return best;
}

// k = 2 closed form: the largest divisor with d^2 <= n, found by scan.
uint64_t closed_form_rho1(uint64_t n) {
  uint64_t best = 1;
  for (uint64_t d = 1; d * d <= n; ++d)
    if (n % d == 0) best = d;
  return best;
}

std::vector<uint64_t> factors_of(const OptimalProfile& p) {
  return p.rho.factors;
}

}  // namespace

TEST_CASE("surface numerator on pinned tuples") {
  CHECK(surface_numerator({2, 2, 2}, 8) == 12);
  CHECK(surface_numerator({1, 2, 4}, 8) == 14);
  CHECK(surface_numerator({1, 1, 8}, 8) == 17);
}

TEST_CASE("surface area is twice the numerator") {
  CHECK(surface_area({2, 2, 2}, 8) == 24);
  CHECK(surface_area({1, 2, 4}, 8) == 28);
  CHECK(surface_area({3, 4}, 12) == 14);

  const SieveTable s = build_sieve(300);
  Solver solver(s);
  for (uint64_t n : {12, 36, 210, 256}) {
    solver.for_each_tuple(n, 3, [&](const FactorTuple& t) {
      CHECK(surface_area(t.factors, n) == 2 * t.surface_num);
    });
  }
}

TEST_CASE("tuple validation rejects anything outside E_n") {
  CHECK_THROWS_AS(surface_numerator({}, 5), invalid_tuple_error);
  CHECK_THROWS_AS(surface_numerator({0, 2}, 0), invalid_tuple_error);
  CHECK_THROWS_AS(surface_numerator({2, 1}, 2), invalid_tuple_error);
  CHECK_THROWS_AS(surface_numerator({2, 3}, 12), invalid_tuple_error);
  CHECK_THROWS_AS(surface_numerator({3, 5}, 12), invalid_tuple_error);
  CHECK_THROWS_AS(make_factor_tuple({2, 4}, 12), invalid_tuple_error);
  CHECK_NOTHROW(make_factor_tuple({3, 4}, 12));
}

TEST_CASE("enumerate_tuples yields E_n in lexicographic order") {
  const SieveTable s = build_sieve(100);

  const auto e8 = enumerate_tuples(8, 3, s);
  REQUIRE(e8.size() == 3);
  CHECK(e8[0].factors == std::vector<uint64_t>{1, 1, 8});
  CHECK(e8[1].factors == std::vector<uint64_t>{1, 2, 4});
  CHECK(e8[2].factors == std::vector<uint64_t>{2, 2, 2});
  CHECK(e8[0].surface_num == 17);
  CHECK(e8[1].surface_num == 14);
  CHECK(e8[2].surface_num == 12);

  const auto e7 = enumerate_tuples(7, 2, s);
  REQUIRE(e7.size() == 1);
  CHECK(e7[0].factors == std::vector<uint64_t>{1, 7});

  const auto e1 = enumerate_tuples(1, 4, s);
  REQUIRE(e1.size() == 1);
  CHECK(e1[0].factors == std::vector<uint64_t>{1, 1, 1, 1});

  const auto e36 = enumerate_tuples(36, 2, s);
  REQUIRE(e36.size() == 5);
  CHECK(e36[0].factors == std::vector<uint64_t>{1, 36});
  CHECK(e36[4].factors == std::vector<uint64_t>{6, 6});
}

TEST_CASE("solve on pinned inputs") {
  const SieveTable s = build_sieve(100);

  const OptimalProfile p12 = solve(12, 2, s);
  CHECK(factors_of(p12) == std::vector<uint64_t>{3, 4});
  CHECK(p12.tie_count == 1);
  CHECK(p12.factor(1) == 3);
  CHECK(p12.factor(2) == 4);
  CHECK(p12.partial_product(1) == 3);
  CHECK(p12.partial_product(2) == 12);

  const OptimalProfile p8 = solve(8, 3, s);
  CHECK(factors_of(p8) == std::vector<uint64_t>{2, 2, 2});
  CHECK(p8.tie_count == 1);
  CHECK(p8.rho.surface_num == 12);

  const OptimalProfile p30 = solve(30, 3, s);
  CHECK(factors_of(p30) == std::vector<uint64_t>{2, 3, 5});
  CHECK(p30.tie_count == 1);

  for (int k : {2, 3, 5}) {
    const OptimalProfile p1 = solve(1, k, s);
    CHECK(factors_of(p1) == std::vector<uint64_t>(k, 1));
    CHECK(p1.tie_count == 1);
    CHECK(p1.partial_product(k) == 1);
  }
}

TEST_CASE("profile index accessors are 1-based and validated") {
  const SieveTable s = build_sieve(100);
  const OptimalProfile p = solve(30, 3, s);
  CHECK_THROWS_AS(p.factor(0), std::out_of_range);
  CHECK_THROWS_AS(p.factor(4), std::out_of_range);
  CHECK_THROWS_AS(p.partial_product(0), std::out_of_range);
  CHECK(p.partial_product(3) == 30);
}

TEST_CASE("solve range and dimension validation") {
  const SieveTable s = build_sieve(100);
  CHECK_THROWS_AS(solve(30, 1, s), std::domain_error);
  CHECK_THROWS_AS(solve(0, 2, s), std::out_of_range);
  CHECK_THROWS_AS(solve(101, 2, s), std::out_of_range);
}

TEST_CASE("solver matches the unpruned oracle up to 3000") {
  const uint64_t limit = 3000;
  const SieveTable s = build_sieve(limit);
  Solver solver(s);
  OptimalProfile p;
  for (int k : {2, 3, 4}) {
    for (uint64_t n = 1; n <= limit; ++n) {
      const OracleOptimum want = oracle_solve(n, k);
      solver.solve_into(n, k, p);
      REQUIRE_MESSAGE(p.rho.surface_num == want.surface, "n=", n, " k=", k);
      REQUIRE_MESSAGE(p.rho.factors == want.lex_smallest, "n=", n, " k=", k);
      REQUIRE_MESSAGE(p.tie_count == want.count, "n=", n, " k=", k);
    }
  }
}

TEST_CASE("pruned enumeration yields exactly the oracle's tuple set") {
  const SieveTable s = build_sieve(400);
  for (int k : {2, 3, 4}) {
    for (uint64_t n = 1; n <= 400; ++n) {
      const auto want = oracle_enumerate(n, k);
      const auto got = enumerate_tuples(n, k, s);
      REQUIRE_MESSAGE(got.size() == want.size(), "n=", n, " k=", k);
      for (size_t i = 0; i < got.size(); ++i) {
        REQUIRE(got[i].factors == want[i]);
        REQUIRE(got[i].surface_num == oracle_surface(want[i], n));
      }
    }
  }
}

TEST_CASE("k=2 closed form and uniqueness up to 10^4") {
  const uint64_t limit = 10'000;
  const SieveTable s = build_sieve(limit);
  Solver solver(s);
  OptimalProfile p;
  for (uint64_t n = 1; n <= limit; ++n) {
    const uint64_t d = closed_form_rho1(n);
    solver.solve_into(n, 2, p);
    REQUIRE_MESSAGE(p.factor(1) == d, "n=", n);
    REQUIRE_MESSAGE(p.factor(2) == n / d, "n=", n);
    REQUIRE_MESSAGE(p.tie_count == 1, "n=", n);
  }
}

TEST_CASE("improve_once applies the prime-transfer move") {
  const SieveTable s = build_sieve(100);

  const FactorTuple t = make_factor_tuple({1, 2, 8}, 16);
  CHECK(t.surface_num == 26);
  const auto moved = improve_once(t, s);
  REQUIRE(moved.has_value());
  CHECK(moved->factors == std::vector<uint64_t>{2, 2, 4});
  CHECK(moved->surface_num == 20);

  CHECK_FALSE(improve_once(make_factor_tuple({2, 3, 5}, 30), s).has_value());

  // (4, 9) is transfer-stable but not optimal: the necessary condition is
  // not sufficient.
  const FactorTuple stuck = make_factor_tuple({4, 9}, 36);
  CHECK_FALSE(improve_once(stuck, s).has_value());
  CHECK(solve(36, 2, s).rho.factors == std::vector<uint64_t>{6, 6});
}

TEST_CASE("improve_once strictly decreases the surface over all of E_n") {
  const SieveTable s = build_sieve(200);
  Solver solver(s);
  for (uint64_t n = 1; n <= 200; ++n) {
    solver.for_each_tuple(n, 3, [&](const FactorTuple& t) {
      const auto moved = improve_once(t, s);
      if (!moved) return;
      CHECK(moved->surface_num < t.surface_num);
      CHECK_NOTHROW(make_factor_tuple(moved->factors, n));
      CHECK(moved->n == n);
    });
  }
}

TEST_CASE("local_search reaches a transfer-stable point") {
  const SieveTable s = build_sieve(100);

  const FactorTuple start = make_factor_tuple({1, 1, 30}, 30);
  const FactorTuple end = local_search(start, s);
  CHECK(end.factors == std::vector<uint64_t>{2, 3, 5});

  const FactorTuple stuck = local_search(make_factor_tuple({4, 9}, 36), s);
  CHECK(stuck.factors == std::vector<uint64_t>{4, 9});

  // Any optimum is already a fixed point.
  for (uint64_t n : {12, 30, 36, 60, 96}) {
    const FactorTuple opt = solve(n, 3, s).rho;
    CHECK(local_search(opt, s).factors == opt.factors);
  }
}

TEST_CASE("transfer stability predicate") {
  const SieveTable s = build_sieve(100);
  CHECK(is_transfer_stable(make_factor_tuple({2, 3, 5}, 30), s));
  CHECK_FALSE(is_transfer_stable(make_factor_tuple({1, 2, 8}, 16), s));
  CHECK(is_transfer_stable(make_factor_tuple({1, 1, 1, 1}, 1), s));
  CHECK(is_transfer_stable(make_factor_tuple({4, 9}, 36), s));
}

TEST_CASE("every optimum satisfies the necessary condition") {
  const SieveTable s = build_sieve(2000);
  Solver solver(s);
  OptimalProfile p;
  for (int k : {2, 3}) {
    for (uint64_t n = 1; n <= 2000; ++n) {
      solver.solve_into(n, k, p);
      REQUIRE_MESSAGE(is_transfer_stable(p.rho, s), "n=", n, " k=", k);
    }
  }
}

TEST_CASE("trivial bounds rho_j^{k+1-j} <= n") {
  const SieveTable s = build_sieve(500);
  Solver solver(s);
  OptimalProfile p;
  for (int k : {2, 3, 4}) {
    for (uint64_t n = 1; n <= 500; ++n) {
      solver.solve_into(n, k, p);
      for (int j = 1; j <= k; ++j) {
        uint64_t pow = 1;
        for (int e = 0; e < k + 1 - j; ++e) pow *= p.factor(j);
        REQUIRE_MESSAGE(pow <= n, "n=", n, " k=", k, " j=", j);
      }
    }
  }
}

TEST_CASE("minimizers lists every optimum in lexicographic order") {
  const SieveTable s = build_sieve(300);
  Solver solver(s);
  for (uint64_t n = 1; n <= 300; ++n) {
    const OptimalProfile p = solver.solve(n, 3);
    const auto all = solver.minimizers(n, 3);
    REQUIRE(all.size() == p.tie_count);
    REQUIRE(all.front().factors == p.rho.factors);
    for (size_t i = 0; i < all.size(); ++i) {
      CHECK(all[i].surface_num == p.rho.surface_num);
      if (i > 0) CHECK(all[i - 1].factors < all[i].factors);
    }
  }
}

TEST_CASE("sweep emits the pinned k=2 sequences for x=10") {
  const SieveTable s = build_sieve(16);
  std::vector<uint64_t> rho1, rho2;
  sweep(10, 2, s, 1, [&](const OptimalProfile& p) {
    rho1.push_back(p.factor(1));
    rho2.push_back(p.factor(2));
  });
  CHECK(rho1 == std::vector<uint64_t>{1, 1, 1, 2, 1, 2, 1, 2, 3, 2});
  CHECK(rho2 == std::vector<uint64_t>{1, 2, 3, 2, 5, 3, 7, 4, 3, 5});

  std::vector<std::vector<uint64_t>> single;
  sweep(1, 3, s, 1,
        [&](const OptimalProfile& p) { single.push_back(p.rho.factors); });
  REQUIRE(single.size() == 1);
  CHECK(single[0] == std::vector<uint64_t>{1, 1, 1});
}

TEST_CASE("sweep profiles are identical for any worker count") {
  const uint64_t x = 5000;
  const SieveTable s = build_sieve(x);

  struct Row {
    uint64_t n, surface, ties;
    std::vector<uint64_t> factors;
    bool operator==(const Row& o) const {
      return n == o.n && surface == o.surface && ties == o.ties &&
             factors == o.factors;
    }
  };
  auto run = [&](int workers) {
    std::vector<Row> rows;
    sweep(x, 3, s, workers, [&](const OptimalProfile& p) {
      rows.push_back({p.n, p.rho.surface_num, p.tie_count, p.rho.factors});
    });
    return rows;
  };

  const auto serial = run(1);
  REQUIRE(serial.size() == x);
  for (uint64_t i = 0; i < x; ++i) REQUIRE(serial[i].n == i + 1);
  CHECK(run(4) == serial);
  CHECK(run(8) == serial);
}

TEST_CASE("chunk_done can stop a sweep at a chunk boundary") {
  const SieveTable s = build_sieve(200'000);
  uint64_t seen = 0;
  std::vector<uint64_t> boundaries;
  sweep_range(
      1, 200'000, 2, s, 2, [&](const OptimalProfile& p) { seen = p.n; },
      [&](uint64_t b) {
        boundaries.push_back(b);
        return false;
      });
  CHECK(seen == kChunkSize);
  REQUIRE(boundaries.size() == 1);
  CHECK(boundaries[0] == kChunkSize);
}
