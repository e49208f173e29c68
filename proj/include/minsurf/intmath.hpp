#pragma once

#include <cassert>
#include <cstdint>

namespace minsurf {

// True when b^e > m, computed without overflow for any uint64 inputs.
// Each step multiplies only after checking acc > m / b, so acc never
// leaves [0, m] until the comparison is decided.
inline bool pow_exceeds(uint64_t b, int e, uint64_t m) {
  assert(e >= 1);
  if (b <= 1) return b > m;  // 0^e = 0, 1^e = 1
  uint64_t acc = 1;
  for (int i = 0; i < e; ++i) {
    if (acc > m / b) return true;
    acc *= b;
  }
  return acc > m;
}

// True when b^e > bound for a 128-bit bound.  Callers keep b <= 2^40 and
// bound <= 2^86, so acc * b cannot wrap before the early exit fires.
inline bool pow_exceeds_u128(uint64_t b, int e, unsigned __int128 bound) {
  assert(e >= 1);
  if (b == 0) return false;
  unsigned __int128 acc = 1;
  for (int i = 0; i < e; ++i) {
    acc *= b;
    if (acc > bound) return true;
  }
  return false;
}

// floor(m^(1/e)).  A long-double seed is corrected by exact comparisons,
// so the result is right even where the float estimate drifts.
uint64_t nth_root_floor(uint64_t m, int e);

}  // namespace minsurf
