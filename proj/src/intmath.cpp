#include "minsurf/intmath.hpp"

#include <cmath>

namespace minsurf {

uint64_t nth_root_floor(uint64_t m, int e) {
  assert(e >= 1);
  if (e == 1 || m <= 1) return m;
  uint64_t r = static_cast<uint64_t>(
      std::pow(static_cast<long double>(m), 1.0L / static_cast<long double>(e)));
  while (r > 0 && pow_exceeds(r, e, m)) --r;
  while (!pow_exceeds(r + 1, e, m)) ++r;
  return r;
}

}  // namespace minsurf
