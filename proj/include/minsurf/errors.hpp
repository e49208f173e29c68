#pragma once

#include <stdexcept>

namespace minsurf {

// Thrown when a requested table would exceed the configured memory budget.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a factor tuple fails its membership checks (non-divisor entry,
// product mismatch, or unsorted entries where ordering is required).
class invalid_tuple_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace minsurf
