#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minsurf/report.hpp"

namespace minsurf {

inline constexpr uint64_t kDefaultSieveLimit = 1'000'000;

// Bounds at or above this require the explicit --long-run acknowledgement:
// full sweeps run for hours at 10^7..10^8 on a desk machine.
inline constexpr uint64_t kLongRunThreshold = 10'000'000;

// One CLI invocation.  Unset optionals are 0 / empty; run() validates per
// command.  max_chunks is a testing hook (not exposed as a flag): a
// checkpointing command stops after that many chunks as if interrupted,
// leaving the sidecar behind for a resume test.
struct RunConfig {
  std::string command;
  int k = 2;
  int j = 0;
  uint64_t n = 0;
  uint64_t x = 0;
  std::vector<uint64_t> grid;
  std::vector<double> windows;
  int workers = 0;  // 0 = hardware concurrency
  std::optional<OutputFormat> format;
  std::string output;  // empty = stdout
  uint64_t sieve_limit = kDefaultSieveLimit;
  bool long_run = false;
  uint64_t max_chunks = 0;
};

// Executes the command.  Exit status: 0 success, 1 domain/range/usage or
// I/O error, 2 theorem violation (a structure or sandwich failure, or a
// k = 2 tie, all of which indicate an implementation bug).
int run(const RunConfig& cfg);

}  // namespace minsurf
