#include "minsurf/runner.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <thread>

#include "minsurf/asymptotics.hpp"
#include "minsurf/errors.hpp"
#include "minsurf/experiments.hpp"
#include "minsurf/sieve.hpp"
#include "minsurf/solver.hpp"

namespace minsurf {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Bad flag combinations and unmet preconditions all exit 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int resolved_workers(const RunConfig& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

OutputFormat resolved_format(const RunConfig& cfg, OutputFormat fallback) {
  return cfg.format.value_or(fallback);
}

const char* format_name(OutputFormat fmt) {
  switch (fmt) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::text: return "text";
  }
  return "csv";
}

// Largest n any part of the command must factor; also the sieve size, so
// memory tracks the requested bound rather than the configured ceiling.
uint64_t required_bound(const RunConfig& cfg) {
  const std::string& c = cfg.command;
  if (c == "solve") {
    if (cfg.n < 1) throw UsageError("solve requires --n >= 1");
    return cfg.n;
  }
  if (c == "sweep" || c == "census" || c == "structure" || c == "shells" ||
      c == "tsum") {
    if (cfg.x < 1) throw UsageError(c + " requires --x >= 1");
    return cfg.x;
  }
  if (c == "locdiv") {
    if ((cfg.n >= 1) == (cfg.x >= 1)) {
      throw UsageError("locdiv requires exactly one of --n (single count) "
                       "or --x (census)");
    }
    return cfg.n >= 1 ? cfg.n : cfg.x;
  }
  if (c == "meanvalue" || c == "ford" || c == "logmean") {
    if (cfg.grid.empty()) throw UsageError(c + " requires --grid");
    uint64_t top = 0;
    for (uint64_t g : cfg.grid) top = std::max(top, g);
    if (top < 1) throw UsageError(c + ": grid entries must be >= 1");
    return top;
  }
  throw UsageError("unknown command: " + c);
}

void require_j(const RunConfig& cfg) {
  if (cfg.j < 1) throw UsageError(cfg.command + " requires --j");
}

std::ofstream open_output_file(const std::string& path,
                               std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw UsageError("cannot open output file: " + path);
  return out;
}

// ---- checkpoint sidecar (sweep and census) ----
//
// Long scans persist progress every chunk in <output>.ckpt.json.  The file
// records the identifying parameters, the first n not yet covered, and for
// streaming output the byte size of the output after the last complete
// chunk; a resume truncates the output back to that size, so an interrupted
// run continues to a byte-identical file.  Completion removes the sidecar.

std::string sidecar_path(const RunConfig& cfg) {
  return cfg.output + ".ckpt.json";
}

json checkpoint_params(const RunConfig& cfg, OutputFormat fmt) {
  return json{{"command", cfg.command},
              {"k", cfg.k},
              {"x", cfg.x},
              {"sieve_limit", cfg.sieve_limit},
              {"format", format_name(fmt)}};
}

std::optional<json> load_checkpoint(const std::string& path,
                                    const json& params) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  if (!doc.contains("params") || doc["params"] != params) return std::nullopt;
  return doc;
}

void save_checkpoint(const std::string& path, const json& doc) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << doc.dump();
    out.flush();
    if (!out) throw std::ios_base::failure("cannot write checkpoint " + tmp);
  }
  fs::rename(tmp, path);
}

void remove_checkpoint(const std::string& path) {
  std::error_code ec;
  fs::remove(path, ec);
}

int run_solve(const RunConfig& cfg, const SieveTable& sieve) {
  const OptimalProfile p = solve(cfg.n, cfg.k, sieve);
  const OutputFormat fmt = resolved_format(cfg, OutputFormat::text);
  auto emit = [&](std::ostream& os) {
    ProfileWriter w(os, fmt);
    w.begin();
    w.write(p);
    w.finish();
  };
  if (cfg.output.empty()) {
    emit(std::cout);
  } else {
    auto out = open_output_file(cfg.output, std::ios::trunc);
    emit(out);
  }
  return 0;
}

int run_sweep(const RunConfig& cfg, const SieveTable& sieve) {
  const OutputFormat fmt = resolved_format(cfg, OutputFormat::csv);
  const int workers = resolved_workers(cfg);
  const bool to_file = !cfg.output.empty();
  const std::string ckpt = sidecar_path(cfg);
  const json params = checkpoint_params(cfg, fmt);

  uint64_t start_n = 1;
  uint64_t prior_rows = 0;
  bool resuming = false;
  if (to_file) {
    if (auto doc = load_checkpoint(ckpt, params)) {
      const uint64_t next_n = doc->value("next_n", uint64_t{1});
      const uint64_t bytes = doc->value("bytes", uint64_t{0});
      prior_rows = doc->value("rows", uint64_t{0});
      std::error_code ec;
      if (fs::exists(cfg.output, ec) && fs::file_size(cfg.output, ec) >= bytes) {
        fs::resize_file(cfg.output, bytes, ec);
        if (!ec) {
          start_n = next_n;
          resuming = true;
        }
      }
    }
  }

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (to_file) {
    file = open_output_file(cfg.output,
                            resuming ? (std::ios::out | std::ios::app)
                                     : std::ios::trunc);
    os = &file;
  }

  ProfileWriter writer(*os, fmt);
  if (resuming) {
    writer.resume(prior_rows);
  } else {
    writer.begin();
  }

  uint64_t chunks_done = 0;
  bool paused = false;
  sweep_range(
      start_n, cfg.x, cfg.k, sieve, workers,
      [&](const OptimalProfile& p) { writer.write(p); },
      [&](uint64_t chunk_end) {
        ++chunks_done;
        if (to_file) {
          file.flush();
          if (!file) throw std::ios_base::failure("write failed: " + cfg.output);
          save_checkpoint(ckpt, json{{"params", params},
                                     {"next_n", chunk_end + 1},
                                     {"rows", writer.rows_written()},
                                     {"bytes", fs::file_size(cfg.output)}});
        }
        if (cfg.max_chunks > 0 && chunks_done >= cfg.max_chunks &&
            chunk_end < cfg.x) {
          paused = true;
          return false;
        }
        return true;
      });

  if (paused) {
    std::cerr << "sweep paused after " << chunks_done
              << " chunk(s); rerun the same command to resume\n";
    return 0;
  }
  writer.finish();
  os->flush();
  if (to_file) {
    if (!file) throw std::ios_base::failure("write failed: " + cfg.output);
    file.close();
    remove_checkpoint(ckpt);
  }
  return 0;
}

int run_census(const RunConfig& cfg, const SieveTable& sieve) {
  const OutputFormat fmt = resolved_format(cfg, OutputFormat::csv);
  const int workers = resolved_workers(cfg);
  const bool to_file = !cfg.output.empty();
  const std::string ckpt = sidecar_path(cfg);
  const json params = checkpoint_params(cfg, fmt);

  ScanReport report;
  report.k = cfg.k;
  report.j = 0;
  report.x = cfg.x;
  uint64_t start_n = 1;
  if (to_file) {
    if (auto doc = load_checkpoint(ckpt, params)) {
      start_n = doc->value("next_n", uint64_t{1});
      report.checked = doc->value("checked", uint64_t{0});
      for (const json& v : doc->value("ties", json::array())) {
        report.violations.push_back(
            {v.value("n", uint64_t{0}), v.value("witness", std::string())});
      }
    }
  }

  uint64_t chunks_done = 0;
  bool paused = false;
  sweep_range(
      start_n, cfg.x, cfg.k, sieve, workers,
      [&](const OptimalProfile& p) {
        ++report.checked;
        if (p.tie_count >= 2) {
          report.violations.push_back({p.n, tie_witnesses(p.n, cfg.k, sieve)});
        }
      },
      [&](uint64_t chunk_end) {
        ++chunks_done;
        if (to_file) {
          json ties = json::array();
          for (const Violation& v : report.violations) {
            ties.push_back({{"n", v.n}, {"witness", v.detail}});
          }
          save_checkpoint(ckpt, json{{"params", params},
                                     {"next_n", chunk_end + 1},
                                     {"checked", report.checked},
                                     {"ties", std::move(ties)}});
        }
        if (cfg.max_chunks > 0 && chunks_done >= cfg.max_chunks &&
            chunk_end < cfg.x) {
          paused = true;
          return false;
        }
        return true;
      });

  if (paused) {
    std::cerr << "census paused after " << chunks_done
              << " chunk(s); rerun the same command to resume\n";
    return 0;
  }

  if (to_file) {
    auto out = open_output_file(cfg.output, std::ios::trunc);
    emit_scan_report(out, report, fmt, "ties_found");
    out.flush();
    if (!out) throw std::ios_base::failure("write failed: " + cfg.output);
    out.close();
    remove_checkpoint(ckpt);
  } else {
    emit_scan_report(std::cout, report, fmt, "ties_found");
  }

  if (!report.violations.empty()) {
    std::cerr << "census found " << report.violations.size()
              << " tie(s) for k=" << cfg.k << "\n";
    // k = 2 uniqueness is provable, so a tie there is an implementation
    // bug; for k >= 3 the question is open and ties are findings, not
    // failures.
    if (cfg.k == 2) return 2;
  }
  return 0;
}

// Plain aggregate commands: compute, emit, map violations to exit 2.
int run_aggregate(const RunConfig& cfg, const SieveTable& sieve) {
  const OutputFormat fmt = resolved_format(
      cfg, cfg.command == "locdiv" && cfg.n >= 1 ? OutputFormat::text
                                                 : OutputFormat::csv);
  const int workers = resolved_workers(cfg);
  int exit_code = 0;

  auto emit = [&](std::ostream& os) {
    if (cfg.command == "meanvalue") {
      require_j(cfg);
      emit_report_rows(os, mean_value_table(cfg.k, cfg.j, cfg.grid, sieve,
                                            workers), fmt);
    } else if (cfg.command == "structure") {
      require_j(cfg);
      const ScanReport report =
          structure_scan(cfg.k, cfg.j, cfg.x, sieve, workers);
      emit_scan_report(os, report, fmt, "violations");
      if (!report.violations.empty()) {
        std::cerr << "structure scan found " << report.violations.size()
                  << " violation(s): this indicates a bug\n";
        exit_code = 2;
      }
    } else if (cfg.command == "shells") {
      const ShellCensus census = shell_census(cfg.k, cfg.x, sieve, workers);
      emit_shell_census(os, census, fmt);
      if (!census.sandwich_violations.empty() || census.total() != cfg.x) {
        std::cerr << "shell census failed: "
                  << census.sandwich_violations.size()
                  << " sandwich violation(s), total " << census.total()
                  << " of " << cfg.x << "\n";
        exit_code = 2;
      }
    } else if (cfg.command == "locdiv") {
      if (cfg.n >= 1) {
        const uint64_t tau = localized_divisor_count(cfg.n, cfg.windows, sieve);
        if (fmt == OutputFormat::json) {
          os << "{\"n\":" << cfg.n << ",\"tau\":" << tau << "}\n";
        } else if (fmt == OutputFormat::csv) {
          os << "n,tau\n" << cfg.n << ',' << tau << '\n';
        } else {
          os << "n=" << cfg.n << " tau=" << tau << '\n';
        }
      } else {
        emit_report_rows(
            os, {windowed_divisor_census(cfg.x, cfg.windows, sieve, workers)},
            fmt);
      }
    } else if (cfg.command == "tsum") {
      require_j(cfg);
      emit_report_rows(os, {top_prime_sum(cfg.k, cfg.j, cfg.x, sieve)}, fmt);
    } else if (cfg.command == "ford") {
      emit_report_rows(os, smallest_factor_envelope_table(cfg.grid, sieve,
                                                          workers), fmt);
    } else if (cfg.command == "logmean") {
      emit_log_mean_rows(os, log_mean_table(cfg.grid, sieve, workers), fmt);
    } else {
      throw UsageError("unknown command: " + cfg.command);
    }
  };

  if (cfg.output.empty()) {
    emit(std::cout);
  } else {
    auto out = open_output_file(cfg.output, std::ios::trunc);
    emit(out);
    out.flush();
    if (!out) throw std::ios_base::failure("write failed: " + cfg.output);
  }
  return exit_code;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.command == "constants") {
    if (cfg.j < 1) throw UsageError("constants requires --j");
    const Constants c = constants_for(cfg.k, cfg.j);
    const OutputFormat fmt = resolved_format(cfg, OutputFormat::text);
    if (cfg.output.empty()) {
      emit_constants(std::cout, c, fmt);
    } else {
      auto out = open_output_file(cfg.output, std::ios::trunc);
      emit_constants(out, c, fmt);
    }
    return 0;
  }

  const uint64_t bound = required_bound(cfg);
  if (bound > cfg.sieve_limit) {
    throw UsageError("bound " + std::to_string(bound) +
                     " exceeds the sieve limit " +
                     std::to_string(cfg.sieve_limit) +
                     "; raise --sieve-limit explicitly");
  }
  if (bound >= kLongRunThreshold && !cfg.long_run) {
    throw UsageError("bound " + std::to_string(bound) +
                     " is a long-running scan; pass --long-run to confirm");
  }
  // Structure scans need j before the (possibly large) sieve is built.
  if (cfg.command == "structure" || cfg.command == "tsum" ||
      cfg.command == "meanvalue") {
    require_j(cfg);
  }

  const SieveTable sieve = build_sieve(std::max<uint64_t>(bound, 2));

  if (cfg.command == "solve") return run_solve(cfg, sieve);
  if (cfg.command == "sweep") return run_sweep(cfg, sieve);
  if (cfg.command == "census") return run_census(cfg, sieve);
  return run_aggregate(cfg, sieve);
}

}  // namespace

int run(const RunConfig& cfg) {
  try {
    return dispatch(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    // Domain, range, tuple, and resource errors from the library all mean
    // the request was invalid or unsatisfiable; bugs surface as exit 2
    // before this point.
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace minsurf
