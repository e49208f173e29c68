// minsurf: minimal-surface box factorizations and the experiments around
// them.  Every subcommand funnels into minsurf::run, which owns validation,
// sieve construction, parallel execution, and output.

#include <CLI11.hpp>

#include <string>

#include "minsurf/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "minimal-surface integer box factorizations: exact solver and "
      "asymptotic experiments"};
  app.require_subcommand(1);

  minsurf::RunConfig cfg;
  std::string format;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--workers", cfg.workers,
                    "worker threads (default: hardware concurrency)");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output", cfg.output,
                    "output path (default: standard output)");
    cmd->add_option("--sieve-limit", cfg.sieve_limit,
                    "largest admissible bound (default 1000000)")
        ->envname("MINSURF_SIEVE_LIMIT");
    cmd->add_flag("--long-run", cfg.long_run,
                  "acknowledge a bound of 10^7 or more");
  };

  struct Spec {
    const char* name;
    const char* help;
    bool k, j, n, x, grid, windows;
  };
  const Spec specs[] = {
      {"solve", "optimal k-factorization of a single n", true, false, true,
       false, false, false},
      {"sweep", "optimal profiles for every n <= x", true, false, false, true,
       false, false},
      {"census", "tie census for n <= x", true, false, false, true, false,
       false},
      {"meanvalue", "sum of rho_j up to each grid point vs the main term",
       true, true, false, false, true, false},
      {"structure", "prime-structure scan above the alpha_j threshold", true,
       true, false, true, false, false},
      {"shells", "dyadic shell histogram of rho_1 with sandwich checks", true,
       false, false, true, false, false},
      {"locdiv", "localized divisor tuples: --n counts one integer, --x "
                 "counts integers with a tuple", false, false, true, true,
       false, true},
      {"tsum", "prime-anchored sum T_j(y) with y = --x", true, true, false,
       true, false, false},
      {"ford", "sum of rho_1 for k=2 against the envelope", false, false,
       false, false, true, false},
      {"logmean", "log-mean estimator for k=2 over the grid", false, false,
       false, false, true, false},
      {"constants", "all constants attached to a pair (k, j)", true, true,
       false, false, false, false},
  };

  for (const Spec& s : specs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    if (s.k) cmd->add_option("--k", cfg.k, "dimension k >= 2");
    if (s.j) cmd->add_option("--j", cfg.j, "index j");
    if (s.n) cmd->add_option("--n", cfg.n, "single integer n");
    if (s.x) cmd->add_option("--x", cfg.x, "range bound x");
    if (s.grid) {
      cmd->add_option("--grid", cfg.grid, "evaluation points a,b,c")
          ->delimiter(',');
    }
    if (s.windows) {
      cmd->add_option("--v", cfg.windows, "window bases a,b,c")
          ->delimiter(',');
    }
    add_common(cmd);
    cmd->callback([&cfg, &s] { cfg.command = s.name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Collapse CLI11's per-error exit codes: anything malformed is 1, help
    // and version remain 0.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (format == "csv") {
    cfg.format = minsurf::OutputFormat::csv;
  } else if (format == "json") {
    cfg.format = minsurf::OutputFormat::json;
  }
  return minsurf::run(cfg);
}
