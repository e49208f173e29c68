// End-to-end tests of the minsurf binary (via popen) and of the runner
// library entry point (for the checkpoint hooks the CLI does not expose).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "minsurf/runner.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Runs `minsurf <args>`, capturing stdout through the pipe and stderr via a
// scratch file.  `env` is prepended verbatim (VAR=value pairs).
CmdResult run_cli(const std::string& args, const std::string& env = "") {
  const fs::path err_file =
      fs::temp_directory_path() / "minsurf_cli_stderr.txt";
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += std::string(MINSURF_BIN) + " " + args + " 2>" + err_file.string();
  CmdResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.err = slurp(err_file);
  fs::remove(err_file);
  return r;
}

fs::path scratch(const std::string& name) {
  return fs::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("solve prints the one-line profile") {
  const CmdResult r = run_cli("solve --n 30 --k 3");
  CHECK(r.status == 0);
  CHECK(r.out == "n=30 k=3 rho=2,3,5 surface_num=31 ties=1\n");
}

TEST_CASE("solve emits csv and json when asked") {
  const CmdResult csv = run_cli("solve --n 12 --k 2 --format csv");
  CHECK(csv.status == 0);
  CHECK(csv.out ==
        "n,k,rho,surface_num,tie_count\n"
        "12,2,\"3,4\",7,1\n");

  const CmdResult js = run_cli("solve --n 12 --k 2 --format json");
  CHECK(js.status == 0);
  const json parsed = json::parse(js.out);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0]["n"] == 12);
  CHECK(parsed[0]["rho"] == json::array({3, 4}));
}

TEST_CASE("constants subcommand") {
  const CmdResult text = run_cli("constants --k 2 --j 2");
  CHECK(text.status == 0);
  CHECK(text.out ==
        "k=2 j=2 gamma=1 alpha=2/3 delta_k=0.08607133206 C=0.8224670334\n");

  const CmdResult js = run_cli("constants --k 3 --j 1 --format json");
  CHECK(js.status == 0);
  const json parsed = json::parse(js.out);
  CHECK(parsed["gamma"] == 3);
  CHECK(parsed["coefficient"].is_null());
}

TEST_CASE("census reports zero ties") {
  const CmdResult r = run_cli("census --k 3 --x 2000");
  CHECK(r.status == 0);
  CHECK(r.out.find("ties_found,0") != std::string::npos);
  CHECK(r.out.find("checked,2000") != std::string::npos);

  const CmdResult r2 = run_cli("census --k 2 --x 2000 --format json");
  CHECK(r2.status == 0);
  CHECK(json::parse(r2.out)["ties_found"] == 0);
}

TEST_CASE("structure and shells succeed and exit 0") {
  const CmdResult st = run_cli("structure --k 2 --j 2 --x 1000");
  CHECK(st.status == 0);
  CHECK(st.out.find("violations,0") != std::string::npos);

  const CmdResult sh = run_cli("shells --k 2 --x 1000");
  CHECK(sh.status == 0);
  // The histogram partitions [1, x]: column sums equal x.
  uint64_t total = 0;
  std::istringstream lines(sh.out);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    total += std::stoull(line.substr(line.find(',') + 1));
  }
  CHECK(total == 1000);
}

TEST_CASE("aggregate one-row commands") {
  const CmdResult t = run_cli("tsum --k 2 --j 2 --x 100");
  CHECK(t.status == 0);
  CHECK(t.out.find("100,1060,1085.736205,0.9762960794") != std::string::npos);

  const CmdResult l = run_cli("locdiv --n 12 --v 2");
  CHECK(l.status == 0);
  CHECK(l.out == "n=12 tau=2\n");

  const CmdResult lx = run_cli("locdiv --x 20 --v 2 --format csv");
  CHECK(lx.status == 0);
  CHECK(lx.out.find("20,10,") != std::string::npos);
}

TEST_CASE("grid commands") {
  const CmdResult mv = run_cli("meanvalue --k 2 --j 2 --grid 10,100");
  CHECK(mv.status == 0);
  CHECK(mv.out.substr(0, 30) == "x,exact,predicted,ratio\n10,35,");

  const CmdResult ford = run_cli("ford --grid 10,16");
  CHECK(ford.status == 0);
  CHECK(ford.out.find("10,16,nan,nan") != std::string::npos);
  CHECK(ford.out.find("16,30,56.92454625,") != std::string::npos);

  const CmdResult lm = run_cli("logmean --grid 10");
  CHECK(lm.status == 0);
  CHECK(lm.out ==
        "x,sum_log,c_hat\n"
        "10,3.871201011,0.1681241237\n");
}

TEST_CASE("malformed invocations exit 1 with a message") {
  CHECK(run_cli("frobnicate").status == 1);
  CHECK(run_cli("").status == 1);
  CHECK(run_cli("solve --bogus 3").status == 1);
  CHECK(run_cli("solve --n abc --k 2").status == 1);
  CHECK(run_cli("solve --format yaml --n 3 --k 2").status == 1);

  const CmdResult missing = run_cli("solve --k 2");
  CHECK(missing.status == 1);
  CHECK(missing.err.find("--n") != std::string::npos);

  const CmdResult noj = run_cli("meanvalue --k 2 --grid 10");
  CHECK(noj.status == 1);
  CHECK(noj.err.find("--j") != std::string::npos);

  CHECK(run_cli("locdiv --n 5 --x 10 --v 2").status == 1);
  CHECK(run_cli("locdiv --v 2").status == 1);

  // Domain errors from the library surface as exit 1 too.
  CHECK(run_cli("solve --n 5 --k 1").status == 1);
  CHECK(run_cli("meanvalue --k 2 --j 3 --grid 10").status == 1);
  CHECK(run_cli("tsum --k 3 --j 1 --x 100").status == 1);
}

TEST_CASE("help exits 0") {
  CHECK(run_cli("--help").out.find("solve") != std::string::npos);
  CHECK(run_cli("--help").status == 0);
  CHECK(run_cli("sweep --help").status == 0);
}

TEST_CASE("bound gates: sieve limit and long-run acknowledgement") {
  const CmdResult over = run_cli("solve --n 2000000 --k 2");
  CHECK(over.status == 1);
  CHECK(over.err.find("--sieve-limit") != std::string::npos);

  const CmdResult ok = run_cli("solve --n 2000000 --k 2 --sieve-limit 2000000");
  CHECK(ok.status == 0);
  CHECK(ok.out.find("n=2000000") == 0);

  // The long-run gate fires before any sieve is built, so this returns
  // instantly despite naming a 10^7 bound.
  const CmdResult lr =
      run_cli("census --k 3 --x 10000000 --sieve-limit 10000000");
  CHECK(lr.status == 1);
  CHECK(lr.err.find("--long-run") != std::string::npos);
}

TEST_CASE("sieve limit honors the environment variable") {
  const CmdResult blocked =
      run_cli("solve --n 1500 --k 2", "MINSURF_SIEVE_LIMIT=100");
  CHECK(blocked.status == 1);
  CHECK(blocked.err.find("sieve limit 100") != std::string::npos);

  // An explicit flag wins over the environment.
  const CmdResult flag = run_cli("solve --n 1500 --k 2 --sieve-limit 2000",
                                 "MINSURF_SIEVE_LIMIT=100");
  CHECK(flag.status == 0);
}

TEST_CASE("--output writes the file and keeps stdout quiet") {
  const fs::path out = scratch("minsurf_out.csv");
  fs::remove(out);
  const CmdResult r =
      run_cli("sweep --k 2 --x 10 --format csv --output " + out.string());
  CHECK(r.status == 0);
  CHECK(r.out.empty());
  const std::string body = slurp(out);
  CHECK(body.substr(0, 26) == "n,k,rho,surface_num,tie_co");
  CHECK(body.find("10,2,\"2,5\",7,1\n") != std::string::npos);
  CHECK_FALSE(fs::exists(out.string() + ".ckpt.json"));
  fs::remove(out);
}

TEST_CASE("sweep output is byte-identical across worker counts") {
  const fs::path a = scratch("minsurf_w1.csv");
  const fs::path b = scratch("minsurf_w8.csv");
  CHECK(run_cli("sweep --k 3 --x 70000 --workers 1 --format csv --output " +
                a.string())
            .status == 0);
  CHECK(run_cli("sweep --k 3 --x 70000 --workers 8 --format csv --output " +
                b.string())
            .status == 0);
  CHECK(slurp(a) == slurp(b));
  fs::remove(a);
  fs::remove(b);
}

TEST_CASE("interrupted sweep resumes to a byte-identical file") {
  for (const std::string fmt : {"csv", "json"}) {
    const fs::path whole = scratch("minsurf_whole." + fmt);
    const fs::path parts = scratch("minsurf_parts." + fmt);
    const fs::path sidecar = fs::path(parts.string() + ".ckpt.json");
    for (const auto& p : {whole, parts, sidecar}) fs::remove(p);

    minsurf::RunConfig cfg;
    cfg.command = "sweep";
    cfg.k = 2;
    cfg.x = 150'000;
    cfg.workers = 2;
    cfg.format = fmt == "csv" ? minsurf::OutputFormat::csv
                              : minsurf::OutputFormat::json;
    cfg.output = whole.string();
    REQUIRE(minsurf::run(cfg) == 0);

    // Stop after one chunk, as an interruption would; the sidecar stays.
    cfg.output = parts.string();
    cfg.max_chunks = 1;
    REQUIRE(minsurf::run(cfg) == 0);
    REQUIRE(fs::exists(sidecar));
    const json ck = json::parse(slurp(sidecar));
    CHECK(ck["next_n"] == 65537);
    CHECK(ck["rows"] == 65536);
    CHECK(ck["params"]["command"] == "sweep");

    // Resume with a different worker count; the result must not change.
    cfg.max_chunks = 0;
    cfg.workers = 4;
    REQUIRE(minsurf::run(cfg) == 0);
    CHECK_FALSE(fs::exists(sidecar));
    CHECK(slurp(parts) == slurp(whole));

    for (const auto& p : {whole, parts}) fs::remove(p);
  }
}

TEST_CASE("interrupted census resumes without rescanning") {
  const fs::path out = scratch("minsurf_census.csv");
  const fs::path sidecar = fs::path(out.string() + ".ckpt.json");
  fs::remove(out);
  fs::remove(sidecar);

  minsurf::RunConfig cfg;
  cfg.command = "census";
  cfg.k = 3;
  cfg.x = 150'000;
  cfg.workers = 2;
  cfg.output = out.string();
  cfg.max_chunks = 1;
  REQUIRE(minsurf::run(cfg) == 0);
  REQUIRE(fs::exists(sidecar));
  const json ck = json::parse(slurp(sidecar));
  CHECK(ck["next_n"] == 65537);
  CHECK(ck["checked"] == 65536);

  cfg.max_chunks = 0;
  REQUIRE(minsurf::run(cfg) == 0);
  CHECK_FALSE(fs::exists(sidecar));
  const std::string body = slurp(out);
  CHECK(body.find("checked,150000") != std::string::npos);
  CHECK(body.find("ties_found,0") != std::string::npos);
  fs::remove(out);
}

TEST_CASE("checkpoint with different parameters is ignored") {
  const fs::path out = scratch("minsurf_params.csv");
  const fs::path sidecar = fs::path(out.string() + ".ckpt.json");
  fs::remove(out);
  fs::remove(sidecar);

  minsurf::RunConfig cfg;
  cfg.command = "sweep";
  cfg.k = 2;
  cfg.x = 70'000;
  cfg.workers = 2;
  cfg.format = minsurf::OutputFormat::csv;
  cfg.output = out.string();
  cfg.max_chunks = 1;
  REQUIRE(minsurf::run(cfg) == 0);
  REQUIRE(fs::exists(sidecar));

  // A different k must restart from scratch and still finish clean.
  cfg.k = 3;
  cfg.max_chunks = 0;
  REQUIRE(minsurf::run(cfg) == 0);
  CHECK_FALSE(fs::exists(sidecar));

  const fs::path ref = scratch("minsurf_params_ref.csv");
  cfg.output = ref.string();
  REQUIRE(minsurf::run(cfg) == 0);
  CHECK(slurp(out) == slurp(ref));
  fs::remove(out);
  fs::remove(ref);
}
