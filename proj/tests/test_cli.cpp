#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "pacsafe/benchmarks.hpp"
#include "pacsafe/certify.hpp"
#include "pacsafe/params.hpp"

using Catch::Matchers::ContainsSubstring;

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(PACSAFE_CLI_BIN) + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = ::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("pacsafe_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
  const fs::path p = work_dir() / name;
  std::ofstream out(p);
  out << content;
  REQUIRE(out.good());
  return p.string();
}

std::string tiny_robust_ini() {
  static const std::string path = write_file(
      "tiny_rbc1.ini",
      "# fast smoke configuration\n"
      "[system]\n"
      "name = vinc\n"
      "[method]\n"
      "name = rbc1\n"
      "[params]\n"
      "alpha1 = 0.5\n"
      "alpha2 = 0.5\n"
      "delta = 0.01\n"
      "kappa = 1\n"
      "[output]\n"
      "dir = " +
          work_dir().string() +
          "\n"
          "certificate = tiny.cert.json\n");
  return path;
}

}  // namespace

TEST_CASE("cli plans sample sizes from presets and layered configs") {
  const CliResult r = run_cli("plan --preset table1/ex1-rbc1");
  REQUIRE(r.exit_code == 0);
  REQUIRE_THAT(r.output, ContainsSubstring("N=15053"));
  REQUIRE_THAT(r.output, ContainsSubstring("system=vinc"));
  REQUIRE_THAT(r.output, ContainsSubstring("queries=15053"));

  // A config file layered on a preset overrides only the keys it names.
  const std::string overlay = write_file("overlay.ini",
                                         "[params]\n"
                                         "alpha1 = 0.5\n"
                                         "alpha2 = 0.5\n"
                                         "delta = 0.01\n");
  const CliResult r2 = run_cli("plan --preset table1/ex1-rbc1 --config " +
                               overlay);
  REQUIRE(r2.exit_code == 0);
  REQUIRE_THAT(r2.output, ContainsSubstring("N=77"));
}

TEST_CASE("cli reports configuration problems with exit code 2") {
  // No system selected.
  const std::string no_sys = write_file("no_sys.ini",
                                        "[method]\n"
                                        "name = rbc1\n");
  const CliResult r1 = run_cli("plan --config " + no_sys);
  REQUIRE(r1.exit_code == 2);
  REQUIRE_THAT(r1.output, ContainsSubstring("no system selected"));

  // Unknown preset.
  const CliResult r2 = run_cli("plan --preset table1/ex10-rbc1");
  REQUIRE(r2.exit_code == 2);
  REQUIRE_THAT(r2.output, ContainsSubstring("unknown preset"));

  // Unknown key, reported with its location.
  const std::string bad_key = write_file("bad_key.ini",
                                         "[system]\n"
                                         "name = vinc\n"
                                         "[method]\n"
                                         "name = rbc1\n"
                                         "[params]\n"
                                         "zzz = 1\n");
  const CliResult r3 = run_cli("plan --config " + bad_key);
  REQUIRE(r3.exit_code == 2);
  REQUIRE_THAT(r3.output, ContainsSubstring("unknown key 'zzz'"));
  REQUIRE_THAT(r3.output, ContainsSubstring(":6"));

  // Builtin system and plugin are mutually exclusive.
  const std::string both = write_file("both.ini",
                                      "[system]\n"
                                      "name = vinc\n"
                                      "plugin = cat\n"
                                      "[method]\n"
                                      "name = rbc1\n");
  const CliResult r4 = run_cli("plan --config " + both);
  REQUIRE(r4.exit_code == 2);
  REQUIRE_THAT(r4.output, ContainsSubstring("mutually exclusive"));

  // Parse errors from the argument parser itself.
  REQUIRE(run_cli("frobnicate").exit_code == 2);
  REQUIRE(run_cli("").exit_code == 2);
}

TEST_CASE("cli help exits cleanly") {
  const CliResult r = run_cli("--help");
  REQUIRE(r.exit_code == 0);
  REQUIRE_THAT(r.output, ContainsSubstring("certify"));
  REQUIRE_THAT(r.output, ContainsSubstring("validate"));
}

TEST_CASE("cli certify writes a certificate that matches the library") {
  const CliResult r =
      run_cli("certify --config " + tiny_robust_ini() + " --seed 7");
  REQUIRE(r.exit_code == 0);
  REQUIRE_THAT(r.output, ContainsSubstring("verdict=accepted"));

  const fs::path cert_path = work_dir() / "tiny.cert.json";
  REQUIRE(fs::exists(cert_path));
  std::ifstream in(cert_path);
  const nlohmann::json j = nlohmann::json::parse(in);
  const pacsafe::Certificate from_cli = pacsafe::Certificate::from_json(j);

  pacsafe::PacParams p =
      pacsafe::PacParams::defaults(pacsafe::Method::kRbc1Scenario);
  p.alpha1 = 0.5;
  p.alpha2 = 0.5;
  p.delta = 0.01;
  p.kappa = 1;
  const auto sys = pacsafe::make_builtin_system("vinc");
  const pacsafe::Certificate direct = pacsafe::certify(*sys, p, 7);
  REQUIRE(from_cli.canonical_string() == direct.canonical_string());
}

TEST_CASE("cli certify signals rejection with exit code 3") {
  // The predator-prey benchmark has genuinely unsafe regions, so a robust
  // certificate cannot exist and the scenario program must report a
  // positive relaxation.
  const CliResult r = run_cli("certify --preset table1/ex6-rbc1 --seed 1 " +
                              ("--out " + work_dir().string()));
  REQUIRE(r.exit_code == 3);
  REQUIRE_THAT(r.output, ContainsSubstring("verdict=rejected"));
  REQUIRE(fs::exists(work_dir() / "lotka-rbc1-seed1.cert.json"));
}

TEST_CASE("cli validate cross-checks a certificate end to end") {
  tiny_robust_ini();  // ensure the certificate from the certify test exists
  const fs::path cert_path = work_dir() / "tiny.cert.json";
  if (!fs::exists(cert_path)) {
    const CliResult made =
        run_cli("certify --config " + tiny_robust_ini() + " --seed 7");
    REQUIRE(made.exit_code == 0);
  }

  const CliResult r =
      run_cli("validate " + cert_path.string() + " --workers 4");
  REQUIRE(r.exit_code == 0);
  REQUIRE_THAT(r.output, ContainsSubstring("check plan_rederivation: pass"));
  REQUIRE_THAT(r.output, ContainsSubstring("check system_identity: pass"));
  REQUIRE_THAT(r.output, ContainsSubstring("check mc_outer_sweep: pass"));
  REQUIRE_THAT(r.output, ContainsSubstring("validation passed"));
  REQUIRE(fs::exists(work_dir() / "tiny.report.json"));

  const CliResult missing = run_cli("validate /nonexistent/cert.json");
  REQUIRE(missing.exit_code == 2);
  REQUIRE_THAT(missing.output, ContainsSubstring("cannot open certificate"));
}

TEST_CASE("cli grid exports stochastic bounds and refuses robust input") {
  // Robust certificates have no state-wise bound surface.
  const fs::path robust_path = work_dir() / "tiny.cert.json";
  if (!fs::exists(robust_path)) {
    REQUIRE(run_cli("certify --config " + tiny_robust_ini() + " --seed 7")
                .exit_code == 0);
  }
  const CliResult refuse = run_cli("grid " + robust_path.string());
  REQUIRE(refuse.exit_code == 2);

  // A stochastic certificate exports one row per grid cell.
  const std::string sbc_ini = write_file(
      "tiny_sbc3.ini",
      "[system]\n"
      "name = vinc\n"
      "[method]\n"
      "name = sbc3\n"
      "[params]\n"
      "tau = 0.2\n"
      "kappa = 1\n"
      "[output]\n"
      "dir = " +
          work_dir().string() +
          "\n"
          "certificate = tinysbc.cert.json\n");
  const CliResult made = run_cli("certify --config " + sbc_ini + " --seed 7");
  REQUIRE((made.exit_code == 0 || made.exit_code == 3));
  const fs::path sbc_path = work_dir() / "tinysbc.cert.json";
  REQUIRE(fs::exists(sbc_path));

  const CliResult r = run_cli("grid " + sbc_path.string() + " --resolution 8");
  REQUIRE(r.exit_code == 0);
  const fs::path csv_path = work_dir() / "tinysbc.grid.csv";
  REQUIRE(fs::exists(csv_path));
  std::ifstream csv(csv_path);
  std::string line;
  REQUIRE(std::getline(csv, line));
  REQUIRE(line == "x1,x2,bound,in_safe_set");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  REQUIRE(rows == 64);

  const CliResult bad_slice =
      run_cli("grid " + sbc_path.string() + " --slice zebra");
  REQUIRE(bad_slice.exit_code == 2);
}

TEST_CASE("cli surfaces plugin protocol failures with exit code 4") {
  const CliResult r =
      run_cli("certify --preset table1/ex1-rbc1 --plugin true");
  REQUIRE(r.exit_code == 4);
  REQUIRE_THAT(r.output, ContainsSubstring("plugin error"));
}
