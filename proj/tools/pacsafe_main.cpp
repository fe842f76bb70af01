// Command-line front end: plan sample sizes, run certifications, validate
// certificates against fresh Monte Carlo evidence, and export bound grids.
//
// Exit codes (stable contract):
//   0 accepted / command succeeded
//   1 internal error or failed validation checks
//   2 configuration error
//   3 certificate rejected
//   4 external plugin protocol error
//   5 solver failure

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "pacsafe/pacsafe.hpp"

namespace {

using namespace pacsafe;

struct Flags {
  std::string config_path;
  std::string preset;
  std::string plugin;
  std::string out_dir;
  std::string slice_text;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 0;
  int resolution = 0;
  std::string cert_path;  // positional for validate/grid
};

RunConfig assemble(const Flags& f) {
  RunConfig cfg;
  if (!f.preset.empty()) cfg = preset_config(f.preset);
  if (!f.config_path.empty()) apply_config_file(cfg, f.config_path);
  if (!f.plugin.empty()) {
    cfg.plugin_command = f.plugin;
    cfg.system_name.clear();
  }
  if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
  if (f.seed_given) cfg.seed = f.seed;
  if (f.workers > 0) cfg.workers = f.workers;
  if (f.resolution > 0) cfg.resolution = f.resolution;
  if (!f.slice_text.empty()) cfg.slice = parse_slice(f.slice_text);
  return cfg;
}

std::shared_ptr<const BlackBoxSystem> resolve_system(const RunConfig& cfg) {
  cfg.require_system();
  if (!cfg.plugin_command.empty()) {
    return std::make_shared<PluginSystem>(cfg.plugin_command,
                                          cfg.plugin_timeout);
  }
  return make_builtin_system(cfg.system_name);
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write to " + path);
  out << content;
  if (!out) throw ConfigError("write failed for " + path);
}

Certificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open certificate: " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw ConfigError("certificate is not valid JSON: " + path);
  }
  return Certificate::from_json(j);
}

// "runs/foo.cert.json" -> "<out_dir>/foo<suffix>"
std::string sibling_path(const std::string& cert_path,
                         const std::string& out_dir,
                         const std::string& suffix) {
  std::filesystem::path p(cert_path);
  std::string stem = p.filename().string();
  for (const char* strip : {".json", ".cert"}) {
    const std::string s(strip);
    if (stem.size() > s.size() &&
        stem.compare(stem.size() - s.size(), s.size(), s) == 0) {
      stem.resize(stem.size() - s.size());
    }
  }
  const std::filesystem::path dir =
      out_dir.empty() ? (p.has_parent_path() ? p.parent_path()
                                             : std::filesystem::path("."))
                      : std::filesystem::path(out_dir);
  return (dir / (stem + suffix)).string();
}

int cmd_plan(const Flags& f) {
  RunConfig cfg = assemble(f);
  cfg.require_method();
  std::shared_ptr<const BlackBoxSystem> sys = resolve_system(cfg);
  cfg.params.validate();
  const SamplePlan plan = make_plan(cfg.params, sys->state_dim());
  std::cout << "plan: method=" << method_name(cfg.params.method)
            << " system=" << sys->name() << " N=" << plan.n_states
            << " M=" << plan.draws_per_state
            << " basis_terms=" << plan.basis_terms
            << " decision_dim=" << plan.decision_dim
            << " queries=" << plan.total_queries() << "\n";
  std::cout << plan.to_json().dump(2) << std::endl;
  return 0;
}

int cmd_certify(const Flags& f) {
  RunConfig cfg = assemble(f);
  cfg.require_method();
  std::shared_ptr<const BlackBoxSystem> sys = resolve_system(cfg);
  const Certificate cert = certify(*sys, cfg.params, cfg.seed);

  const std::string path = cfg.certificate_path();
  write_text_file(path, cert.to_json(true).dump(2) + "\n");

  std::cout.precision(6);
  std::cout << cert.system_name << " " << method_name(cert.params.method)
            << " N=" << cert.plan.n_states << " M=" << cert.plan.draws_per_state;
  if (cert.is_stochastic()) {
    std::cout << " J*=" << cert.objective << " lambda*=" << cert.scalar;
    if (cert.vacuous) std::cout << " (vacuous)";
  } else {
    std::cout << " xi*=" << cert.scalar;
  }
  std::cout << " verdict=" << (cert.accepted ? "accepted ✓" : "rejected ✗")
            << " time=" << cert.total_seconds << "s -> " << path << std::endl;
  return cert.accepted ? 0 : 3;
}

int cmd_validate(const Flags& f) {
  RunConfig cfg = assemble(f);
  const Certificate cert = load_certificate(f.cert_path);
  std::shared_ptr<const BlackBoxSystem> sys;
  if (!cfg.plugin_command.empty()) {
    sys = std::make_shared<PluginSystem>(cfg.plugin_command,
                                         cfg.plugin_timeout);
  } else {
    sys = make_builtin_system(cert.system_name);
  }
  ValidationOptions opt;
  opt.workers = cfg.workers;
  const ValidationReport report =
      validate_certificate(cert, *sys, opt, cfg.seed, f.seed_given);

  const std::string path =
      sibling_path(f.cert_path, f.out_dir, ".report.json");
  write_text_file(path, report.to_json().dump(2) + "\n");
  for (const auto& c : report.checks) {
    std::cout << "check " << c.name << ": " << (c.pass ? "pass" : "FAIL")
              << "\n";
  }
  std::cout << (report.all_pass ? "validation passed" : "validation FAILED")
            << " -> " << path << std::endl;
  return report.all_pass ? 0 : 1;
}

int cmd_grid(const Flags& f) {
  RunConfig cfg = assemble(f);
  const Certificate cert = load_certificate(f.cert_path);
  const std::vector<GridPoint> grid =
      contour_grid(cert, cfg.resolution, cfg.slice);
  std::ostringstream os;
  write_grid_csv(os, grid);
  const std::string path = sibling_path(f.cert_path, f.out_dir, ".grid.csv");
  write_text_file(path, os.str());
  std::cout << "grid: " << grid.size() << " points at resolution "
            << cfg.resolution << " -> " << path << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Data-driven PAC certification of one-step safety for black-box "
      "stochastic systems"};
  app.require_subcommand(1);

  Flags f;
  auto add_common = [&](CLI::App* sub, bool with_system) {
    sub->add_option("--config", f.config_path, "config file (INI sections)");
    sub->add_option("--preset", f.preset,
                    "named preset, e.g. table1/ex1-rbc1 (see README)");
    sub->add_option("--seed", f.seed, "RNG seed (default 0)")
        ->each([&](const std::string&) { f.seed_given = true; });
    sub->add_option("--out", f.out_dir, "output directory");
    if (with_system) {
      sub->add_option("--plugin", f.plugin,
                      "external system command line (overrides [system])");
    }
  };

  CLI::App* plan = app.add_subcommand("plan", "derive sample sizes");
  add_common(plan, true);

  CLI::App* certify = app.add_subcommand("certify", "run a certification");
  add_common(certify, true);
  certify->add_option("--workers", f.workers, "worker threads");

  CLI::App* validate =
      app.add_subcommand("validate", "cross-check a certificate");
  validate->add_option("certificate", f.cert_path, "certificate JSON path")
      ->required();
  add_common(validate, true);
  validate->add_option("--workers", f.workers, "worker threads");

  CLI::App* grid = app.add_subcommand("grid", "export the bound on a grid");
  grid->add_option("certificate", f.cert_path, "certificate JSON path")
      ->required();
  grid->add_option("--resolution", f.resolution, "grid resolution (default 200)");
  grid->add_option("--slice", f.slice_text,
                   "fixed coordinates for >2-D systems, e.g. \"3=0,4=0.5\"");
  grid->add_option("--out", f.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (plan->parsed()) return cmd_plan(f);
    if (certify->parsed()) return cmd_certify(f);
    if (validate->parsed()) return cmd_validate(f);
    if (grid->parsed()) return cmd_grid(f);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const PluginError& e) {
    std::cerr << "plugin error: " << e.what() << std::endl;
    return 4;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << std::endl;
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}
