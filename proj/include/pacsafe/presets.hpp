#pragma once

#include <array>
#include <string>
#include <vector>

#include "pacsafe/config.hpp"
#include "pacsafe/errors.hpp"
#include "pacsafe/params.hpp"

namespace pacsafe {

namespace detail {

inline const std::array<const char*, 9>& preset_systems() {
  static const std::array<const char*, 9> s = {
      "vinc",  "arch",     "stable3", "lin4",    "poly6",
      "lotka", "pendulum", "sank4",   "lorenz7"};
  return s;
}

}  // namespace detail

// Named one-command reproductions of each benchmark/method cell.  The robust
// presets share one hyperparameter block; the stochastic ones carry
// per-example degree, decrease margin, and coefficient cap.
inline std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (int ex = 1; ex <= 9; ++ex) {
    for (const char* m : {"rbc1", "rbc2", "sbc3"}) {
      names.push_back("table1/ex" + std::to_string(ex) + "-" + m);
    }
  }
  return names;
}

inline RunConfig preset_config(const std::string& name) {
  const auto fail = [&]() -> RunConfig {
    std::string msg = "unknown preset '" + name + "'; available:";
    for (const std::string& n : preset_names()) msg += " " + n;
    throw ConfigError(msg);
  };
  const std::string prefix = "table1/ex";
  if (name.rfind(prefix, 0) != 0) return fail();
  const auto dash = name.find('-', prefix.size());
  if (dash == std::string::npos) return fail();
  int ex = 0;
  try {
    std::size_t used = 0;
    ex = std::stoi(name.substr(prefix.size(), dash - prefix.size()), &used);
    if (used != dash - prefix.size()) return fail();
  } catch (const std::exception&) {
    return fail();
  }
  if (ex < 1 || ex > 9) return fail();
  const std::string method = name.substr(dash + 1);

  RunConfig cfg;
  cfg.system_name = detail::preset_systems()[ex - 1];
  cfg.method_set = true;
  if (method == "rbc1") {
    cfg.params = PacParams::defaults(Method::kRbc1Scenario);
  } else if (method == "rbc2") {
    cfg.params = PacParams::defaults(Method::kRbc2);
  } else if (method == "sbc3") {
    cfg.params = PacParams::defaults(Method::kSbc3);
    // Per-example template degree, decrease margin, and coefficient cap.
    if (ex <= 5) {
      cfg.params.kappa = 1;
      cfg.params.tau = 0.01;
      cfg.params.u_a = 1.1;
    } else if (ex == 6 || ex == 7) {
      cfg.params.kappa = 10;
      cfg.params.tau = 0.02;
      cfg.params.u_a = 1.5;
    } else if (ex == 8) {
      cfg.params.kappa = 2;
      cfg.params.tau = 0.02;
      cfg.params.u_a = 1.1;
    } else {
      cfg.params.kappa = 1;
      cfg.params.tau = 0.02;
      cfg.params.u_a = 1.1;
    }
  } else {
    return fail();
  }
  return cfg;
}

}  // namespace pacsafe
