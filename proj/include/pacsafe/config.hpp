#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pacsafe/errors.hpp"
#include "pacsafe/params.hpp"

namespace pacsafe {

// Everything one command run needs, assembled from (in order of application)
// a preset, a config file, and command-line flags.
struct RunConfig {
  // [system]
  std::string system_name;     // builtin registry name
  std::string plugin_command;  // external process; exclusive with the above
  double plugin_timeout = 5.0;

  // [method] + [params]
  bool method_set = false;
  PacParams params = PacParams::defaults(Method::kRbc1Scenario);

  // [output]
  std::string out_dir = ".";
  std::string certificate_file;  // defaults derived from system/method/seed
  std::string report_file;
  std::string grid_file;
  int resolution = 200;
  std::map<int, double> slice;  // 1-based dimension -> fixed value

  std::uint64_t seed = 0;
  int workers = 1;

  void require_system() const {
    if (system_name.empty() && plugin_command.empty()) {
      throw ConfigError(
          "no system selected: set [system] name=<builtin> or plugin=<cmd>");
    }
    if (!system_name.empty() && !plugin_command.empty()) {
      throw ConfigError(
          "[system] name and plugin are mutually exclusive; pick one");
    }
  }
  void require_method() const {
    if (!method_set) {
      throw ConfigError(
          "no method selected: set [method] name = rbc1|rbc1_vc|rbc2|sbc3");
    }
  }

  std::string default_stem() const {
    const std::string sys =
        !system_name.empty() ? system_name : std::string("plugin");
    return sys + "-" + method_name(params.method) + "-seed" +
           std::to_string(seed);
  }
  std::string certificate_path() const {
    const std::string f = certificate_file.empty()
                              ? default_stem() + ".cert.json"
                              : certificate_file;
    return out_dir + "/" + f;
  }
  std::string report_path() const {
    const std::string f =
        report_file.empty() ? default_stem() + ".report.json" : report_file;
    return out_dir + "/" + f;
  }
  std::string grid_path() const {
    const std::string f =
        grid_file.empty() ? default_stem() + ".grid.csv" : grid_file;
    return out_dir + "/" + f;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("value of '" + key + "' is not a number: '" + v + "'");
  }
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return i;
  } catch (const std::exception&) {
    throw ConfigError("value of '" + key + "' is not an integer: '" + v +
                      "'");
  }
}

}  // namespace detail

// Parses a slice specification "dim=value,dim=value" with 1-based dimension
// numbers, e.g. "3=0.0,4=-0.25".
inline std::map<int, double> parse_slice(const std::string& text) {
  std::map<int, double> slice;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = detail::trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("slice entry '" + item + "' is not of the form k=v");
    }
    const int dim = static_cast<int>(
        detail::parse_int("slice dimension", detail::trim(item.substr(0, eq))));
    const double val =
        detail::parse_double("slice value", detail::trim(item.substr(eq + 1)));
    if (slice.count(dim)) {
      throw ConfigError("slice fixes dimension " + std::to_string(dim) +
                        " twice");
    }
    slice[dim] = val;
  }
  return slice;
}

// Strict INI-style config: [section] headers, key = value lines, comments
// with '#' or ';' on their own line.  Unknown sections or keys are errors —
// a typo must never silently fall back to a default.
inline void apply_config_text(RunConfig& cfg, const std::string& text,
                              const std::string& origin = "<config>") {
  struct Item {
    std::string section, key, value;
    int line;
  };
  std::vector<Item> items;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": unterminated section header");
      }
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "system" && section != "method" && section != "params" &&
          section != "output") {
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected key = value, got '" + line + "'");
    }
    if (section.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": key outside of any [section]");
    }
    items.push_back({section, detail::trim(line.substr(0, eq)),
                     detail::trim(line.substr(eq + 1)), lineno});
  }

  // The method must be known before [params] keys are applied, because it
  // selects the default parameter block.
  for (const Item& it : items) {
    if (it.section == "method") {
      if (it.key != "name") {
        throw ConfigError(origin + ":" + std::to_string(it.line) +
                          ": unknown key '" + it.key + "' in [method]");
      }
      cfg.params = PacParams::defaults(method_from_name(it.value));
      cfg.method_set = true;
    }
  }

  for (const Item& it : items) {
    const std::string where =
        origin + ":" + std::to_string(it.line) + ": [" + it.section + "] ";
    if (it.section == "method") continue;
    if (it.section == "system") {
      if (it.key == "name") {
        cfg.system_name = it.value;
      } else if (it.key == "plugin") {
        cfg.plugin_command = it.value;
      } else if (it.key == "plugin_timeout") {
        cfg.plugin_timeout = detail::parse_double(it.key, it.value);
      } else {
        throw ConfigError(where + "unknown key '" + it.key + "'");
      }
    } else if (it.section == "params") {
      if (!cfg.method_set) {
        throw ConfigError(where +
                          "parameters given but no [method] name selected");
      }
      PacParams& p = cfg.params;
      if (it.key == "alpha1") {
        p.alpha1 = detail::parse_double(it.key, it.value);
      } else if (it.key == "alpha2") {
        p.alpha2 = detail::parse_double(it.key, it.value);
      } else if (it.key == "delta") {
        p.delta = detail::parse_double(it.key, it.value);
      } else if (it.key == "delta1") {
        p.delta1 = detail::parse_double(it.key, it.value);
      } else if (it.key == "delta2") {
        p.delta2 = detail::parse_double(it.key, it.value);
      } else if (it.key == "l") {
        p.l = detail::parse_double(it.key, it.value);
      } else if (it.key == "tau") {
        p.tau = detail::parse_double(it.key, it.value);
      } else if (it.key == "gamma") {
        p.gamma = detail::parse_double(it.key, it.value);
      } else if (it.key == "u_a") {
        p.u_a = detail::parse_double(it.key, it.value);
      } else if (it.key == "xi_bar") {
        p.xi_bar = detail::parse_double(it.key, it.value);
      } else if (it.key == "outside_value") {
        p.outside_value = detail::parse_double(it.key, it.value);
      } else if (it.key == "kappa") {
        p.kappa = static_cast<int>(detail::parse_int(it.key, it.value));
      } else if (it.key == "n_o") {
        p.n_o = static_cast<int>(detail::parse_int(it.key, it.value));
      } else if (it.key == "vc_dim") {
        p.vc_dim = static_cast<int>(detail::parse_int(it.key, it.value));
      } else if (it.key == "zero_tol") {
        p.zero_tol = detail::parse_double(it.key, it.value);
      } else {
        throw ConfigError(where + "unknown key '" + it.key + "'");
      }
    } else if (it.section == "output") {
      if (it.key == "dir") {
        cfg.out_dir = it.value;
      } else if (it.key == "certificate") {
        cfg.certificate_file = it.value;
      } else if (it.key == "report") {
        cfg.report_file = it.value;
      } else if (it.key == "grid") {
        cfg.grid_file = it.value;
      } else if (it.key == "resolution") {
        cfg.resolution = static_cast<int>(detail::parse_int(it.key, it.value));
      } else if (it.key == "slice") {
        cfg.slice = parse_slice(it.value);
      } else {
        throw ConfigError(where + "unknown key '" + it.key + "'");
      }
    }
  }
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str(), path);
}

}  // namespace pacsafe
