#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "pacsafe/errors.hpp"

namespace pacsafe {

// The four certification programs.
//   kRbc1Scenario  robust one-shot program, scenario sample size
//   kRbc1Vc        robust one-shot program, VC sample size
//   kRbc2          robust two-level program (inner empirical estimate)
//   kSbc3          stochastic program with state-dependent bound
enum class Method { kRbc1Scenario, kRbc1Vc, kRbc2, kSbc3 };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::kRbc1Scenario: return "rbc1";
    case Method::kRbc1Vc: return "rbc1_vc";
    case Method::kRbc2: return "rbc2";
    case Method::kSbc3: return "sbc3";
  }
  return "?";
}

inline Method method_from_name(const std::string& s) {
  if (s == "rbc1") return Method::kRbc1Scenario;
  if (s == "rbc1_vc") return Method::kRbc1Vc;
  if (s == "rbc2") return Method::kRbc2;
  if (s == "sbc3") return Method::kSbc3;
  throw ConfigError("unknown method '" + s +
                    "' (expected rbc1, rbc1_vc, rbc2, or sbc3)");
}

inline bool is_robust(Method m) { return m != Method::kSbc3; }

// Full parameter block for one certification run.  Fields irrelevant to the
// selected method keep their defaults and are neither validated nor
// serialized.  Construct with defaults(method) and override selectively.
struct PacParams {
  Method method = Method::kRbc1Scenario;

  // Risk / confidence budget.
  double alpha1 = 0.05;   // outer state-fraction miss allowance
  double alpha2 = 0.05;   // inner disturbance miss allowance (robust methods)
  double delta = 1e-6;    // total confidence budget (one-level methods)
  double delta1 = 1e-6;   // scenario confidence share (two-level methods)
  double delta2 = 0.999;  // per-state estimate confidence share
  double l = 0.2;         // split of delta2's failure mass
  double tau = 0.01;      // uniform decrease margin (sbc3)

  // Template and program shape.
  double gamma = 0.01;          // decrease factor of the robust condition
  double u_a = 10.0;            // coefficient upper bound
  double xi_bar = 10.0;         // slack upper bound (robust programs)
  double outside_value = -1.0;  // gated template value off the safe set (rbc)
  int kappa = 1;                // per-coordinate basis degree
  int n_o = 1000;               // anchor states in the sbc3 objective
  std::optional<int> vc_dim;    // rbc1_vc override; defaults to basis terms+1

  // Numeric acceptance threshold for xi* == 0.
  double zero_tol = 1e-9;

  static PacParams defaults(Method m) {
    PacParams p;
    p.method = m;
    switch (m) {
      case Method::kRbc1Scenario:
      case Method::kRbc1Vc:
        p.alpha1 = 0.05;
        p.alpha2 = 0.05;
        break;
      case Method::kRbc2:
        p.alpha1 = 0.01;
        p.alpha2 = 0.05;
        break;
      case Method::kSbc3:
        p.alpha1 = 0.01;
        p.tau = 0.01;
        p.u_a = 1.1;
        break;
    }
    return p;
  }

  // Throws ConfigError naming the violated requirement.
  void validate() const {
    auto in_unit = [](double v, const char* name) {
      if (!(v > 0.0 && v < 1.0)) {
        throw ConfigError(std::string(name) + " must lie in (0, 1), got " +
                          std::to_string(v));
      }
    };
    if (kappa < 0) throw ConfigError("kappa must be >= 0");
    if (kappa > 60) {
      throw ConfigError(
          "kappa above 60 would overflow exact integer binomials; rejected");
    }
    in_unit(gamma, "gamma");
    if (!(u_a > 0.0)) throw ConfigError("u_a must be positive");
    if (!(zero_tol >= 0.0)) throw ConfigError("zero_tol must be >= 0");

    switch (method) {
      case Method::kRbc1Scenario:
      case Method::kRbc1Vc:
        in_unit(alpha1, "alpha1");
        in_unit(alpha2, "alpha2");
        in_unit(delta, "delta");
        check_robust_template();
        if (method == Method::kRbc1Vc && vc_dim.has_value() && *vc_dim < 1) {
          throw ConfigError("vc_dim must be >= 1");
        }
        break;
      case Method::kRbc2:
        in_unit(alpha1, "alpha1");
        in_unit(alpha2, "alpha2");
        in_unit(delta1, "delta1");
        in_unit(delta2, "delta2");
        in_unit(l, "l");
        check_outer_split();
        check_robust_template();
        break;
      case Method::kSbc3:
        in_unit(alpha1, "alpha1");
        in_unit(delta1, "delta1");
        in_unit(delta2, "delta2");
        in_unit(l, "l");
        in_unit(tau, "tau");
        check_outer_split();
        if (!(u_a >= 1.0)) {
          throw ConfigError(
              "sbc3 requires u_a >= 1 (the template must be able to reach the "
              "outside value 1)");
        }
        if (n_o < 1) throw ConfigError("n_o must be >= 1");
        break;
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["method"] = method_name(method);
    j["alpha1"] = alpha1;
    j["gamma"] = gamma;
    j["u_a"] = u_a;
    j["kappa"] = kappa;
    j["zero_tol"] = zero_tol;
    switch (method) {
      case Method::kRbc1Scenario:
      case Method::kRbc1Vc:
        j["alpha2"] = alpha2;
        j["delta"] = delta;
        j["xi_bar"] = xi_bar;
        j["outside_value"] = outside_value;
        if (method == Method::kRbc1Vc && vc_dim.has_value()) {
          j["vc_dim"] = *vc_dim;
        }
        break;
      case Method::kRbc2:
        j["alpha2"] = alpha2;
        j["delta1"] = delta1;
        j["delta2"] = delta2;
        j["l"] = l;
        j["xi_bar"] = xi_bar;
        j["outside_value"] = outside_value;
        break;
      case Method::kSbc3:
        j["delta1"] = delta1;
        j["delta2"] = delta2;
        j["l"] = l;
        j["tau"] = tau;
        j["n_o"] = n_o;
        break;
    }
    return j;
  }

  static PacParams from_json(const nlohmann::json& j) {
    PacParams p = defaults(method_from_name(j.at("method").get<std::string>()));
    auto grab = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    grab("alpha1", p.alpha1);
    grab("alpha2", p.alpha2);
    grab("delta", p.delta);
    grab("delta1", p.delta1);
    grab("delta2", p.delta2);
    grab("l", p.l);
    grab("tau", p.tau);
    grab("gamma", p.gamma);
    grab("u_a", p.u_a);
    grab("xi_bar", p.xi_bar);
    grab("outside_value", p.outside_value);
    grab("kappa", p.kappa);
    grab("n_o", p.n_o);
    grab("zero_tol", p.zero_tol);
    if (j.contains("vc_dim")) p.vc_dim = j.at("vc_dim").get<int>();
    return p;
  }

 private:
  void check_robust_template() const {
    if (!(outside_value < 0.0)) {
      throw ConfigError("outside_value (the gated template's off-set value) "
                        "must be negative");
    }
    if (!(xi_bar > -outside_value)) {
      throw ConfigError(
          "xi_bar must exceed -outside_value so the slack variable can absorb "
          "an unsafe successor");
    }
  }

  void check_outer_split() const {
    if (!(alpha1 < l * delta2)) {
      throw ConfigError(
          "two-level methods require alpha1 < l*delta2 (otherwise the outer "
          "fraction 1 - alpha1/(l*delta2) is vacuous); got alpha1=" +
          std::to_string(alpha1) + ", l*delta2=" + std::to_string(l * delta2));
    }
  }
};

}  // namespace pacsafe
