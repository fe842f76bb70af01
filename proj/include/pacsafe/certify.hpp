#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pacsafe/basis.hpp"
#include "pacsafe/errors.hpp"
#include "pacsafe/log.hpp"
#include "pacsafe/params.hpp"
#include "pacsafe/planner.hpp"
#include "pacsafe/safe_set.hpp"
#include "pacsafe/samples.hpp"
#include "pacsafe/scenario_lp.hpp"
#include "pacsafe/system.hpp"

namespace pacsafe {

// Self-describing certification result.  Everything needed to re-derive the
// sampling plan, re-evaluate the barrier, and re-run the validation checks is
// embedded; the JSON form is canonical (sorted keys, shortest round-trip
// number rendering) and reproducible byte-for-byte from
// (system, params, seed) once the volatile "timings" block is excluded.
struct Certificate {
  static constexpr const char* kFormat = "pac-safety-certificate/v1";

  // System identity as certified.
  std::string system_name;
  int state_dim = 0;
  int disturbance_dim = 0;
  nlohmann::json safe_set_json;

  PacParams params;
  SamplePlan plan;
  std::uint64_t seed = 0;

  // Solver outcome.
  LpStatus solver_status = LpStatus::kOptimal;
  std::size_t solver_iterations = 0;
  double objective = 0.0;  // xi* for robust methods, J* for sbc3
  double scalar = 0.0;     // xi* or lambda*

  std::vector<double> coefficients;  // a*, in basis term order

  // Barrier template actually used (needed to evaluate h(a*, x) later).
  BasisKind basis_kind = BasisKind::kHandelman;
  int kappa = 1;
  StateVector basis_lo, basis_hi;

  bool accepted = false;
  bool vacuous = false;  // sbc3 only: bound <= 0 on most anchor states
  std::string guarantee_text;
  std::uint64_t step_queries = 0;

  // Wall-clock (seconds); excluded from the canonical byte representation.
  double sample_seconds = 0.0;
  double build_seconds = 0.0;
  double solve_seconds = 0.0;
  double total_seconds = 0.0;

  bool is_stochastic() const { return params.method == Method::kSbc3; }

  nlohmann::json to_json(bool include_timings = true) const {
    nlohmann::json j;
    j["format"] = kFormat;
    j["method"] = method_name(params.method);
    j["system"] = {{"name", system_name},
                   {"state_dim", state_dim},
                   {"disturbance_dim", disturbance_dim},
                   {"safe_set", safe_set_json}};
    j["params"] = params.to_json();
    j["plan"] = plan.to_json();
    j["seed"] = seed;
    j["solver"] = {{"status", lp_status_name(solver_status)},
                   {"iterations", solver_iterations},
                   {"objective", objective}};
    if (is_stochastic()) {
      j["solution"] = {{"lambda_star", scalar}, {"j_star", objective}};
      j["vacuous"] = vacuous;
    } else {
      j["solution"] = {{"xi_star", scalar}};
    }
    j["coefficients"] = coefficients;
    j["basis"] = {
        {"kind", basis_kind_name(basis_kind)},
        {"kappa", kappa},
        {"box_lo", basis_lo},
        {"box_hi", basis_hi},
        {"term_order",
         "lexicographic multi-index over per-dimension degrees 0..kappa, "
         "first dimension most significant"}};
    j["verdict"] = accepted ? "accepted" : "rejected";
    j["guarantee"] = guarantee_text;
    j["step_queries"] = step_queries;
    if (include_timings) {
      j["timings"] = {{"sample_seconds", sample_seconds},
                      {"build_seconds", build_seconds},
                      {"solve_seconds", solve_seconds},
                      {"total_seconds", total_seconds}};
    }
    return j;
  }

  // Canonical reproducible rendering: compact, sorted keys, no timings.
  std::string canonical_string() const { return to_json(false).dump(); }

  static Certificate from_json(const nlohmann::json& j) {
    if (!j.contains("format") ||
        j.at("format").get<std::string>() != kFormat) {
      throw ConfigError("not a recognized certificate document (format tag)");
    }
    Certificate c;
    const auto& sys = j.at("system");
    c.system_name = sys.at("name").get<std::string>();
    c.state_dim = sys.at("state_dim").get<int>();
    c.disturbance_dim = sys.at("disturbance_dim").get<int>();
    c.safe_set_json = sys.at("safe_set");
    c.params = PacParams::from_json(j.at("params"));
    c.plan = SamplePlan::from_json(c.params.method, j.at("plan"));
    c.seed = j.at("seed").get<std::uint64_t>();
    const auto& sv = j.at("solver");
    const std::string st = sv.at("status").get<std::string>();
    if (st == "optimal") {
      c.solver_status = LpStatus::kOptimal;
    } else if (st == "infeasible") {
      c.solver_status = LpStatus::kInfeasible;
    } else if (st == "bound_hit") {
      c.solver_status = LpStatus::kBoundHit;
    } else {
      throw ConfigError("unknown solver status in certificate: " + st);
    }
    c.solver_iterations = sv.at("iterations").get<std::size_t>();
    c.objective = sv.at("objective").get<double>();
    const auto& sol = j.at("solution");
    if (c.params.method == Method::kSbc3) {
      c.scalar = sol.at("lambda_star").get<double>();
      c.vacuous = j.at("vacuous").get<bool>();
    } else {
      c.scalar = sol.at("xi_star").get<double>();
    }
    c.coefficients = j.at("coefficients").get<std::vector<double>>();
    const auto& b = j.at("basis");
    c.basis_kind = basis_kind_from_name(b.at("kind").get<std::string>());
    c.kappa = b.at("kappa").get<int>();
    c.basis_lo = b.at("box_lo").get<StateVector>();
    c.basis_hi = b.at("box_hi").get<StateVector>();
    c.accepted = j.at("verdict").get<std::string>() == "accepted";
    c.guarantee_text = j.at("guarantee").get<std::string>();
    c.step_queries = j.at("step_queries").get<std::uint64_t>();
    if (j.contains("timings")) {
      const auto& t = j.at("timings");
      c.sample_seconds = t.value("sample_seconds", 0.0);
      c.build_seconds = t.value("build_seconds", 0.0);
      c.solve_seconds = t.value("solve_seconds", 0.0);
      c.total_seconds = t.value("total_seconds", 0.0);
    }
    return c;
  }
};

namespace detail {

inline std::string certificate_guarantee_text(const Certificate& c) {
  std::ostringstream os;
  os.precision(12);
  const auto& g = c.plan.guarantee;
  if (!c.accepted) {
    if (c.is_stochastic()) {
      os << "The stochastic scenario program did not produce a usable "
            "certificate (solver status "
         << lp_status_name(c.solver_status)
         << "); no safety guarantee is asserted.";
    } else {
      os << "Rejected: the scenario program's minimal violation budget xi* = "
         << c.scalar
         << " exceeds the acceptance threshold "
         << c.params.zero_tol
         << ", so no one-step safety guarantee is asserted for this system.";
    }
    return os.str();
  }
  if (c.is_stochastic()) {
    os << "With confidence at least " << g.confidence
       << " over the drawn samples, for at least a fraction "
       << g.outer_fraction
       << " of states x in the safe set, the probability that one step from "
          "x stays in the safe set is at least 1 - lambda* - h(a*, x) with "
          "lambda* = "
       << c.scalar << " (clamped to [0, 1]).";
  } else {
    os << "Accepted (xi* = " << c.scalar << " <= " << c.params.zero_tol
       << "): with confidence at least " << g.confidence
       << " over the drawn samples, for at least a fraction "
       << g.outer_fraction
       << " of states x in the safe set, the probability that one step from "
          "x stays in the safe set is at least "
       << (g.inner_probability ? *g.inner_probability : 0.0) << ".";
  }
  return os.str();
}

}  // namespace detail

// Evaluates the state-dependent lower bound carried by a stochastic
// certificate: clamp(1 - lambda* - h(a*, x), 0, 1) for x in the safe set.
class SbcBoundEvaluator {
 public:
  explicit SbcBoundEvaluator(const Certificate& cert)
      : basis_(cert.basis_kind, cert.kappa, cert.basis_lo, cert.basis_hi),
        set_(SafeSet::from_json(cert.safe_set_json)),
        coeff_(cert.coefficients),
        lambda_(cert.scalar) {
    if (cert.params.method != Method::kSbc3) {
      throw ConfigError(
          "state-dependent bounds exist only for sbc3 certificates");
    }
    if (coeff_.size() != basis_.terms()) {
      throw ConfigError("certificate coefficient count does not match basis");
    }
    feat_.resize(basis_.terms());
  }

  const SafeSet& safe_set() const { return set_; }

  // 1 - lambda* - h(a*, x); defined only on the safe set.
  double unclamped(std::span<const double> x) const {
    if (!set_.contains(x)) {
      throw ConfigError(
          "the certified bound is undefined outside the safe set");
    }
    basis_.features(x, feat_);
    return 1.0 - lambda_ - dot(feat_, coeff_);
  }

  double bound(std::span<const double> x) const {
    return std::clamp(unclamped(x), 0.0, 1.0);
  }

 private:
  MultiIndexBasis basis_;
  SafeSet set_;
  std::vector<double> coeff_;
  double lambda_;
  mutable std::vector<double> feat_;
};

inline double sbc_bound(const Certificate& cert, std::span<const double> x) {
  return SbcBoundEvaluator(cert).bound(x);
}

inline double sbc_bound_unclamped(const Certificate& cert,
                                  std::span<const double> x) {
  return SbcBoundEvaluator(cert).unclamped(x);
}

// Runs one full certification pipeline: plan, sample, build the scenario
// program, solve, and assemble the certificate.  Deterministic in
// (system, params, seed).
inline Certificate certify(const BlackBoxSystem& sys, const PacParams& params,
                           std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  const auto secs = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };
  const auto t_start = clock::now();

  params.validate();
  const SafeSet& safe = sys.safe_set();
  if (safe.dim() != sys.state_dim()) {
    throw ConfigError("safe set dimension does not match the system");
  }

  Certificate cert;
  cert.params = params;
  cert.plan = make_plan(params, sys.state_dim());
  cert.seed = seed;
  cert.system_name = sys.name();
  cert.state_dim = sys.state_dim();
  cert.disturbance_dim = sys.disturbance_dim();
  cert.safe_set_json = safe.to_json();
  cert.basis_kind =
      is_robust(params.method) ? BasisKind::kHandelman : BasisKind::kBernstein;
  cert.kappa = params.kappa;
  cert.basis_lo = safe.bbox_lo();
  cert.basis_hi = safe.bbox_hi();

  MultiIndexBasis basis(cert.basis_kind, cert.kappa, cert.basis_lo,
                        cert.basis_hi);
  CountingSystem counted(sys);
  log_info("certify: " + std::string(method_name(params.method)) + " on " +
           sys.name() + ", N=" + std::to_string(cert.plan.n_states) +
           (cert.plan.draws_per_state > 1
                ? " M=" + std::to_string(cert.plan.draws_per_state)
                : "") +
           ", seed=" + std::to_string(seed));

  // Sample, then build the scenario program.
  ScenarioLp lp;
  std::vector<double> anchors;  // sbc3 objective anchor states
  const auto t_sample = clock::now();
  auto t_build_start = clock::now();
  if (params.method == Method::kRbc1Scenario ||
      params.method == Method::kRbc1Vc) {
    PairSampleSet s =
        draw_pair_samples(counted, safe, cert.plan.n_states, seed);
    t_build_start = clock::now();
    lp = build_rbc_lp(s, basis, safe, params);
  } else if (params.method == Method::kRbc2) {
    GroupSampleSet s = draw_group_samples(
        counted, safe, cert.plan.n_states, cert.plan.draws_per_state, seed);
    t_build_start = clock::now();
    lp = build_rbc_lp(s, basis, safe, params);
  } else {
    GroupSampleSet s = draw_group_samples(
        counted, safe, cert.plan.n_states, cert.plan.draws_per_state, seed);
    anchors = draw_states(safe, static_cast<std::size_t>(params.n_o), seed,
                          streams::kAnchorStates);
    t_build_start = clock::now();
    lp = build_sbc_lp(s, anchors, static_cast<std::size_t>(params.n_o), basis,
                      safe, params);
  }
  const auto t_solve_start = clock::now();
  cert.sample_seconds = secs(t_sample, t_build_start);
  cert.build_seconds = secs(t_build_start, t_solve_start);

  ScenarioSolution sol = solve_scenario_lp(lp);
  const auto t_solve_end = clock::now();
  cert.solve_seconds = secs(t_solve_start, t_solve_end);

  if (sol.status == LpStatus::kInfeasible) {
    // Both program families carry an explicit feasible point, so this can
    // only mean the model was built wrong.
    throw SolverError(
        "scenario program reported infeasible although a feasible anchor "
        "point exists by construction; this indicates a model-build defect");
  }
  cert.solver_status = sol.status;
  cert.solver_iterations = sol.iterations;
  cert.objective = sol.objective;
  cert.scalar = sol.scalar;
  cert.coefficients = std::move(sol.coefficients);
  cert.step_queries = counted.step_calls();

  if (cert.is_stochastic()) {
    cert.accepted = sol.status == LpStatus::kOptimal;
    // Vacuity: the certificate is formally valid but uninformative when the
    // bound is non-positive on more than half of the anchor states.
    if (cert.accepted) {
      std::vector<double> feat(basis.terms());
      const std::size_t n = static_cast<std::size_t>(sys.state_dim());
      std::size_t nonpositive = 0;
      const std::size_t n_anchor = anchors.size() / n;
      for (std::size_t k = 0; k < n_anchor; ++k) {
        basis.features(
            std::span<const double>(anchors.data() + k * n, n), feat);
        const double b = 1.0 - cert.scalar - dot(feat, cert.coefficients);
        if (b <= 0.0) ++nonpositive;
      }
      cert.vacuous = 2 * nonpositive > n_anchor;
      if (cert.vacuous) {
        log_warn("certificate is vacuous: bound <= 0 on " +
                 std::to_string(nonpositive) + "/" +
                 std::to_string(n_anchor) + " anchor states");
      }
    }
  } else {
    cert.accepted =
        sol.status == LpStatus::kOptimal && sol.scalar <= params.zero_tol;
  }
  cert.guarantee_text = detail::certificate_guarantee_text(cert);
  cert.total_seconds = secs(t_start, clock::now());
  log_info("certify: verdict " +
           std::string(cert.accepted ? "accepted" : "rejected") +
           ", objective " + std::to_string(cert.objective) + ", " +
           std::to_string(cert.total_seconds) + "s");
  return cert;
}

}  // namespace pacsafe
