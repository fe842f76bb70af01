#pragma once

#include <cmath>
#include <cstddef>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>

#include "pacsafe/errors.hpp"
#include "pacsafe/params.hpp"

namespace pacsafe {

namespace detail {
inline void require_unit(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw ConfigError(std::string(name) + " must lie in (0, 1), got " +
                      std::to_string(v));
  }
}
}  // namespace detail

// Scenario-program sample size: the smallest N with
// alpha >= (2/N) * (ln(1/delta) + dim), i.e.
// N = ceil((2/alpha) * (ln(1/delta) + dim)).  With N scenarios, the
// probability (over the sample) that the optimizer violates more than an
// alpha-fraction of unseen constraints is below delta.
inline std::size_t scenario_sample_count(double alpha, double delta,
                                         std::size_t decision_dim) {
  detail::require_unit(alpha, "alpha");
  detail::require_unit(delta, "delta");
  if (decision_dim < 1) throw ConfigError("decision_dim must be >= 1");
  double n = (2.0 / alpha) *
             (std::log(1.0 / delta) + static_cast<double>(decision_dim));
  return static_cast<std::size_t>(std::ceil(n));
}

// VC-dimension based sample size:
// N = ceil((5/alpha) * (ln(4/delta) + vc * ln(40/alpha))).
inline std::size_t vc_sample_count(double alpha, double delta,
                                   std::size_t vc_dim) {
  detail::require_unit(alpha, "alpha");
  detail::require_unit(delta, "delta");
  if (vc_dim < 1) throw ConfigError("vc_dim must be >= 1");
  double n = (5.0 / alpha) *
             (std::log(4.0 / delta) +
              static_cast<double>(vc_dim) * std::log(40.0 / alpha));
  return static_cast<std::size_t>(std::ceil(n));
}

// Disturbance draws per state so that a single empirical mean of M indicator
// samples is within alpha2 of its true value with probability 1 - (1-l)*delta2
// (Hoeffding): M = ceil(ln(1/((1-l)*delta2)) / (2*alpha2^2)).
inline std::size_t hoeffding_group_count_rbc(double alpha2, double delta2,
                                             double l) {
  detail::require_unit(alpha2, "alpha2");
  detail::require_unit(delta2, "delta2");
  detail::require_unit(l, "l");
  double m = std::log(1.0 / ((1.0 - l) * delta2)) / (2.0 * alpha2 * alpha2);
  return static_cast<std::size_t>(std::ceil(m));
}

// Same bound for the stochastic program, whose per-state average ranges over
// [0, u_a] rather than [0, 1] and must resolve the margin tau:
// M = ceil(u_a^2 * ln(1/((1-l)*delta2)) / (2*tau^2)).
inline std::size_t hoeffding_group_count_sbc(double tau, double u_a,
                                             double delta2, double l) {
  detail::require_unit(tau, "tau");
  detail::require_unit(delta2, "delta2");
  detail::require_unit(l, "l");
  if (!(u_a >= 1.0)) throw ConfigError("u_a must be >= 1 for sbc3 planning");
  double m = u_a * u_a * std::log(1.0 / ((1.0 - l) * delta2)) /
             (2.0 * tau * tau);
  return static_cast<std::size_t>(std::ceil(m));
}

// Outer state-fraction certified by the two-level methods:
// 1 - alpha1 / (l * delta2); requires alpha1 < l * delta2.
inline double rbc2_outer_fraction(double alpha1, double l, double delta2) {
  detail::require_unit(alpha1, "alpha1");
  detail::require_unit(l, "l");
  detail::require_unit(delta2, "delta2");
  if (!(alpha1 < l * delta2)) {
    throw ConfigError(
        "two-level methods require alpha1 < l*delta2; got alpha1=" +
        std::to_string(alpha1) + ", l*delta2=" + std::to_string(l * delta2));
  }
  return 1.0 - alpha1 / (l * delta2);
}

// What an accepted certificate asserts, in numbers and in words.
struct GuaranteeSummary {
  double confidence = 0.0;       // over the drawn sample set
  double outer_fraction = 0.0;   // fraction of safe-set states covered
  // One-step containment probability per covered state; absent for sbc3,
  // whose bound is state-dependent (1 - lambda* - h(a*, x)).
  std::optional<double> inner_probability;
  std::string text;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["confidence"] = confidence;
    j["outer_fraction"] = outer_fraction;
    if (inner_probability.has_value()) {
      j["inner_probability"] = *inner_probability;
    } else {
      j["inner_probability"] = "state_dependent";
    }
    j["text"] = text;
    return j;
  }

  static GuaranteeSummary from_json(const nlohmann::json& j) {
    GuaranteeSummary g;
    g.confidence = j.at("confidence").get<double>();
    g.outer_fraction = j.at("outer_fraction").get<double>();
    if (j.at("inner_probability").is_number()) {
      g.inner_probability = j.at("inner_probability").get<double>();
    }
    g.text = j.at("text").get<std::string>();
    return g;
  }
};

// Complete sampling plan for one certification run.
struct SamplePlan {
  Method method = Method::kRbc1Scenario;
  std::size_t n_states = 0;         // scenario states N
  std::size_t draws_per_state = 1;  // M (1 for the one-shot methods)
  std::size_t basis_terms = 0;      // m
  std::size_t decision_dim = 0;     // m + 1 (coefficients plus scalar)
  std::optional<std::size_t> vc_dim_used;
  GuaranteeSummary guarantee;

  std::size_t total_queries() const { return n_states * draws_per_state; }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["n_states"] = n_states;
    j["draws_per_state"] = draws_per_state;
    j["basis_terms"] = basis_terms;
    j["decision_dim"] = decision_dim;
    if (vc_dim_used.has_value()) j["vc_dim_used"] = *vc_dim_used;
    j["total_queries"] = total_queries();
    j["guarantee"] = guarantee.to_json();
    return j;
  }

  static SamplePlan from_json(Method method, const nlohmann::json& j) {
    SamplePlan p;
    p.method = method;
    p.n_states = j.at("n_states").get<std::size_t>();
    p.draws_per_state = j.at("draws_per_state").get<std::size_t>();
    p.basis_terms = j.at("basis_terms").get<std::size_t>();
    p.decision_dim = j.at("decision_dim").get<std::size_t>();
    if (j.contains("vc_dim_used")) {
      p.vc_dim_used = j.at("vc_dim_used").get<std::size_t>();
    }
    p.guarantee = GuaranteeSummary::from_json(j.at("guarantee"));
    return p;
  }
};

namespace detail {

inline std::string fmt_prob(double p) {
  std::ostringstream os;
  os.precision(12);
  os << p;
  return os.str();
}

inline std::string guarantee_sentence(double confidence, double outer,
                                      std::optional<double> inner) {
  std::ostringstream os;
  os.precision(12);
  os << "If accepted: with confidence at least " << fmt_prob(confidence)
     << " over the drawn samples, for at least a fraction "
     << fmt_prob(outer) << " of states x in the safe set, ";
  if (inner.has_value()) {
    os << "the next state stays in the safe set with probability at least "
       << fmt_prob(*inner) << " over the disturbance.";
  } else {
    os << "the next state stays in the safe set with probability at least "
          "1 - lambda* - h(a*, x) over the disturbance.";
  }
  return os.str();
}

}  // namespace detail

// Derives N, M, and the guarantee from the parameters and the state
// dimension.  Deterministic, cheap, and re-run by certificate validation to
// detect tampering.
inline SamplePlan make_plan(const PacParams& p, int state_dim) {
  p.validate();
  if (state_dim < 1) throw ConfigError("state dimension must be >= 1");

  SamplePlan plan;
  plan.method = p.method;
  std::size_t m = 1;
  for (int j = 0; j < state_dim; ++j) {
    m *= static_cast<std::size_t>(p.kappa + 1);
    if (m > 10'000'000) {
      throw ConfigError("basis too large: (kappa+1)^n exceeds 10^7 terms");
    }
  }
  plan.basis_terms = m;
  plan.decision_dim = m + 1;

  switch (p.method) {
    case Method::kRbc1Scenario:
      plan.n_states =
          scenario_sample_count(p.alpha1 * p.alpha2, p.delta, plan.decision_dim);
      plan.guarantee.confidence = 1.0 - p.delta;
      plan.guarantee.outer_fraction = 1.0 - p.alpha1;
      plan.guarantee.inner_probability = 1.0 - p.alpha2;
      break;
    case Method::kRbc1Vc: {
      std::size_t vc = p.vc_dim.has_value()
                           ? static_cast<std::size_t>(*p.vc_dim)
                           : plan.decision_dim;
      plan.vc_dim_used = vc;
      plan.n_states = vc_sample_count(p.alpha1 * p.alpha2, p.delta, vc);
      plan.guarantee.confidence = 1.0 - p.delta;
      plan.guarantee.outer_fraction = 1.0 - p.alpha1;
      plan.guarantee.inner_probability = 1.0 - p.alpha2;
      break;
    }
    case Method::kRbc2:
      plan.n_states =
          scenario_sample_count(p.alpha1, p.delta1, plan.decision_dim);
      plan.draws_per_state = hoeffding_group_count_rbc(p.alpha2, p.delta2, p.l);
      plan.guarantee.confidence = 1.0 - p.delta1;
      plan.guarantee.outer_fraction = rbc2_outer_fraction(p.alpha1, p.l,
                                                          p.delta2);
      plan.guarantee.inner_probability = 1.0 - p.alpha2;
      break;
    case Method::kSbc3:
      plan.n_states =
          scenario_sample_count(p.alpha1, p.delta1, plan.decision_dim);
      plan.draws_per_state =
          hoeffding_group_count_sbc(p.tau, p.u_a, p.delta2, p.l);
      plan.guarantee.confidence = 1.0 - p.delta1;
      plan.guarantee.outer_fraction = rbc2_outer_fraction(p.alpha1, p.l,
                                                          p.delta2);
      plan.guarantee.inner_probability = std::nullopt;
      break;
  }
  plan.guarantee.text = detail::guarantee_sentence(
      plan.guarantee.confidence, plan.guarantee.outer_fraction,
      plan.guarantee.inner_probability);
  return plan;
}

}  // namespace pacsafe
