#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pacsafe/basis.hpp"
#include "pacsafe/errors.hpp"
#include "pacsafe/log.hpp"
#include "pacsafe/lp.hpp"
#include "pacsafe/params.hpp"
#include "pacsafe/safe_set.hpp"
#include "pacsafe/samples.hpp"

namespace pacsafe {

// A scenario program over barrier coefficients a[0..m) plus one scalar
// decision variable (the violation budget for robust certificates, the
// martingale slack level for stochastic ones).  The scalar always sits at
// column `num_terms`.
struct ScenarioLp {
  LpModel model;
  std::size_t num_terms = 0;
  std::size_t scalar_index = 0;
};

struct ScenarioSolution {
  LpStatus status = LpStatus::kOptimal;
  std::vector<double> coefficients;  // barrier coefficients a*
  double scalar = 0.0;               // optimal scalar decision value
  double objective = 0.0;
  std::size_t iterations = 0;
  std::vector<std::int32_t> active_rows;
};

namespace detail {

inline void reserve_scenario(ScenarioLp& lp, std::size_t m,
                             std::size_t n_rows) {
  const std::size_t nv = m + 1;
  lp.num_terms = m;
  lp.scalar_index = m;
  lp.model.objective.assign(nv, 0.0);
  lp.model.rows.assign(n_rows * nv, 0.0);
  lp.model.rhs.assign(n_rows, 0.0);
  lp.model.lower.assign(nv, 0.0);
  lp.model.upper.assign(nv, 0.0);
  lp.model.provenance.assign(n_rows, -1);
}

// One robust row: with successor inside the safe set the barrier must not
// grow (gamma.B(x) <= B(x+) + xi); with the successor outside, gamma.B(x)
// must dip below the outside value C (up to xi).
inline void fill_rbc_row(double* out, double& rhs,
                         std::span<const double> fx,
                         const double* fxp_or_null, double gamma, double c) {
  const std::size_t m = fx.size();
  if (fxp_or_null != nullptr) {
    for (std::size_t j = 0; j < m; ++j) out[j] = gamma * fx[j] - fxp_or_null[j];
    rhs = 0.0;
  } else {
    for (std::size_t j = 0; j < m; ++j) out[j] = gamma * fx[j];
    rhs = c;
  }
  out[m] = -1.0;
}

inline void finish_rbc_lp(ScenarioLp& lp, const PacParams& p,
                          std::int64_t first_unsafe_row,
                          std::size_t unsafe_count) {
  const std::size_t m = lp.num_terms;
  lp.model.objective[m] = 1.0;
  for (std::size_t j = 0; j < m; ++j) lp.model.upper[j] = p.u_a;
  lp.model.upper[m] = p.xi_bar;
  // Warm start: zero coefficients with the scalar absorbing the worst unsafe
  // row is always feasible, and in fact optimal under the lexicographic rule.
  LpStart start;
  start.values.assign(m + 1, 0.0);
  if (first_unsafe_row >= 0) {
    start.values[m] = -p.outside_value;
    start.basic.push_back({static_cast<int>(m),
                           static_cast<int>(first_unsafe_row)});
  }
  lp.model.start = std::move(start);
  log_info("robust scenario program: " + std::to_string(lp.model.num_rows()) +
           " rows, " + std::to_string(unsafe_count) + " with unsafe successor");
}

}  // namespace detail

// Robust scenario program from independent (state, disturbance) pairs.
inline ScenarioLp build_rbc_lp(const PairSampleSet& s,
                               const MultiIndexBasis& basis,
                               const SafeSet& safe, const PacParams& p) {
  const std::size_t m = basis.terms();
  ScenarioLp lp;
  detail::reserve_scenario(lp, m, s.size);
  std::vector<double> fx(m), fxp(m);
  std::int64_t first_unsafe = -1;
  std::size_t unsafe = 0;
  for (std::size_t i = 0; i < s.size; ++i) {
    basis.features(s.state(i), fx);
    const auto xp = s.next_state(i);
    const bool in = safe.contains(xp);
    if (in) {
      basis.features(xp, fxp);
    } else {
      ++unsafe;
      if (first_unsafe < 0) first_unsafe = static_cast<std::int64_t>(i);
    }
    detail::fill_rbc_row(lp.model.rows.data() + i * (m + 1), lp.model.rhs[i],
                         fx, in ? fxp.data() : nullptr, p.gamma,
                         p.outside_value);
    lp.model.provenance[i] = static_cast<std::int32_t>(i);
  }
  detail::finish_rbc_lp(lp, p, first_unsafe, unsafe);
  return lp;
}

// Robust scenario program from grouped samples: every draw of every state
// contributes one row, exactly as if the pairs had been drawn independently.
inline ScenarioLp build_rbc_lp(const GroupSampleSet& s,
                               const MultiIndexBasis& basis,
                               const SafeSet& safe, const PacParams& p) {
  const std::size_t m = basis.terms();
  const std::size_t rows = s.num_states * s.draws_per_state;
  ScenarioLp lp;
  detail::reserve_scenario(lp, m, rows);
  std::vector<double> fx(m), fxp(m);
  std::int64_t first_unsafe = -1;
  std::size_t unsafe = 0;
  std::size_t r = 0;
  for (std::size_t i = 0; i < s.num_states; ++i) {
    basis.features(s.state(i), fx);
    for (std::size_t j = 0; j < s.draws_per_state; ++j, ++r) {
      const auto xp = s.next_state(i, j);
      const bool in = safe.contains(xp);
      if (in) {
        basis.features(xp, fxp);
      } else {
        ++unsafe;
        if (first_unsafe < 0) first_unsafe = static_cast<std::int64_t>(r);
      }
      detail::fill_rbc_row(lp.model.rows.data() + r * (m + 1), lp.model.rhs[r],
                           fx, in ? fxp.data() : nullptr, p.gamma,
                           p.outside_value);
      lp.model.provenance[r] = static_cast<std::int32_t>(r);
    }
  }
  detail::finish_rbc_lp(lp, p, first_unsafe, unsafe);
  return lp;
}

// Stochastic scenario program: one row per sampled state ties the empirical
// one-step expectation of the barrier to a uniform supermartingale decrement
// tau, with draws landing outside the safe set charged the outside value via
// the row's right-hand side.  The objective trades the slack level against
// the barrier's average height over `n_anchors` anchor states (flattened in
// `anchor_states`), which keeps the certified bound informative.
inline ScenarioLp build_sbc_lp(const GroupSampleSet& s,
                               std::span<const double> anchor_states,
                               std::size_t n_anchors,
                               const MultiIndexBasis& basis,
                               const SafeSet& safe, const PacParams& p) {
  const std::size_t m = basis.terms();
  const std::size_t n = s.state_dim;
  const double inv_m = 1.0 / static_cast<double>(s.draws_per_state);
  ScenarioLp lp;
  detail::reserve_scenario(lp, m, s.num_states);
  std::vector<double> fx(m), fxp(m);
  for (std::size_t i = 0; i < s.num_states; ++i) {
    double* out = lp.model.rows.data() + i * (m + 1);
    std::size_t outside = 0;
    for (std::size_t j = 0; j < s.draws_per_state; ++j) {
      const auto xp = s.next_state(i, j);
      if (!safe.contains(xp)) {
        ++outside;
        continue;
      }
      basis.features(xp, fxp);
      for (std::size_t q = 0; q < m; ++q) out[q] += fxp[q];
    }
    basis.features(s.state(i), fx);
    for (std::size_t q = 0; q < m; ++q) out[q] = out[q] * inv_m - fx[q];
    out[m] = -1.0;
    lp.model.rhs[i] =
        -p.tau - static_cast<double>(outside) * inv_m;
    lp.model.provenance[i] = static_cast<std::int32_t>(i);
  }

  if (n_anchors == 0) throw ConfigError("n_o must be positive");
  if (anchor_states.size() != n_anchors * n) {
    throw ConfigError("anchor state buffer sized inconsistently");
  }
  const double inv_a = 1.0 / static_cast<double>(n_anchors);
  for (std::size_t k = 0; k < n_anchors; ++k) {
    basis.features(anchor_states.subspan(k * n, n), fx);
    for (std::size_t q = 0; q < m; ++q) lp.model.objective[q] += fx[q];
  }
  for (std::size_t q = 0; q < m; ++q) lp.model.objective[q] *= inv_a;
  lp.model.objective[m] = 1.0;

  for (std::size_t j = 0; j < m; ++j) lp.model.upper[j] = p.u_a;
  lp.model.upper[m] = 1.0;  // the slack level never needs to exceed one

  // Warm start: the all-at-cap barrier with full slack is feasible whenever
  // the coefficient cap is at least one (validated for this method).
  LpStart start;
  start.values.assign(m + 1, p.u_a);
  start.values[m] = 1.0;
  lp.model.start = std::move(start);
  log_info("stochastic scenario program: " +
           std::to_string(lp.model.num_rows()) + " rows over " +
           std::to_string(m) + " basis terms");
  return lp;
}

// Solves a scenario program and classifies the outcome: reaching the scalar
// variable's cap means the program was only "solved" by exhausting the
// violation budget, which callers must treat as a failed certification.
inline ScenarioSolution solve_scenario_lp(const ScenarioLp& lp) {
  LpSolution raw = solve_lp(lp.model);
  ScenarioSolution out;
  out.status = raw.status;
  out.iterations = raw.iterations;
  if (raw.status == LpStatus::kInfeasible) {
    return out;
  }
  out.coefficients.assign(raw.z.begin(), raw.z.begin() + lp.num_terms);
  out.scalar = raw.z[lp.scalar_index];
  out.objective = raw.objective;
  out.active_rows = std::move(raw.active_rows);
  const double cap = lp.model.upper[lp.scalar_index];
  if (out.scalar >= cap - 1e-9) {
    out.status = LpStatus::kBoundHit;
  }
  return out;
}

}  // namespace pacsafe
