#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "pacsafe/basis.hpp"
#include "pacsafe/errors.hpp"
#include "pacsafe/safe_set.hpp"
#include "pacsafe/samples.hpp"
#include "pacsafe/scenario_lp.hpp"

using Catch::Matchers::WithinAbs;
using pacsafe::BasisKind;
using pacsafe::ConfigError;
using pacsafe::GroupSampleSet;
using pacsafe::LpStatus;
using pacsafe::MultiIndexBasis;
using pacsafe::PacParams;
using pacsafe::PairSampleSet;
using pacsafe::SafeSet;
using pacsafe::ScenarioLp;
using pacsafe::ScenarioSolution;
using pacsafe::build_rbc_lp;
using pacsafe::build_sbc_lp;
using pacsafe::solve_scenario_lp;

namespace {

// A one-dimensional pair sample with hand-picked states and successors; the
// recorded disturbances are irrelevant to program construction.
PairSampleSet pairs_1d(const std::vector<double>& states,
                       const std::vector<double>& successors) {
  PairSampleSet s;
  s.state_dim = 1;
  s.disturbance_dim = 1;
  s.size = states.size();
  s.states = states;
  s.next_states = successors;
  s.disturbances.assign(states.size(), 0.0);
  return s;
}

GroupSampleSet group_1d(const std::vector<double>& states,
                        std::size_t draws_per_state,
                        const std::vector<double>& successors) {
  GroupSampleSet s;
  s.state_dim = 1;
  s.disturbance_dim = 1;
  s.num_states = states.size();
  s.draws_per_state = draws_per_state;
  s.states = states;
  s.next_states = successors;
  s.disturbances.assign(states.size() * draws_per_state, 0.0);
  return s;
}

std::vector<double> features_of(const MultiIndexBasis& basis, double x) {
  std::vector<double> f(basis.terms());
  const double xv[1] = {x};
  basis.features(std::span<const double>(xv, 1), f);
  return f;
}

}  // namespace

TEST_CASE("robust rows encode decrease inside and exit level outside") {
  const SafeSet safe = SafeSet::box({0.0}, {1.0});
  const MultiIndexBasis basis(BasisKind::kBernstein, 1, {0.0}, {1.0});
  PacParams p;  // gamma 0.01, outside value -1, caps 10

  // Successor 2.0 leaves the safe interval; the others stay inside.
  const PairSampleSet s =
      pairs_1d({0.25, 0.5, 1.0}, {0.5, 2.0, 0.0});
  const ScenarioLp lp = build_rbc_lp(s, basis, safe, p);

  REQUIRE(lp.num_terms == 2);
  REQUIRE(lp.scalar_index == 2);
  REQUIRE(lp.model.num_vars() == 3);
  REQUIRE(lp.model.num_rows() == 3);
  REQUIRE(lp.model.objective == std::vector<double>{0.0, 0.0, 1.0});
  REQUIRE(lp.model.lower == std::vector<double>{0.0, 0.0, 0.0});
  REQUIRE(lp.model.upper == std::vector<double>{10.0, 10.0, 10.0});
  REQUIRE(lp.model.provenance == std::vector<std::int32_t>{0, 1, 2});

  // Row per sample: safe successor rows read gamma*f(x) - f(x+) with zero
  // right-hand side; the exit row reads gamma*f(x) with the outside value.
  const auto f025 = features_of(basis, 0.25);
  const auto f05 = features_of(basis, 0.5);
  const auto f10 = features_of(basis, 1.0);
  const auto f00 = features_of(basis, 0.0);
  const double* r0 = lp.model.rows.data();
  REQUIRE(r0[0] == p.gamma * f025[0] - f05[0]);
  REQUIRE(r0[1] == p.gamma * f025[1] - f05[1]);
  REQUIRE(r0[2] == -1.0);
  REQUIRE(lp.model.rhs[0] == 0.0);
  const double* r1 = lp.model.rows.data() + 3;
  REQUIRE(r1[0] == p.gamma * f05[0]);
  REQUIRE(r1[1] == p.gamma * f05[1]);
  REQUIRE(r1[2] == -1.0);
  REQUIRE(lp.model.rhs[1] == p.outside_value);
  const double* r2 = lp.model.rows.data() + 6;
  REQUIRE(r2[0] == p.gamma * f10[0] - f00[0]);
  REQUIRE(r2[1] == p.gamma * f10[1] - f00[1]);
  REQUIRE(r2[2] == -1.0);
  REQUIRE(lp.model.rhs[2] == 0.0);

  // The all-zero barrier with the scalar at the exit magnitude satisfies
  // every row, so the program always has a feasible point.
  const std::vector<double> anchor = {0.0, 0.0, -p.outside_value};
  for (std::size_t i = 0; i < lp.model.num_rows(); ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      v += lp.model.rows[i * 3 + j] * anchor[j];
    }
    REQUIRE(v <= lp.model.rhs[i] + 1e-12);
  }

  // The warm start encodes exactly that point, pivoted on the exit row.
  REQUIRE(lp.model.start.has_value());
  REQUIRE(lp.model.start->values == std::vector<double>{0.0, 0.0, 1.0});
  REQUIRE(lp.model.start->basic ==
          std::vector<std::pair<int, int>>{{2, 1}});
}

TEST_CASE("all-safe data certifies with zero violation budget") {
  const SafeSet safe = SafeSet::box({0.0}, {1.0});
  const MultiIndexBasis basis(BasisKind::kBernstein, 1, {0.0}, {1.0});
  PacParams p;
  const PairSampleSet s =
      pairs_1d({0.1, 0.4, 0.6, 0.9}, {0.2, 0.35, 0.55, 0.8});
  const ScenarioSolution sol = solve_scenario_lp(build_rbc_lp(s, basis, safe, p));
  REQUIRE(sol.status == LpStatus::kOptimal);
  REQUIRE(sol.scalar == 0.0);
  REQUIRE(sol.objective == 0.0);
  REQUIRE(sol.coefficients == std::vector<double>{0.0, 0.0});
}

TEST_CASE("a single exit sample forces the scalar to the exit magnitude") {
  const SafeSet safe = SafeSet::box({0.0}, {1.0});
  const MultiIndexBasis basis(BasisKind::kBernstein, 1, {0.0}, {1.0});
  PacParams p;

  // Nonnegative features and nonnegative coefficients mean no barrier can
  // discount an exit row, so the optimum is exactly -outside_value.
  const PairSampleSet s = pairs_1d({0.1, 0.5, 0.9}, {0.2, 3.0, 0.8});
  const ScenarioSolution sol = solve_scenario_lp(build_rbc_lp(s, basis, safe, p));
  REQUIRE(sol.status == LpStatus::kOptimal);
  REQUIRE_THAT(sol.scalar, WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(sol.objective, WithinAbs(1.0, 1e-12));
  REQUIRE(sol.coefficients == std::vector<double>{0.0, 0.0});
}

TEST_CASE("exhausting the violation budget is classified, not reported optimal") {
  const SafeSet safe = SafeSet::box({0.0}, {1.0});
  const MultiIndexBasis basis(BasisKind::kBernstein, 1, {0.0}, {1.0});
  const PairSampleSet s = pairs_1d({0.1, 0.5, 0.9}, {0.2, 3.0, 0.8});

  PacParams cap_hit;
  cap_hit.outside_value = -5.0;
  cap_hit.xi_bar = 5.0;  // optimum lands exactly on the cap
  const ScenarioSolution hit =
      solve_scenario_lp(build_rbc_lp(s, basis, safe, cap_hit));
  REQUIRE(hit.status == LpStatus::kBoundHit);
  REQUIRE_THAT(hit.scalar, WithinAbs(5.0, 1e-9));

  PacParams too_small = cap_hit;
  too_small.xi_bar = 3.0;  // the exit row cannot be satisfied at all
  const ScenarioSolution inf =
      solve_scenario_lp(build_rbc_lp(s, basis, safe, too_small));
  REQUIRE(inf.status == LpStatus::kInfeasible);
  REQUIRE(inf.coefficients.empty());
}

TEST_CASE("grouped robust rows match the equivalent flat pair expansion") {
  const SafeSet safe = SafeSet::box({0.0}, {1.0});
  const MultiIndexBasis basis(BasisKind::kBernstein, 2, {0.0}, {1.0});
  PacParams p;

  const std::vector<double> states = {0.0, 0.5};
  const std::vector<double> successors = {0.1, 0.2, 0.3,   // draws of state 0
                                          0.6, 5.0, 0.7};  // draws of state 1
  const GroupSampleSet g = group_1d(states, 3, successors);

  // Row r of the grouped program corresponds to pair r = i*draws + j.
  std::vector<double> flat_states;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) flat_states.push_back(states[i]);
  }
  const PairSampleSet flat = pairs_1d(flat_states, successors);

  const ScenarioLp a = build_rbc_lp(g, basis, safe, p);
  const ScenarioLp b = build_rbc_lp(flat, basis, safe, p);
  REQUIRE(a.model.num_rows() == 6);
  REQUIRE(a.model.rows == b.model.rows);
  REQUIRE(a.model.rhs == b.model.rhs);
  REQUIRE(a.model.objective == b.model.objective);
  REQUIRE(a.model.lower == b.model.lower);
  REQUIRE(a.model.upper == b.model.upper);
  REQUIRE(a.model.provenance == b.model.provenance);
  REQUIRE(a.model.start->values == b.model.start->values);
  REQUIRE(a.model.start->basic == b.model.start->basic);
  // The exit successor 5.0 sits at flattened position 1*3 + 1.
  REQUIRE(a.model.start->basic.front().second == 4);
}

TEST_CASE("stochastic rows average successors and charge exits to the rhs") {
  const SafeSet safe = SafeSet::box({0.0}, {1.0});
  const MultiIndexBasis basis(BasisKind::kBernstein, 1, {0.0}, {1.0});
  PacParams p;
  p.u_a = 1.1;
  p.tau = 0.01;

  // State 0 has one of two draws exiting; state 1 stays inside.
  const GroupSampleSet g = group_1d({0.25, 0.75}, 2, {0.5, 7.0, 0.5, 1.0});
  const std::vector<double> anchors = {0.2, 0.8};
  const ScenarioLp lp = build_sbc_lp(g, anchors, 2, basis, safe, p);

  REQUIRE(lp.model.num_rows() == 2);
  REQUIRE(lp.model.num_vars() == 3);
  REQUIRE(lp.model.upper == std::vector<double>{1.1, 1.1, 1.0});

  const auto f025 = features_of(basis, 0.25);
  const auto f075 = features_of(basis, 0.75);
  const auto f05 = features_of(basis, 0.5);
  const auto f10 = features_of(basis, 1.0);
  // Row 0: only the inside draw contributes to the average.
  REQUIRE(lp.model.rows[0] == f05[0] * 0.5 - f025[0]);
  REQUIRE(lp.model.rows[1] == f05[1] * 0.5 - f025[1]);
  REQUIRE(lp.model.rows[2] == -1.0);
  REQUIRE(lp.model.rhs[0] == -p.tau - 0.5);
  // Row 1: both draws inside.
  REQUIRE(lp.model.rows[3] == (f05[0] + f10[0]) * 0.5 - f075[0]);
  REQUIRE(lp.model.rows[4] == (f05[1] + f10[1]) * 0.5 - f075[1]);
  REQUIRE(lp.model.rows[5] == -1.0);
  REQUIRE(lp.model.rhs[1] == -p.tau);

  // Objective: mean anchor features for the coefficients, one for the slack.
  const auto f02 = features_of(basis, 0.2);
  const auto f08 = features_of(basis, 0.8);
  REQUIRE(lp.model.objective[0] == (f02[0] + f08[0]) * 0.5);
  REQUIRE(lp.model.objective[1] == (f02[1] + f08[1]) * 0.5);
  REQUIRE(lp.model.objective[2] == 1.0);

  // Anchor buffer validation.
  REQUIRE_THROWS_AS(build_sbc_lp(g, anchors, 0, basis, safe, p), ConfigError);
  REQUIRE_THROWS_AS(build_sbc_lp(g, anchors, 3, basis, safe, p), ConfigError);
}

TEST_CASE("identity dynamics pin the slack level at its floor") {
  const SafeSet safe = SafeSet::box({0.0}, {1.0});
  const MultiIndexBasis basis(BasisKind::kBernstein, 1, {0.0}, {1.0});
  PacParams p;
  p.u_a = 1.1;
  p.tau = 0.01;

  // Every successor equals its own state, so each row's coefficient block
  // cancels exactly and the program reduces to "slack at least tau".
  const std::vector<double> states = {0.1, 0.3, 0.6, 0.9};
  GroupSampleSet g = group_1d(states, 1, states);
  const std::vector<double> anchors = {0.2, 0.8};
  const ScenarioLp lp = build_sbc_lp(g, anchors, 2, basis, safe, p);
  for (std::size_t i = 0; i < lp.model.num_rows(); ++i) {
    REQUIRE(lp.model.rows[i * 3 + 0] == 0.0);
    REQUIRE(lp.model.rows[i * 3 + 1] == 0.0);
    REQUIRE(lp.model.rows[i * 3 + 2] == -1.0);
  }

  const ScenarioSolution sol = solve_scenario_lp(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  REQUIRE(sol.coefficients == std::vector<double>{0.0, 0.0});
  REQUIRE_THAT(sol.scalar, WithinAbs(p.tau, 1e-12));
  REQUIRE_THAT(sol.objective, WithinAbs(p.tau, 1e-12));
}
