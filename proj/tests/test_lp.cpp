#include <cmath>
#include <cstdint>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "oracle_lp.hpp"
#include "pacsafe/errors.hpp"
#include "pacsafe/lp.hpp"
#include "pacsafe/rng.hpp"

using Catch::Matchers::WithinAbs;
using pacsafe::LpModel;
using pacsafe::LpSolution;
using pacsafe::LpStart;
using pacsafe::LpStatus;
using pacsafe::RngStream;
using pacsafe::SolverError;
using pacsafe::solve_lp;

namespace {

LpModel make_model(std::vector<double> c, std::vector<double> rows,
                   std::vector<double> rhs, std::vector<double> lo,
                   std::vector<double> up) {
  LpModel m;
  m.objective = std::move(c);
  m.rows = std::move(rows);
  m.rhs = std::move(rhs);
  m.lower = std::move(lo);
  m.upper = std::move(up);
  return m;
}

double row_value(const LpModel& m, std::size_t i,
                 const std::vector<double>& z) {
  double s = 0.0;
  for (std::size_t j = 0; j < m.num_vars(); ++j) {
    s += m.rows[i * m.num_vars() + j] * z[j];
  }
  return s;
}

}  // namespace

TEST_CASE("degenerate optimum resolves to the lexicographically least point") {
  // min x + y subject to x + y >= 1 on [0,10]^2: the whole segment from
  // (1,0) to (0,1) is optimal, so the refined answer must be (0,1) exactly.
  const LpModel m = make_model({1.0, 1.0}, {-1.0, -1.0}, {-1.0}, {0.0, 0.0},
                               {10.0, 10.0});
  const LpSolution s = solve_lp(m);
  REQUIRE(s.status == LpStatus::kOptimal);
  REQUIRE_THAT(s.objective, WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(s.z[0], WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(s.z[1], WithinAbs(1.0, 1e-12));
  // The single row is tight at the optimum.
  REQUIRE(std::find(s.active_rows.begin(), s.active_rows.end(), 0) !=
          s.active_rows.end());
}

TEST_CASE("zero objective still yields the lexicographically least point") {
  // Every feasible point is optimal; refinement must pick x = 0, then the
  // smallest y compatible with x + y >= 1.
  const LpModel m = make_model({0.0, 0.0}, {-1.0, -1.0}, {-1.0}, {0.0, -1.0},
                               {2.0, 3.0});
  const LpSolution s = solve_lp(m);
  REQUIRE(s.status == LpStatus::kOptimal);
  REQUIRE_THAT(s.objective, WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(s.z[0], WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(s.z[1], WithinAbs(1.0, 1e-12));
}

TEST_CASE("infeasible row systems are reported as infeasible") {
  const LpModel m =
      make_model({1.0}, {1.0}, {-1.0}, {0.0}, {1.0});  // x <= -1, x in [0,1]
  const LpSolution s = solve_lp(m);
  REQUIRE(s.status == LpStatus::kInfeasible);
  REQUIRE(s.z.empty());
}

TEST_CASE("a warm start does not change the refined answer") {
  LpModel m = make_model({1.0, 1.0}, {-1.0, -1.0}, {-1.0}, {0.0, 0.0},
                         {10.0, 10.0});
  LpStart start;
  start.values = {5.0, 5.0};
  m.start = start;
  const LpSolution s = solve_lp(m);
  REQUIRE(s.status == LpStatus::kOptimal);
  REQUIRE_THAT(s.z[0], WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(s.z[1], WithinAbs(1.0, 1e-12));
}

TEST_CASE("model validation rejects malformed inputs") {
  // Free variable (both bounds infinite).
  const double inf = std::numeric_limits<double>::infinity();
  LpModel free_var = make_model({1.0}, {}, {}, {-inf}, {inf});
  REQUIRE_THROWS_AS(solve_lp(free_var), SolverError);

  // Crossed bounds.
  LpModel crossed = make_model({1.0}, {}, {}, {2.0}, {1.0});
  REQUIRE_THROWS_AS(solve_lp(crossed), SolverError);

  // Bound vectors sized inconsistently with the objective.
  LpModel short_bounds = make_model({1.0, 1.0}, {}, {}, {0.0}, {1.0});
  REQUIRE_THROWS_AS(solve_lp(short_bounds), SolverError);

  // Row storage not nr * nv.
  LpModel bad_rows = make_model({1.0, 1.0}, {1.0}, {0.0}, {0.0, 0.0},
                                {1.0, 1.0});
  REQUIRE_THROWS_AS(solve_lp(bad_rows), SolverError);
}

TEST_CASE("solver agrees with a vertex-enumeration reference on random LPs") {
  // Small-integer data provokes ties, degenerate vertices, and redundant
  // rows; the reference enumerates every candidate vertex, so feasibility
  // verdicts and optimal objectives are checked exactly.
  std::size_t feasible_count = 0, infeasible_count = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    RngStream rng(1234, t);
    const std::size_t nv = 2 + rng.next_u64() % 3;   // 2..4
    const std::size_t nr = 1 + rng.next_u64() % 10;  // 1..10
    LpModel m;
    m.objective.resize(nv);
    m.rows.resize(nr * nv);
    m.rhs.resize(nr);
    m.lower.resize(nv);
    m.upper.resize(nv);
    for (auto& c : m.objective) {
      c = static_cast<double>(static_cast<int>(rng.next_u64() % 11) - 5);
    }
    for (auto& a : m.rows) {
      a = static_cast<double>(static_cast<int>(rng.next_u64() % 9) - 4);
    }
    for (auto& b : m.rhs) {
      b = static_cast<double>(static_cast<int>(rng.next_u64() % 13) - 6);
    }
    for (std::size_t j = 0; j < nv; ++j) {
      m.lower[j] = -static_cast<double>(1 + rng.next_u64() % 3);
      m.upper[j] = static_cast<double>(1 + rng.next_u64() % 3);
      if (rng.next_unit() < 0.1) m.upper[j] = m.lower[j];  // pinned variable
    }

    CAPTURE(t, nv, nr);
    const oracle::Verdict ref = oracle::solve_reference(m);
    const LpSolution s = solve_lp(m);
    REQUIRE((s.status != LpStatus::kInfeasible) == ref.feasible);
    if (!ref.feasible) {
      ++infeasible_count;
      continue;
    }
    ++feasible_count;
    REQUIRE(s.status == LpStatus::kOptimal);
    REQUIRE_THAT(s.objective,
                 WithinAbs(ref.objective, 1e-7 * (1.0 + std::abs(ref.objective))));
    // The reported point must be feasible and consistent with the objective.
    REQUIRE(oracle::point_feasible(m, s.z));
    double obj = 0.0;
    for (std::size_t j = 0; j < nv; ++j) obj += m.objective[j] * s.z[j];
    REQUIRE_THAT(s.objective, WithinAbs(obj, 1e-9 * (1.0 + std::abs(obj))));
    // Rows flagged active really are tight at the solution.
    for (const std::int32_t i : s.active_rows) {
      const double v = row_value(m, static_cast<std::size_t>(i), s.z);
      REQUIRE_THAT(v, WithinAbs(m.rhs[i], 1e-6 * (1.0 + std::abs(m.rhs[i]))));
    }
  }
  // The generator must have exercised both outcomes to mean anything.
  REQUIRE(feasible_count >= 20);
  REQUIRE(infeasible_count >= 20);
}

TEST_CASE("dense LU factorization solves both orientations") {
  // A fixed well-conditioned 5x5 matrix with a known solution.
  const int n = 5;
  const std::vector<double> a = {
      4.0, 1.0, 0.0, 2.0, -1.0,  //
      1.0, 5.0, 1.0, 0.0, 0.5,   //
      0.0, 1.0, 6.0, 1.0, 0.0,   //
      2.0, 0.0, 1.0, 7.0, 1.0,   //
      -1.0, 0.5, 0.0, 1.0, 3.0,
  };
  const std::vector<double> x_true = {1.0, -2.0, 3.0, -4.0, 5.0};

  std::vector<double> b(n, 0.0), bt(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      b[i] += a[static_cast<std::size_t>(i) * n + j] * x_true[j];
      bt[i] += a[static_cast<std::size_t>(j) * n + i] * x_true[j];
    }
  }

  pacsafe::detail::DenseLu lu;
  REQUIRE(lu.factor(a, n));
  std::vector<double> x = b;
  lu.solve(x);
  for (int i = 0; i < n; ++i) REQUIRE_THAT(x[i], WithinAbs(x_true[i], 1e-10));
  std::vector<double> xt = bt;
  lu.solve_transposed(xt);
  for (int i = 0; i < n; ++i) REQUIRE_THAT(xt[i], WithinAbs(x_true[i], 1e-10));

  // Singular input is refused rather than silently inverted.
  const std::vector<double> sing = {1.0, 2.0, 2.0, 4.0};
  pacsafe::detail::DenseLu lu2;
  REQUIRE_FALSE(lu2.factor(sing, 2));
}
