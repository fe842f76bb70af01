#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "pacsafe/certify.hpp"
#include "pacsafe/errors.hpp"
#include "pacsafe/log.hpp"
#include "pacsafe/planner.hpp"
#include "pacsafe/rng.hpp"
#include "pacsafe/system.hpp"

namespace pacsafe {

namespace detail {

// Independent per-index sub-seed so estimates do not depend on how work is
// split across threads: state i always sees the same draw sequence.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed + kGolden * (index + 1)) ^ 0xA5A5A5A5A5A5A5A5ull;
}

}  // namespace detail

struct McEstimate {
  double fraction = 0.0;
  double std_error = 0.0;
  std::size_t draws = 0;
};

// Fraction of n_mc i.i.d. one-step successors of x that stay in the safe
// set, with the binomial standard error sqrt(p(1-p)/n).  Draw hints come
// from the Monte Carlo stream of `seed`, so the estimate is independent of
// any certification sample drawn from the same seed.
inline McEstimate mc_one_step(const BlackBoxSystem& sys,
                              std::span<const double> x, std::size_t n_mc,
                              std::uint64_t seed) {
  if (n_mc == 0) throw ConfigError("n_mc must be at least 1");
  RngStream rng(seed, streams::kMonteCarlo);
  const SafeSet& safe = sys.safe_set();
  StateVector xv(x.begin(), x.end());
  std::size_t inside = 0;
  for (std::size_t i = 0; i < n_mc; ++i) {
    const DisturbanceVector d = sys.sample_disturbance(rng.next_u64());
    if (safe.contains(sys.step(xv, d))) ++inside;
  }
  McEstimate e;
  e.draws = n_mc;
  e.fraction = static_cast<double>(inside) / static_cast<double>(n_mc);
  e.std_error =
      std::sqrt(e.fraction * (1.0 - e.fraction) / static_cast<double>(n_mc));
  return e;
}

struct SweepResult {
  double fraction = 0.0;   // share of states meeting the threshold
  double std_error = 0.0;  // binomial standard error of that share
  double threshold = 0.0;
  std::size_t n_states = 0;
  std::size_t n_mc = 0;

  nlohmann::json to_json() const {
    return {{"fraction", fraction},
            {"std_error", std_error},
            {"threshold", threshold},
            {"n_states", n_states},
            {"n_mc", n_mc}};
  }
};

// Empirical counterpart of the outer probability: draws n_states fresh
// uniform states, estimates each state's one-step containment probability
// with n_mc draws, and reports the share of states at or above `threshold`.
// Deterministic in (sys, sizes, threshold, seed) regardless of `workers`.
inline SweepResult mc_state_sweep(const BlackBoxSystem& sys,
                                  std::size_t n_states, std::size_t n_mc,
                                  double threshold, std::uint64_t seed,
                                  int workers = 1) {
  if (n_states == 0 || n_mc == 0) {
    throw ConfigError("sweep sizes must be at least 1");
  }
  const SafeSet& safe = sys.safe_set();
  RngStream state_rng(seed, streams::kMonteCarlo);
  const std::size_t n = static_cast<std::size_t>(sys.state_dim());
  std::vector<double> states(n_states * n);
  for (std::size_t i = 0; i < n_states; ++i) {
    StateVector x = safe.sample_uniform(state_rng);
    std::copy(x.begin(), x.end(), states.begin() + i * n);
  }

  std::vector<double> p_hat(n_states, 0.0);
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      p_hat[i] = mc_one_step(
                     sys, std::span<const double>(states.data() + i * n, n),
                     n_mc, detail::sub_seed(seed, i))
                     .fraction;
    }
  };
  const int nw = std::max(1, std::min<int>(workers,
                                           static_cast<int>(n_states)));
  if (nw == 1) {
    work(0, n_states);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_states + nw - 1) / nw;
    for (int w = 0; w < nw; ++w) {
      const std::size_t lo = static_cast<std::size_t>(w) * chunk;
      const std::size_t hi = std::min(n_states, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  std::size_t meeting = 0;
  for (double p : p_hat) {
    if (p >= threshold) ++meeting;
  }
  SweepResult r;
  r.threshold = threshold;
  r.n_states = n_states;
  r.n_mc = n_mc;
  r.fraction = static_cast<double>(meeting) / static_cast<double>(n_states);
  r.std_error = std::sqrt(r.fraction * (1.0 - r.fraction) /
                          static_cast<double>(n_states));
  return r;
}

struct Trajectory {
  std::vector<StateVector> states;  // steps + 1 entries, starting at x0
  std::vector<bool> safe;           // per-state containment flags
};

// `runs` independent trajectories of `steps` one-step transitions from x0.
inline std::vector<Trajectory> simulate(const BlackBoxSystem& sys,
                                        const StateVector& x0,
                                        std::size_t steps, std::size_t runs,
                                        std::uint64_t seed) {
  require_dim(x0.size(), static_cast<std::size_t>(sys.state_dim()),
              "simulate x0");
  const SafeSet& safe = sys.safe_set();
  std::vector<Trajectory> out(runs);
  for (std::size_t r = 0; r < runs; ++r) {
    RngStream rng(detail::sub_seed(seed, r), streams::kMonteCarlo);
    Trajectory& tr = out[r];
    tr.states.reserve(steps + 1);
    tr.safe.reserve(steps + 1);
    tr.states.push_back(x0);
    tr.safe.push_back(safe.contains(x0));
    StateVector x = x0;
    for (std::size_t t = 0; t < steps; ++t) {
      x = sys.step(x, sys.sample_disturbance(rng.next_u64()));
      tr.states.push_back(x);
      tr.safe.push_back(safe.contains(x));
    }
  }
  return out;
}

struct GridPoint {
  double x1 = 0.0;
  double x2 = 0.0;
  double bound = 0.0;
  bool in_safe_set = false;
};

// Evaluates a stochastic certificate's bound on a resolution x resolution
// grid of cell centers over the certified box.  For systems with more than
// two dimensions, `slice` fixes the remaining coordinates (keys are 1-based
// dimension numbers); the two free dimensions, in ascending order, become
// the grid axes.  Points outside the safe set are flagged and carry bound 0.
inline std::vector<GridPoint> contour_grid(
    const Certificate& cert, int resolution,
    const std::map<int, double>& slice = {}) {
  if (resolution < 1) throw ConfigError("resolution must be at least 1");
  SbcBoundEvaluator eval(cert);
  const int n = cert.state_dim;
  std::vector<int> free_dims;
  for (int jdim = 1; jdim <= n; ++jdim) {
    if (!slice.count(jdim)) free_dims.push_back(jdim);
  }
  for (const auto& [jdim, v] : slice) {
    if (jdim < 1 || jdim > n) {
      throw ConfigError("slice names dimension " + std::to_string(jdim) +
                        " but the system has " + std::to_string(n));
    }
    if (!std::isfinite(v)) throw ConfigError("slice values must be finite");
  }
  if (free_dims.size() != 2) {
    throw ConfigError(
        "grid needs exactly 2 free dimensions; fix the others with a slice "
        "(got " +
        std::to_string(free_dims.size()) + " free)");
  }
  const int a = free_dims[0] - 1, b = free_dims[1] - 1;
  StateVector x(static_cast<std::size_t>(n), 0.0);
  for (const auto& [jdim, v] : slice) x[jdim - 1] = v;

  const auto center = [&](int dim0, int k) {
    const double lo = cert.basis_lo[dim0], hi = cert.basis_hi[dim0];
    return lo + (static_cast<double>(k) + 0.5) * (hi - lo) /
                    static_cast<double>(resolution);
  };
  std::vector<GridPoint> grid;
  grid.reserve(static_cast<std::size_t>(resolution) * resolution);
  for (int i = 0; i < resolution; ++i) {
    x[a] = center(a, i);
    for (int j = 0; j < resolution; ++j) {
      x[b] = center(b, j);
      GridPoint p;
      p.x1 = x[a];
      p.x2 = x[b];
      p.in_safe_set = eval.safe_set().contains(x);
      p.bound = p.in_safe_set ? eval.bound(x) : 0.0;
      grid.push_back(p);
    }
  }
  return grid;
}

inline void write_grid_csv(std::ostream& os,
                           const std::vector<GridPoint>& grid) {
  os << "x1,x2,bound,in_safe_set\n";
  os.precision(12);
  for (const GridPoint& p : grid) {
    os << p.x1 << ',' << p.x2 << ',' << p.bound << ','
       << (p.in_safe_set ? 1 : 0) << '\n';
  }
}

struct ValidationCheck {
  std::string name;
  bool pass = false;
  nlohmann::json details;
};

struct ValidationReport {
  bool all_pass = false;
  std::vector<ValidationCheck> checks;

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
      arr.push_back(
          {{"name", c.name}, {"pass", c.pass}, {"details", c.details}});
    }
    return {{"all_pass", all_pass}, {"checks", arr}};
  }
};

struct ValidationOptions {
  std::size_t sweep_states = 10000;     // robust outer-probability sweep
  std::size_t sweep_draws = 1000;
  std::size_t dominance_states = 1000;  // stochastic bound-dominance check
  std::size_t dominance_draws = 1000;
  double dominance_quota = 0.95;        // share of states that must dominate
  int workers = 1;
};

// Independent empirical cross-check of a certificate against the system it
// claims to certify.  Always re-derives the sampling plan from the embedded
// parameters (flagging tampered documents); accepted robust certificates get
// a fresh outer-probability sweep, stochastic ones a bound-dominance check.
inline ValidationReport validate_certificate(const Certificate& cert,
                                             const BlackBoxSystem& sys,
                                             const ValidationOptions& opt = {},
                                             std::uint64_t seed_override = 0,
                                             bool use_override = false) {
  ValidationReport report;
  const std::uint64_t seed = use_override ? seed_override : cert.seed;

  // 1. Plan integrity: the stored sizes must equal what the planner derives
  //    from the stored parameters.
  {
    ValidationCheck c;
    c.name = "plan_rederivation";
    try {
      const SamplePlan fresh = make_plan(cert.params, cert.state_dim);
      const bool sizes_ok = fresh.n_states == cert.plan.n_states &&
                            fresh.draws_per_state == cert.plan.draws_per_state;
      const bool dims_ok = fresh.basis_terms == cert.plan.basis_terms &&
                           fresh.decision_dim == cert.plan.decision_dim;
      const bool queries_ok = cert.step_queries == fresh.total_queries();
      c.pass = sizes_ok && dims_ok && queries_ok;
      c.details = {{"derived_n_states", fresh.n_states},
                   {"derived_draws_per_state", fresh.draws_per_state},
                   {"stored_n_states", cert.plan.n_states},
                   {"stored_draws_per_state", cert.plan.draws_per_state},
                   {"stored_step_queries", cert.step_queries}};
    } catch (const std::exception& e) {
      c.pass = false;
      c.details = {{"error", e.what()}};
    }
    report.checks.push_back(std::move(c));
  }

  // 2. System identity must match the certificate.
  {
    ValidationCheck c;
    c.name = "system_identity";
    c.pass = sys.name() == cert.system_name &&
             sys.state_dim() == cert.state_dim &&
             sys.disturbance_dim() == cert.disturbance_dim;
    c.details = {{"system", sys.name()}, {"certificate", cert.system_name}};
    report.checks.push_back(std::move(c));
  }

  if (!cert.is_stochastic() && cert.accepted) {
    // Fresh states: the share whose estimated one-step containment reaches
    // the certified inner probability must reach the certified outer
    // fraction, up to three standard errors of the sweep.
    ValidationCheck c;
    c.name = "mc_outer_sweep";
    const double inner = cert.plan.guarantee.inner_probability.value_or(1.0);
    const SweepResult sw =
        mc_state_sweep(sys, opt.sweep_states, opt.sweep_draws, inner, seed,
                       opt.workers);
    const double required =
        cert.plan.guarantee.outer_fraction - 3.0 * sw.std_error;
    c.pass = sw.fraction >= required;
    c.details = sw.to_json();
    c.details["required_fraction"] = required;
    report.checks.push_back(std::move(c));
  }

  if (cert.is_stochastic() && cert.accepted) {
    // The certified state-wise bound must not exceed the Monte Carlo
    // estimate by more than 3 standard errors, for at least the quota of
    // fresh states.
    ValidationCheck c;
    c.name = "sbc_bound_dominance";
    SbcBoundEvaluator eval(cert);
    const SafeSet& safe = sys.safe_set();
    RngStream state_rng(seed, streams::kMonteCarlo);
    const std::size_t n = static_cast<std::size_t>(sys.state_dim());
    std::vector<double> states(opt.dominance_states * n);
    for (std::size_t i = 0; i < opt.dominance_states; ++i) {
      StateVector x = safe.sample_uniform(state_rng);
      std::copy(x.begin(), x.end(), states.begin() + i * n);
    }
    std::vector<std::uint8_t> ok(opt.dominance_states, 0);
    auto work = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const std::span<const double> x(states.data() + i * n, n);
        const McEstimate e =
            mc_one_step(sys, x, opt.dominance_draws,
                        detail::sub_seed(seed, i));
        ok[i] = eval.bound(x) <= e.fraction + 3.0 * e.std_error ? 1 : 0;
      }
    };
    const int nw = std::max(
        1, std::min<int>(opt.workers,
                         static_cast<int>(opt.dominance_states)));
    if (nw == 1) {
      work(0, opt.dominance_states);
    } else {
      std::vector<std::thread> pool;
      const std::size_t chunk = (opt.dominance_states + nw - 1) / nw;
      for (int w = 0; w < nw; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(opt.dominance_states, lo + chunk);
        if (lo < hi) pool.emplace_back(work, lo, hi);
      }
      for (auto& t : pool) t.join();
    }
    std::size_t dominated = 0;
    for (auto v : ok) dominated += v;
    const double share = static_cast<double>(dominated) /
                         static_cast<double>(opt.dominance_states);
    c.pass = share >= opt.dominance_quota;
    c.details = {{"dominated_share", share},
                 {"quota", opt.dominance_quota},
                 {"n_states", opt.dominance_states},
                 {"n_mc", opt.dominance_draws}};
    report.checks.push_back(std::move(c));
  }

  report.all_pass = true;
  for (const auto& c : report.checks) report.all_pass &= c.pass;
  return report;
}

}  // namespace pacsafe
