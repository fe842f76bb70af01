#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pacsafe/rng.hpp"
#include "pacsafe/system.hpp"
#include "pacsafe/types.hpp"

namespace pacsafe {

// One-draw-per-state scenario sample: N i.i.d. triples (x_i, d_i, x_i^+) with
// the successor recorded at draw time.  Storage is flattened
// (size * dim contiguous doubles per field) to keep multi-gigabyte sets cheap.
struct PairSampleSet {
  int state_dim = 0;
  int disturbance_dim = 0;
  std::uint64_t seed = 0;
  std::size_t size = 0;
  std::vector<double> states;        // size * state_dim
  std::vector<double> disturbances;  // size * disturbance_dim
  std::vector<double> next_states;   // size * state_dim

  std::span<const double> state(std::size_t i) const {
    return {states.data() + i * state_dim, static_cast<std::size_t>(state_dim)};
  }
  std::span<const double> disturbance(std::size_t i) const {
    return {disturbances.data() + i * disturbance_dim,
            static_cast<std::size_t>(disturbance_dim)};
  }
  std::span<const double> next_state(std::size_t i) const {
    return {next_states.data() + i * state_dim,
            static_cast<std::size_t>(state_dim)};
  }
};

// Grouped sample: N i.i.d. states, each with M i.i.d. disturbance draws and
// recorded successors (N*M one-step queries).
struct GroupSampleSet {
  int state_dim = 0;
  int disturbance_dim = 0;
  std::uint64_t seed = 0;
  std::size_t num_states = 0;
  std::size_t draws_per_state = 0;
  std::vector<double> states;        // num_states * state_dim
  std::vector<double> disturbances;  // num_states * draws * disturbance_dim
  std::vector<double> next_states;   // num_states * draws * state_dim

  std::span<const double> state(std::size_t i) const {
    return {states.data() + i * state_dim, static_cast<std::size_t>(state_dim)};
  }
  std::span<const double> disturbance(std::size_t i, std::size_t j) const {
    return {disturbances.data() +
                (i * draws_per_state + j) * disturbance_dim,
            static_cast<std::size_t>(disturbance_dim)};
  }
  std::span<const double> next_state(std::size_t i, std::size_t j) const {
    return {next_states.data() + (i * draws_per_state + j) * state_dim,
            static_cast<std::size_t>(state_dim)};
  }
};

// Draws N state/disturbance pairs and records successors.  States come from
// stream 0 of `seed`, disturbance seed hints from stream 1, so the set is a
// pure function of (system, set, N, seed).  Costs exactly N one-step queries.
inline PairSampleSet draw_pair_samples(const BlackBoxSystem& sys,
                                       const SafeSet& set, std::size_t n,
                                       std::uint64_t seed) {
  const int sd = sys.state_dim();
  const int dd = sys.disturbance_dim();
  require_dim(set.dim(), sd, "draw_pair_samples set dimension");

  PairSampleSet out;
  out.state_dim = sd;
  out.disturbance_dim = dd;
  out.seed = seed;
  out.size = n;
  out.states.resize(n * sd);
  out.disturbances.resize(n * dd);
  out.next_states.resize(n * sd);

  RngStream state_rng(seed, streams::kStateDraws);
  RngStream hint_rng(seed, streams::kDisturbanceDraws);
  for (std::size_t i = 0; i < n; ++i) {
    StateVector x = set.sample_uniform(state_rng);
    DisturbanceVector d = sys.sample_disturbance(hint_rng.next_u64());
    require_dim(d.size(), dd, "sampled disturbance");
    require_finite(d, "sampled disturbance");
    StateVector xn = sys.step(x, d);
    require_dim(xn.size(), sd, "next state");
    require_finite(xn, "next state");
    std::copy(x.begin(), x.end(), out.states.begin() + i * sd);
    std::copy(d.begin(), d.end(), out.disturbances.begin() + i * dd);
    std::copy(xn.begin(), xn.end(), out.next_states.begin() + i * sd);
  }
  return out;
}

// Draws N states with M disturbance draws each (N*M one-step queries), same
// stream layout as draw_pair_samples.
inline GroupSampleSet draw_group_samples(const BlackBoxSystem& sys,
                                         const SafeSet& set, std::size_t n,
                                         std::size_t m, std::uint64_t seed) {
  const int sd = sys.state_dim();
  const int dd = sys.disturbance_dim();
  require_dim(set.dim(), sd, "draw_group_samples set dimension");

  GroupSampleSet out;
  out.state_dim = sd;
  out.disturbance_dim = dd;
  out.seed = seed;
  out.num_states = n;
  out.draws_per_state = m;
  out.states.resize(n * sd);
  out.disturbances.resize(n * m * dd);
  out.next_states.resize(n * m * sd);

  RngStream state_rng(seed, streams::kStateDraws);
  RngStream hint_rng(seed, streams::kDisturbanceDraws);
  for (std::size_t i = 0; i < n; ++i) {
    StateVector x = set.sample_uniform(state_rng);
    std::copy(x.begin(), x.end(), out.states.begin() + i * sd);
    for (std::size_t j = 0; j < m; ++j) {
      DisturbanceVector d = sys.sample_disturbance(hint_rng.next_u64());
      require_dim(d.size(), dd, "sampled disturbance");
      require_finite(d, "sampled disturbance");
      StateVector xn = sys.step(x, d);
      require_dim(xn.size(), sd, "next state");
      require_finite(xn, "next state");
      std::copy(d.begin(), d.end(),
                out.disturbances.begin() + (i * m + j) * dd);
      std::copy(xn.begin(), xn.end(),
                out.next_states.begin() + (i * m + j) * sd);
    }
  }
  return out;
}

// Draws n states uniformly from the set (no oracle queries).  Used for the
// sbc3 objective anchors; `stream` defaults to the anchor stream.
inline std::vector<double> draw_states(const SafeSet& set, std::size_t n,
                                       std::uint64_t seed,
                                       std::uint64_t stream =
                                           streams::kAnchorStates) {
  RngStream rng(seed, stream);
  const std::size_t sd = set.dim();
  std::vector<double> flat(n * sd);
  for (std::size_t i = 0; i < n; ++i) {
    StateVector x = set.sample_uniform(rng);
    std::copy(x.begin(), x.end(), flat.begin() + i * sd);
  }
  return flat;
}

}  // namespace pacsafe
