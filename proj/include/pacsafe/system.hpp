#pragma once

#include <atomic>
#include <cstdint>
#include <string>

#include "pacsafe/safe_set.hpp"
#include "pacsafe/types.hpp"

namespace pacsafe {

// The only view the certification pipelines have of a system: dimensions, the
// safe set, a one-step oracle, and a disturbance draw keyed by a 64-bit seed
// hint.  The hint convention makes draws replayable across process
// boundaries: an implementation must derive its randomness exclusively from
// the hint (the built-in systems use RngStream(hint, 0)), so an external
// plugin given the same hint produces the same disturbance.
class BlackBoxSystem {
 public:
  virtual ~BlackBoxSystem() = default;

  virtual const std::string& name() const = 0;
  virtual int state_dim() const = 0;
  virtual int disturbance_dim() const = 0;
  virtual const SafeSet& safe_set() const = 0;

  // One transition x -> f(x, d).  Must be deterministic in (x, d).
  virtual StateVector step(const StateVector& x,
                           const DisturbanceVector& d) const = 0;

  virtual DisturbanceVector sample_disturbance(std::uint64_t seed_hint)
      const = 0;
};

// Decorator counting oracle queries; the pipelines wrap systems with it so a
// certificate records exactly how many one-step queries were spent.
class CountingSystem final : public BlackBoxSystem {
 public:
  explicit CountingSystem(const BlackBoxSystem& inner) : inner_(inner) {}

  const std::string& name() const override { return inner_.name(); }
  int state_dim() const override { return inner_.state_dim(); }
  int disturbance_dim() const override { return inner_.disturbance_dim(); }
  const SafeSet& safe_set() const override { return inner_.safe_set(); }

  StateVector step(const StateVector& x,
                   const DisturbanceVector& d) const override {
    step_calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_.step(x, d);
  }

  DisturbanceVector sample_disturbance(std::uint64_t hint) const override {
    disturbance_calls_.fetch_add(1, std::memory_order_relaxed);
    return inner_.sample_disturbance(hint);
  }

  std::uint64_t step_calls() const {
    return step_calls_.load(std::memory_order_relaxed);
  }
  std::uint64_t disturbance_calls() const {
    return disturbance_calls_.load(std::memory_order_relaxed);
  }

 private:
  const BlackBoxSystem& inner_;
  mutable std::atomic<std::uint64_t> step_calls_{0};
  mutable std::atomic<std::uint64_t> disturbance_calls_{0};
};

}  // namespace pacsafe
