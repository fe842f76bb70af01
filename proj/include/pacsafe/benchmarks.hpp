#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pacsafe/distributions.hpp"
#include "pacsafe/safe_set.hpp"
#include "pacsafe/system.hpp"

namespace pacsafe {

// A built-in benchmark: explicit step map, disturbance distribution, safe
// set.  Step maps are pure functions; disturbance draws derive entirely from
// the caller's seed hint, matching the replay convention of BlackBoxSystem.
class BenchmarkSystem final : public BlackBoxSystem {
 public:
  using StepFn =
      std::function<StateVector(const StateVector&, const DisturbanceVector&)>;

  BenchmarkSystem(std::string name, SafeSet set, DisturbanceDistribution dist,
                  StepFn step)
      : name_(std::move(name)),
        set_(std::move(set)),
        dist_(std::move(dist)),
        step_(std::move(step)) {}

  const std::string& name() const override { return name_; }
  int state_dim() const override { return set_.dim(); }
  int disturbance_dim() const override { return dist_.dim(); }
  const SafeSet& safe_set() const override { return set_; }

  StateVector step(const StateVector& x,
                   const DisturbanceVector& d) const override {
    require_dim(x.size(), set_.dim(), "step state");
    require_dim(d.size(), dist_.dim(), "step disturbance");
    return step_(x, d);
  }

  DisturbanceVector sample_disturbance(std::uint64_t hint) const override {
    RngStream rng(hint, 0);
    return dist_.sample(rng);
  }

 private:
  std::string name_;
  SafeSet set_;
  DisturbanceDistribution dist_;
  StepFn step_;
};

namespace detail {

inline std::shared_ptr<const BlackBoxSystem> make_vinc() {
  // 2-D oscillator with uncertain damping; Euler step 0.01.
  auto step = [](const StateVector& x, const DisturbanceVector& d) {
    return StateVector{
        x[0] + 0.01 * (x[1] - x[0] * (d[0] + 0.5)),
        x[1] + 0.01 * (-(1.0 - x[0] * x[0]) * x[0] - x[1]),
    };
  };
  return std::make_shared<BenchmarkSystem>(
      "vinc", SafeSet::ball({0.0, 0.0}, 0.64),
      DisturbanceDistribution::truncated_normal({0.0}, {0.1}, {-0.7}, {0.7}),
      step);
}

inline std::shared_ptr<const BlackBoxSystem> make_arch() {
  // 2-D cubic vector field with additive noise on both coordinates.
  auto step = [](const StateVector& x, const DisturbanceVector& d) {
    const double a = x[0], b = x[1];
    return StateVector{
        a + 0.01 * (a - a * a * a + b - a * b * b + d[0]),
        b + 0.01 * (-a + b - a * a * b - b * b * b + d[1]),
    };
  };
  return std::make_shared<BenchmarkSystem>(
      "arch", SafeSet::box({-3.0, -3.0}, {3.0, 3.0}),
      DisturbanceDistribution::uniform({-0.5, -0.5}, {0.5, 0.5}), step);
}

inline std::shared_ptr<const BlackBoxSystem> make_stable3() {
  // 3-D stable system with multiplicative disturbances on each coordinate.
  auto step = [](const StateVector& x, const DisturbanceVector& d) {
    return StateVector{
        x[0] + 0.01 * (-x[0] + x[1] - x[2] - x[0] * d[0]),
        x[1] + 0.01 * (-x[0] * (x[2] + 1.0) - x[1] - x[1] * d[1]),
        x[2] + 0.01 * (0.76524 * x[0] - 4.7037 * x[2] - x[2] * d[2]),
    };
  };
  return std::make_shared<BenchmarkSystem>(
      "stable3", SafeSet::box({-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}),
      DisturbanceDistribution::uniform({1.0, 1.0, 2.0}, {2.0, 2.0, 3.0}),
      step);
}

inline std::shared_ptr<const BlackBoxSystem> make_lin4() {
  // 4-D linear cascade driven by a Beta-distributed input.
  auto step = [](const StateVector& x, const DisturbanceVector& d) {
    return StateVector{
        x[0] + 0.01 * (-x[0] + d[0]),
        x[1] + 0.01 * (x[0] - 2.0 * x[1]),
        x[2] + 0.01 * (x[0] - 4.0 * x[2]),
        x[3] + 0.01 * (x[0] - 3.0 * x[3]),
    };
  };
  return std::make_shared<BenchmarkSystem>(
      "lin4", SafeSet::ball({0.0, 0.0, 0.0, 0.0}, 1.0),
      DisturbanceDistribution::beta({10.0}, {10.0}), step);
}

inline std::shared_ptr<const BlackBoxSystem> make_poly6() {
  // 6-D polynomial system; the disturbance scales the last coordinate's
  // damping.
  auto step = [](const StateVector& x, const DisturbanceVector& d) {
    const double ts = 0.01;
    const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3], x5 = x[4],
                 x6 = x[5];
    return StateVector{
        x1 + ts * (x2 * x4 - x1 * x1 * x1),
        x2 + ts * (-3.0 * x1 * x4 - x2 * x2 * x2),
        x3 + ts * (-x3 - 3.0 * x1 * x4 * x4 * x4),
        x4 + ts * (-x4 + x1 * x3),
        x5 + ts * (-x5 + x6 * x6 * x6),
        x6 + ts * (-x5 - x6 + x3 * x3 * x3 * x3 - x6 * d[0]),
    };
  };
  return std::make_shared<BenchmarkSystem>(
      "poly6", SafeSet::ball(StateVector(6, 0.0), 1.0),
      DisturbanceDistribution::uniform({0.5}, {1.0}), step);
}

inline std::shared_ptr<const BlackBoxSystem> make_lotka() {
  // Predator-prey interaction with an uncertain predator growth rate.
  // This map is the plain vector field (no Euler scaling).
  auto step = [](const StateVector& x, const DisturbanceVector& d) {
    const double s = -0.5 + d[0];
    return StateVector{
        0.5 * x[0] - x[1] * x[0],
        s * x[1] + x[1] * x[0],
    };
  };
  return std::make_shared<BenchmarkSystem>(
      "lotka", SafeSet::ball({0.0, 0.0}, 1.0),
      DisturbanceDistribution::uniform({-1.0}, {1.0}), step);
}

inline std::shared_ptr<const BlackBoxSystem> make_pendulum() {
  // Damped pendulum with uncertain length; Euler step 0.1.
  auto step = [](const StateVector& x, const DisturbanceVector& d) {
    return StateVector{
        x[0] + 0.1 * x[1],
        x[1] + 0.1 * (-2.0 * x[1] / d[0] +
                      0.81 * std::sin(x[0]) * std::cos(x[0]) -
                      std::sin(x[0])),
    };
  };
  return std::make_shared<BenchmarkSystem>(
      "pendulum", SafeSet::box({-1.0, -1.0}, {1.0, 1.0}),
      DisturbanceDistribution::uniform({0.9}, {1.1}), step);
}

inline std::shared_ptr<const BlackBoxSystem> make_sank4() {
  // 4-D polynomial system with an additive disturbance on the first
  // coordinate.
  auto step = [](const StateVector& x, const DisturbanceVector& d) {
    const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    return StateVector{
        x1 + 0.01 * (-x1 + x2 * x2 * x2 - 3.0 * x3 * x4 + d[0]),
        x2 + 0.01 * (-x1 - x2 * x2 * x2),
        x3 + 0.01 * (x1 * x4 - x3),
        x4 + 0.01 * (x1 * x3 - x4 * x4 * x4),
    };
  };
  return std::make_shared<BenchmarkSystem>(
      "sank4", SafeSet::ball(StateVector(4, 0.0), 1.0),
      DisturbanceDistribution::uniform({-1.0}, {1.0}), step);
}

inline std::shared_ptr<const BlackBoxSystem> make_lorenz7() {
  // Cyclic 7-D advection model with per-coordinate additive noise.
  auto step = [](const StateVector& x, const DisturbanceVector& d) {
    StateVector out(7);
    for (int i = 0; i < 7; ++i) {
      const double xp1 = x[(i + 1) % 7];
      const double xm1 = x[(i + 6) % 7];
      const double xm2 = x[(i + 5) % 7];
      out[i] = x[i] + 0.01 * ((xp1 - xm2) * xm1 - x[i] + d[i]);
    }
    return out;
  };
  return std::make_shared<BenchmarkSystem>(
      "lorenz7", SafeSet::box(StateVector(7, -1.0), StateVector(7, 1.0)),
      DisturbanceDistribution::uniform(StateVector(7, -1.0),
                                       StateVector(7, 1.0)),
      step);
}

}  // namespace detail

inline const std::vector<std::string>& builtin_system_names() {
  static const std::vector<std::string> names = {
      "vinc", "arch",  "stable3",  "lin4",  "poly6",
      "lotka", "pendulum", "sank4", "lorenz7"};
  return names;
}

inline std::shared_ptr<const BlackBoxSystem> make_builtin_system(
    const std::string& name) {
  if (name == "vinc") return detail::make_vinc();
  if (name == "arch") return detail::make_arch();
  if (name == "stable3") return detail::make_stable3();
  if (name == "lin4") return detail::make_lin4();
  if (name == "poly6") return detail::make_poly6();
  if (name == "lotka") return detail::make_lotka();
  if (name == "pendulum") return detail::make_pendulum();
  if (name == "sank4") return detail::make_sank4();
  if (name == "lorenz7") return detail::make_lorenz7();
  std::string known;
  for (const auto& n : builtin_system_names()) {
    known += known.empty() ? n : (", " + n);
  }
  throw ConfigError("unknown system '" + name + "' (built-ins: " + known + ")");
}

}  // namespace pacsafe
