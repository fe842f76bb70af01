#pragma once

#include <cmath>
#include <functional>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pacsafe/errors.hpp"
#include "pacsafe/rng.hpp"
#include "pacsafe/types.hpp"

namespace pacsafe {

// Safe set X: axis-aligned box, closed ball, or a generic sublevel set
// {x : g(x) <= 0} carried with an explicit bounding box.  Membership is
// inclusive at the boundary for every shape.  Every set knows a bounding box;
// uniform sampling is per-coordinate affine on boxes and rejection from the
// bounding box otherwise.
class SafeSet {
 public:
  enum class Shape { kBox, kBall, kSublevel };

  static SafeSet box(StateVector lo, StateVector hi) {
    SafeSet s;
    s.shape_ = Shape::kBox;
    s.init_bbox(std::move(lo), std::move(hi));
    s.check_nonempty();
    return s;
  }

  static SafeSet ball(StateVector center, double radius_squared) {
    if (!(radius_squared > 0.0)) {
      throw ConfigError("ball radius_squared must be positive");
    }
    SafeSet s;
    s.shape_ = Shape::kBall;
    s.center_ = std::move(center);
    s.radius_squared_ = radius_squared;
    double r = std::sqrt(radius_squared);
    StateVector lo(s.center_.size()), hi(s.center_.size());
    for (std::size_t j = 0; j < s.center_.size(); ++j) {
      lo[j] = s.center_[j] - r;
      hi[j] = s.center_[j] + r;
    }
    s.init_bbox(std::move(lo), std::move(hi));
    s.check_nonempty();
    return s;
  }

  static SafeSet sublevel(std::function<double(const StateVector&)> g,
                          StateVector bbox_lo, StateVector bbox_hi) {
    if (!g) throw ConfigError("sublevel set needs a level function");
    SafeSet s;
    s.shape_ = Shape::kSublevel;
    s.level_ = std::move(g);
    s.init_bbox(std::move(bbox_lo), std::move(bbox_hi));
    s.check_nonempty();
    return s;
  }

  Shape shape() const { return shape_; }
  int dim() const { return static_cast<int>(bbox_lo_.size()); }
  const StateVector& bbox_lo() const { return bbox_lo_; }
  const StateVector& bbox_hi() const { return bbox_hi_; }

  bool contains(std::span<const double> x) const {
    require_dim(x.size(), bbox_lo_.size(), "SafeSet::contains");
    switch (shape_) {
      case Shape::kBox:
        for (std::size_t j = 0; j < x.size(); ++j) {
          if (x[j] < bbox_lo_[j] || x[j] > bbox_hi_[j]) return false;
        }
        return true;
      case Shape::kBall: {
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
          double d = x[j] - center_[j];
          s += d * d;
        }
        return s <= radius_squared_;
      }
      case Shape::kSublevel:
        return level_(StateVector(x.begin(), x.end())) <= 0.0;
    }
    return false;  // unreachable
  }

  // A point guaranteed to belong to the set (checked at construction):
  // box midpoint, ball center, or the bounding-box midpoint for sublevels.
  StateVector interior_point() const {
    if (shape_ == Shape::kBall) return center_;
    StateVector mid(bbox_lo_.size());
    for (std::size_t j = 0; j < mid.size(); ++j) {
      mid[j] = 0.5 * (bbox_lo_[j] + bbox_hi_[j]);
    }
    return mid;
  }

  // Uniform draw from the set.  Boxes sample each coordinate directly; other
  // shapes rejection-sample from the bounding box with a bounded number of
  // attempts.
  StateVector sample_uniform(RngStream& rng) const {
    StateVector x(bbox_lo_.size());
    if (shape_ == Shape::kBox) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = bbox_lo_[j] + (bbox_hi_[j] - bbox_lo_[j]) * rng.next_unit();
      }
      return x;
    }
    for (int attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = bbox_lo_[j] + (bbox_hi_[j] - bbox_lo_[j]) * rng.next_unit();
      }
      if (contains(x)) return x;
    }
    throw SamplingError(
        "rejection sampling cap exhausted drawing from the safe set (set has "
        "negligible volume inside its bounding box)");
  }

  // Ball and box sets serialize completely; sublevel sets only descriptively
  // (the level function is not serializable), and cannot be reconstructed.
  nlohmann::json to_json() const {
    nlohmann::json j;
    switch (shape_) {
      case Shape::kBox:
        j["shape"] = "box";
        j["lo"] = bbox_lo_;
        j["hi"] = bbox_hi_;
        break;
      case Shape::kBall:
        j["shape"] = "ball";
        j["center"] = center_;
        j["radius_squared"] = radius_squared_;
        break;
      case Shape::kSublevel:
        j["shape"] = "sublevel";
        j["bbox_lo"] = bbox_lo_;
        j["bbox_hi"] = bbox_hi_;
        break;
    }
    return j;
  }

  static SafeSet from_json(const nlohmann::json& j) {
    const std::string shape = j.at("shape").get<std::string>();
    if (shape == "box") {
      return box(j.at("lo").get<StateVector>(), j.at("hi").get<StateVector>());
    }
    if (shape == "ball") {
      return ball(j.at("center").get<StateVector>(),
                  j.at("radius_squared").get<double>());
    }
    throw ConfigError("safe set of shape '" + shape +
                      "' cannot be reconstructed from JSON");
  }

 private:
  SafeSet() = default;

  void init_bbox(StateVector lo, StateVector hi) {
    if (lo.empty()) throw ConfigError("safe set dimension is zero");
    require_dim(hi.size(), lo.size(), "SafeSet bounding box");
    require_finite(lo, "bounding box lo");
    require_finite(hi, "bounding box hi");
    for (std::size_t j = 0; j < lo.size(); ++j) {
      if (!(lo[j] < hi[j])) {
        throw ConfigError(
            "degenerate bounding box: lo must be strictly below hi in every "
            "coordinate");
      }
    }
    bbox_lo_ = std::move(lo);
    bbox_hi_ = std::move(hi);
  }

  void check_nonempty() const {
    if (!contains(interior_point())) {
      throw ConfigError(
          "safe set is empty at its midpoint/center; refusing a set whose "
          "reference point is not a member");
    }
  }

  Shape shape_ = Shape::kBox;
  StateVector bbox_lo_, bbox_hi_;
  StateVector center_;
  double radius_squared_ = 0.0;
  std::function<double(const StateVector&)> level_;
};

}  // namespace pacsafe
