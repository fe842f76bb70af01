#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pacsafe/errors.hpp"
#include "pacsafe/rng.hpp"
#include "pacsafe/types.hpp"

namespace pacsafe {

namespace detail {

// Marsaglia & Tsang (2000) squeeze-rejection Gamma(shape, 1) sampler for
// shape >= 1; the shape < 1 case uses the standard boost
// Gamma(a) = Gamma(a+1) * U^(1/a).
inline double sample_gamma(RngStream& rng, double shape) {
  if (shape < 1.0) {
    double u = 1.0 - rng.next_unit();  // (0, 1]
    return sample_gamma(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = rng.next_normal();
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = rng.next_unit();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

}  // namespace detail

// Product distribution over independent coordinates, one of three families.
// All coordinates of one distribution share the family; each has its own
// parameters.
class DisturbanceDistribution {
 public:
  enum class Kind { kUniform, kTruncatedNormal, kBeta };

  // U[lo_j, hi_j] per coordinate.
  static DisturbanceDistribution uniform(std::vector<double> lo,
                                         std::vector<double> hi) {
    require_dim(hi.size(), lo.size(), "uniform hi");
    for (std::size_t j = 0; j < lo.size(); ++j) {
      if (!(lo[j] < hi[j])) {
        throw std::invalid_argument(
            "uniform distribution requires lo < hi in every coordinate");
      }
    }
    DisturbanceDistribution d;
    d.kind_ = Kind::kUniform;
    d.dim_ = static_cast<int>(lo.size());
    d.a_ = std::move(lo);
    d.b_ = std::move(hi);
    return d;
  }

  // Normal(mean_j, sd_j) conditioned on [lo_j, hi_j], drawn by rejection
  // (bounded attempts).
  static DisturbanceDistribution truncated_normal(std::vector<double> mean,
                                                  std::vector<double> sd,
                                                  std::vector<double> lo,
                                                  std::vector<double> hi) {
    require_dim(sd.size(), mean.size(), "truncated normal sd");
    require_dim(lo.size(), mean.size(), "truncated normal lo");
    require_dim(hi.size(), mean.size(), "truncated normal hi");
    for (std::size_t j = 0; j < mean.size(); ++j) {
      if (!(sd[j] > 0.0)) {
        throw std::invalid_argument("truncated normal requires sd > 0");
      }
      if (!(lo[j] < hi[j])) {
        throw std::invalid_argument("truncated normal requires lo < hi");
      }
    }
    DisturbanceDistribution d;
    d.kind_ = Kind::kTruncatedNormal;
    d.dim_ = static_cast<int>(mean.size());
    d.mean_ = std::move(mean);
    d.sd_ = std::move(sd);
    d.a_ = std::move(lo);
    d.b_ = std::move(hi);
    return d;
  }

  // Beta(alpha_j, beta_j) on (0, 1) per coordinate.
  static DisturbanceDistribution beta(std::vector<double> alpha,
                                      std::vector<double> beta_shape) {
    require_dim(beta_shape.size(), alpha.size(), "beta second shape");
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      if (!(alpha[j] > 0.0) || !(beta_shape[j] > 0.0)) {
        throw std::invalid_argument("beta distribution requires shapes > 0");
      }
    }
    DisturbanceDistribution d;
    d.kind_ = Kind::kBeta;
    d.dim_ = static_cast<int>(alpha.size());
    d.a_ = std::move(alpha);
    d.b_ = std::move(beta_shape);
    return d;
  }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  DisturbanceVector sample(RngStream& rng) const {
    DisturbanceVector d(static_cast<std::size_t>(dim_));
    sample_into(rng, d);
    return d;
  }

  void sample_into(RngStream& rng, std::span<double> out) const {
    require_dim(out.size(), static_cast<std::size_t>(dim_), "sample_into out");
    switch (kind_) {
      case Kind::kUniform:
        for (int j = 0; j < dim_; ++j) {
          out[j] = a_[j] + (b_[j] - a_[j]) * rng.next_unit();
        }
        break;
      case Kind::kTruncatedNormal:
        for (int j = 0; j < dim_; ++j) {
          int attempts = 0;
          double x;
          do {
            if (++attempts > kMaxRejectionAttempts) {
              throw SamplingError(
                  "truncated normal rejection cap exhausted (window too far "
                  "in the tail)");
            }
            x = mean_[j] + sd_[j] * rng.next_normal();
          } while (x < a_[j] || x > b_[j]);
          out[j] = x;
        }
        break;
      case Kind::kBeta:
        for (int j = 0; j < dim_; ++j) {
          double g1 = detail::sample_gamma(rng, a_[j]);
          double g2 = detail::sample_gamma(rng, b_[j]);
          out[j] = g1 / (g1 + g2);
        }
        break;
    }
  }

 private:
  DisturbanceDistribution() = default;

  Kind kind_ = Kind::kUniform;
  int dim_ = 0;
  // Family-dependent parameter slots: uniform uses (a, b) = (lo, hi);
  // truncated normal uses (mean, sd, a=lo, b=hi); beta uses (a, b) = shapes.
  std::vector<double> a_, b_, mean_, sd_;
};

}  // namespace pacsafe
