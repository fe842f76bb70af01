#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pacsafe/errors.hpp"
#include "pacsafe/safe_set.hpp"
#include "pacsafe/types.hpp"

namespace pacsafe {

enum class BasisKind { kHandelman, kBernstein };

inline const char* basis_kind_name(BasisKind k) {
  return k == BasisKind::kHandelman ? "handelman" : "bernstein";
}

inline BasisKind basis_kind_from_name(const std::string& s) {
  if (s == "handelman") return BasisKind::kHandelman;
  if (s == "bernstein") return BasisKind::kBernstein;
  throw ConfigError("unknown basis kind '" + s + "'");
}

// Tensor-product polynomial basis over a box [lo, hi], degree kappa per
// coordinate, m = (kappa+1)^n terms.  Terms are ordered lexicographically in
// the multi-index (i_1, ..., i_n), i_1 most significant: term t has
// i_j = digit j of t in base kappa+1.
//
//   handelman:  term_i(x) = prod_j (x_j - lo_j)^(i_j) * (hi_j - x_j)^(kappa - i_j)
//   bernstein:  term_i(x) = prod_j C(kappa, i_j) psi_j^(i_j) (1 - psi_j)^(kappa - i_j),
//               psi_j = (x_j - lo_j) / (hi_j - lo_j), clamped to [0, 1]
//
// The Bernstein family is a partition of unity on the box; Handelman terms
// are nonnegative on the box and vanish wherever a factor hits its bound.
// Binomial coefficients are exact 64-bit integers, which caps kappa at 60.
class MultiIndexBasis {
 public:
  MultiIndexBasis(BasisKind kind, int kappa, StateVector lo, StateVector hi)
      : kind_(kind), kappa_(kappa), lo_(std::move(lo)), hi_(std::move(hi)) {
    if (kappa_ < 0) throw ConfigError("basis degree kappa must be >= 0");
    if (kappa_ > 60) {
      throw ConfigError(
          "kappa above 60 would overflow exact integer binomials; rejected");
    }
    if (lo_.empty()) throw ConfigError("basis box dimension is zero");
    require_dim(hi_.size(), lo_.size(), "basis box hi");
    for (std::size_t j = 0; j < lo_.size(); ++j) {
      if (!(lo_[j] < hi_[j])) {
        throw ConfigError(
            "degenerate basis box: lo must be strictly below hi in every "
            "coordinate");
      }
    }
    std::size_t m = 1;
    for (std::size_t j = 0; j < lo_.size(); ++j) {
      if (m > kMaxTerms / static_cast<std::size_t>(kappa_ + 1)) {
        throw ConfigError("basis would exceed " + std::to_string(kMaxTerms) +
                          " terms; reduce kappa or the dimension");
      }
      m *= static_cast<std::size_t>(kappa_ + 1);
    }
    terms_ = m;
    if (kind_ == BasisKind::kBernstein) {
      binom_.resize(kappa_ + 1);
      binom_[0] = 1;
      for (int e = 1; e <= kappa_; ++e) {
        // Pascal row kappa, exact in unsigned 64-bit for kappa <= 60.
        binom_[e] = binom_[e - 1] * static_cast<std::uint64_t>(kappa_ - e + 1) /
                    static_cast<std::uint64_t>(e);
      }
    }
  }

  BasisKind kind() const { return kind_; }
  int kappa() const { return kappa_; }
  int dim() const { return static_cast<int>(lo_.size()); }
  std::size_t terms() const { return terms_; }
  const StateVector& box_lo() const { return lo_; }
  const StateVector& box_hi() const { return hi_; }

  // Multi-index of term t, most significant digit first.
  std::vector<int> multi_index(std::size_t t) const {
    std::vector<int> idx(lo_.size());
    for (std::size_t j = lo_.size(); j-- > 0;) {
      idx[j] = static_cast<int>(t % (kappa_ + 1));
      t /= (kappa_ + 1);
    }
    return idx;
  }

  // Evaluates all m terms at x into out (out.size() == terms()).
  void features(std::span<const double> x, std::span<double> out) const {
    require_dim(x.size(), lo_.size(), "features state");
    require_dim(out.size(), terms_, "features output");
    const int n = dim();
    const int k1 = kappa_ + 1;

    // Per-dimension weight tables w[j][e], e = 0..kappa.
    thread_local std::vector<double> wbuf;
    wbuf.assign(static_cast<std::size_t>(n) * k1, 0.0);
    for (int j = 0; j < n; ++j) {
      double* w = wbuf.data() + static_cast<std::size_t>(j) * k1;
      if (kind_ == BasisKind::kHandelman) {
        // w[e] = (x_j - lo_j)^e * (hi_j - x_j)^(kappa - e)
        const double p = x[j] - lo_[j];
        const double q = hi_[j] - x[j];
        double pe = 1.0;
        std::vector<double>& qe = scratch_powers(k1);
        qe[0] = 1.0;
        for (int e = 1; e < k1; ++e) qe[e] = qe[e - 1] * q;
        for (int e = 0; e < k1; ++e) {
          w[e] = pe * qe[kappa_ - e];
          pe *= p;
        }
      } else {
        // w[e] = C(kappa, e) psi^e (1-psi)^(kappa-e), psi clamped to [0,1].
        double psi = (x[j] - lo_[j]) / (hi_[j] - lo_[j]);
        psi = std::clamp(psi, 0.0, 1.0);
        const double omp = 1.0 - psi;
        double pe = 1.0;
        std::vector<double>& qe = scratch_powers(k1);
        qe[0] = 1.0;
        for (int e = 1; e < k1; ++e) qe[e] = qe[e - 1] * omp;
        for (int e = 0; e < k1; ++e) {
          w[e] = static_cast<double>(binom_[e]) * pe * qe[kappa_ - e];
          pe *= psi;
        }
      }
    }

    // Tensor expansion, first dimension most significant.
    out[0] = 1.0;
    std::size_t filled = 1;
    for (int j = 0; j < n; ++j) {
      const double* w = wbuf.data() + static_cast<std::size_t>(j) * k1;
      for (std::size_t t = filled; t-- > 0;) {
        const double base = out[t];
        for (int e = k1 - 1; e >= 0; --e) {
          out[t * k1 + e] = base * w[e];
        }
      }
      filled *= k1;
    }
  }

  std::vector<double> features(std::span<const double> x) const {
    std::vector<double> out(terms_);
    features(x, out);
    return out;
  }

 private:
  static constexpr std::size_t kMaxTerms = 10'000'000;

  static std::vector<double>& scratch_powers(int size) {
    thread_local std::vector<double> buf;
    buf.resize(size);
    return buf;
  }

  BasisKind kind_;
  int kappa_;
  StateVector lo_, hi_;
  std::size_t terms_ = 0;
  std::vector<std::uint64_t> binom_;
};

// Gated barrier template h(a, x): the linear combination of basis terms on
// the safe set, a fixed constant off it.
class BarrierTemplate {
 public:
  BarrierTemplate(MultiIndexBasis basis, SafeSet set, double outside_value)
      : basis_(std::move(basis)),
        set_(std::move(set)),
        outside_value_(outside_value) {
    require_dim(set_.dim(), basis_.dim(), "barrier template safe set");
  }

  const MultiIndexBasis& basis() const { return basis_; }
  const SafeSet& set() const { return set_; }
  double outside_value() const { return outside_value_; }

  double evaluate(std::span<const double> a, std::span<const double> x) const {
    require_dim(a.size(), basis_.terms(), "barrier coefficients");
    if (!set_.contains(x)) return outside_value_;
    thread_local std::vector<double> feat;
    feat.resize(basis_.terms());
    basis_.features(x, feat);
    return dot(a, feat);
  }

 private:
  MultiIndexBasis basis_;
  SafeSet set_;
  double outside_value_;
};

}  // namespace pacsafe
