#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "pacsafe/errors.hpp"
#include "pacsafe/log.hpp"
#include "pacsafe/types.hpp"

namespace pacsafe {

// Optional warm start: nonbasic values for the structural variables (each is
// snapped to its nearest bound) plus (column, row) pairs naming structural
// variables that start basic, paired with rows whose slack leaves the basis.
struct LpStart {
  std::vector<double> values;
  std::vector<std::pair<int, int>> basic;
};

// min c.z  subject to  rows.z <= rhs,  lower <= z <= upper.
// Rows are stored dense row-major; `provenance` optionally tags each row with
// the index of the sample that generated it (-1 for synthetic rows).
struct LpModel {
  std::vector<double> objective;          // nv
  std::vector<double> rows;               // nr * nv, row-major
  std::vector<double> rhs;                // nr
  std::vector<double> lower, upper;       // nv
  std::vector<std::int32_t> provenance;   // nr or empty
  std::optional<LpStart> start;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rhs.size(); }

  // Plain-text dump for offline inspection; round-trip precision.
  void dump(std::ostream& os) const {
    const std::size_t nv = num_vars(), nr = num_rows();
    os.precision(17);
    os << "lp/1 vars " << nv << " rows " << nr << "\n";
    os << "min";
    for (double c : objective) os << ' ' << c;
    os << "\nbounds\n";
    for (std::size_t j = 0; j < nv; ++j) {
      os << lower[j] << ' ' << upper[j] << "\n";
    }
    os << "rows\n";
    for (std::size_t i = 0; i < nr; ++i) {
      const double* r = rows.data() + i * nv;
      for (std::size_t j = 0; j < nv; ++j) os << r[j] << ' ';
      os << "<= " << rhs[i];
      if (i < provenance.size()) os << "  # sample " << provenance[i];
      os << "\n";
    }
  }
};

enum class LpStatus { kOptimal, kInfeasible, kBoundHit };

inline const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kBoundHit: return "bound_hit";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  std::vector<double> z;
  double objective = 0.0;
  std::size_t iterations = 0;
  std::vector<std::int32_t> active_rows;  // rows tight at the solution
};

namespace detail {

// Dense LU with partial pivoting, sized for working bases of at most a few
// hundred columns.  Solves both A x = b and A^T x = b from one factorization.
class DenseLu {
 public:
  bool factor(const std::vector<double>& m, int n) {
    n_ = n;
    a_ = m;
    piv_.resize(n);
    for (int j = 0; j < n; ++j) {
      int p = j;
      double best = std::abs(a_[idx(j, j)]);
      for (int i = j + 1; i < n; ++i) {
        double v = std::abs(a_[idx(i, j)]);
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (!(best > 1e-12)) return false;
      piv_[j] = p;
      if (p != j) {
        for (int c = 0; c < n; ++c) std::swap(a_[idx(j, c)], a_[idx(p, c)]);
      }
      const double d = a_[idx(j, j)];
      for (int i = j + 1; i < n; ++i) {
        const double l = a_[idx(i, j)] / d;
        a_[idx(i, j)] = l;
        if (l != 0.0) {
          for (int c = j + 1; c < n; ++c) a_[idx(i, c)] -= l * a_[idx(j, c)];
        }
      }
    }
    return true;
  }

  // In-place solve of A x = b.
  void solve(std::span<double> b) const {
    for (int j = 0; j < n_; ++j) {
      if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
    }
    for (int i = 1; i < n_; ++i) {
      double s = b[i];
      for (int j = 0; j < i; ++j) s -= a_[idx(i, j)] * b[j];
      b[i] = s;
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double s = b[i];
      for (int j = i + 1; j < n_; ++j) s -= a_[idx(i, j)] * b[j];
      b[i] = s / a_[idx(i, i)];
    }
  }

  // In-place solve of A^T x = b (PA = LU gives A^T = U^T L^T P).
  void solve_transposed(std::span<double> b) const {
    for (int i = 0; i < n_; ++i) {
      double s = b[i];
      for (int j = 0; j < i; ++j) s -= a_[idx(j, i)] * b[j];
      b[i] = s / a_[idx(i, i)];
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double s = b[i];
      for (int j = i + 1; j < n_; ++j) s -= a_[idx(j, i)] * b[j];
      b[i] = s;
    }
    for (int j = n_ - 1; j >= 0; --j) {
      if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
    }
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }
  int n_ = 0;
  std::vector<double> a_;
  std::vector<int> piv_;
};

// Bounded-variable primal simplex in revised form.
//
// The tableau basis always consists of k structural columns plus (nr - k)
// slack columns, so all linear algebra reduces to a k x k "working" matrix
// W = A[R, T], where T lists the basic structural columns and R the rows
// whose slack is nonbasic (|R| = |T| = k, and k never exceeds the structural
// variable count).  W is refactorized every iteration; k is at most a few
// hundred for the scenario programs, so this is cheap and numerically fresh.
//
// Infeasibility is handled by the composite (self-switching) phase 1: while
// any basic variable sits outside its bounds, pricing uses the signed
// violation costs; once all basics are within bounds the true objective takes
// over.  Dantzig pricing with a Bland fallback after a degeneracy streak.
class BoundedSimplex {
 public:
  BoundedSimplex(const LpModel& model, std::span<const double> lower,
                 std::span<const double> upper, std::span<const double> cost,
                 std::span<const double> extra_rows,
                 std::span<const double> extra_rhs)
      : model_(model),
        nv_(model.num_vars()),
        nr_(model.num_rows() + extra_rhs.size()),
        lower_(lower.begin(), lower.end()),
        upper_(upper.begin(), upper.end()),
        cost_(cost.begin(), cost.end()),
        extra_rows_(extra_rows),
        extra_rhs_(extra_rhs) {
    for (std::size_t j = 0; j < nv_; ++j) {
      if (std::isinf(lower_[j]) && std::isinf(upper_[j])) {
        throw SolverError("free variables are not supported");
      }
      if (!(lower_[j] <= upper_[j])) {
        throw SolverError("variable bounds cross (lower > upper)");
      }
    }
  }

  struct Result {
    bool feasible = false;
    std::vector<double> z;
    double objective = 0.0;
    std::size_t iterations = 0;
    bool alternate_optima = false;
  };

  Result run(const std::optional<LpStart>& start) {
    init(start);
    Result res;
    const std::size_t cap = 20000 + 50 * (nr_ + nv_);
    bool just_refreshed = true;  // init computed values from scratch
    std::size_t iter = 0;
    for (;; ++iter) {
      if (iter >= cap) {
        throw SolverError("simplex iteration cap exceeded");
      }
      if (!factor_basis()) {
        // Ill-conditioned bases can defeat the LU tolerance (e.g. high-degree
        // polynomial features that are numerically zero over much of the
        // box).  Restart once from scratch under Bland's rule, which picks
        // different pivot sequences; give up only if that fails too.
        if (++singular_restarts_ <= 2) {
          log_warn("simplex: working basis became singular; cold restart");
          init(std::nullopt);
          bland_ = true;
          just_refreshed = true;
          continue;
        }
        throw SolverError("simplex basis became singular");
      }
      if (iter > 0 && iter % 256 == 0 && !just_refreshed) {
        refresh_values();
        just_refreshed = true;
      }

      scan_infeasible();
      const bool phase1 = !infeasible_.empty();
      compute_duals(phase1);
      price(phase1);
      const int e = select_entering(phase1);
      if (e < 0) {
        if (!just_refreshed) {
          // Conclude only from freshly recomputed values.
          refresh_values();
          just_refreshed = true;
          continue;
        }
        res.feasible = !phase1;
        res.iterations = iter;
        if (res.feasible) extract(res);
        return res;
      }

      const double t = pivot(e, phase1);
      just_refreshed = false;
      if (t <= 1e-12) {
        if (++degenerate_streak_ >= 100 && !bland_) {
          bland_ = true;
          log_debug("simplex: switching to Bland's rule after degeneracy");
        }
      } else {
        degenerate_streak_ = 0;
      }
    }
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  static constexpr double kTolFeas = 1e-9;
  static constexpr double kTolDual = 1e-9;
  static constexpr double kTolPivot = 1e-9;
  enum : std::uint8_t { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

  const double* row(std::size_t i) const {
    const std::size_t base_rows = model_.num_rows();
    if (i < base_rows) return model_.rows.data() + i * nv_;
    return extra_rows_.data() + (i - base_rows) * nv_;
  }
  double rhs(std::size_t i) const {
    const std::size_t base_rows = model_.num_rows();
    return i < base_rows ? model_.rhs[i] : extra_rhs_[i - base_rows];
  }
  double var_lower(std::size_t v) const {
    return v < nv_ ? lower_[v] : 0.0;
  }
  double var_upper(std::size_t v) const { return v < nv_ ? upper_[v] : kInf; }

  void init(const std::optional<LpStart>& start) {
    status_.assign(nv_ + nr_, kAtLower);
    value_.assign(nv_ + nr_, 0.0);
    slack_basic_.assign(nr_, 1);
    Tcols_.clear();
    Rrows_.clear();
    y_.assign(nr_, 0.0);
    y_touched_.clear();
    d_.assign(nv_, 0.0);
    ws_.assign(nr_, 0.0);
    bland_ = false;
    degenerate_streak_ = 0;

    // Nonbasic structural variables sit at a finite bound.
    for (std::size_t j = 0; j < nv_; ++j) {
      status_[j] = std::isinf(lower_[j]) ? kAtUpper : kAtLower;
      value_[j] = status_[j] == kAtLower ? lower_[j] : upper_[j];
    }
    for (std::size_t i = 0; i < nr_; ++i) status_[nv_ + i] = kBasic;

    if (start.has_value() && start_is_sane(*start)) {
      for (std::size_t j = 0; j < nv_ && j < start->values.size(); ++j) {
        const double v =
            std::clamp(start->values[j], var_lower(j), var_upper(j));
        // Nonbasic variables snap to the nearest finite bound.
        if (std::isinf(upper_[j]) ||
            std::abs(v - lower_[j]) <= std::abs(v - upper_[j])) {
          status_[j] = kAtLower;
          value_[j] = lower_[j];
        } else {
          status_[j] = kAtUpper;
          value_[j] = upper_[j];
        }
      }
      for (auto [col, r] : start->basic) {
        Tcols_.push_back(col);
        Rrows_.push_back(r);
        status_[col] = kBasic;
        status_[nv_ + r] = kAtLower;
        value_[nv_ + r] = 0.0;
        slack_basic_[r] = 0;
      }
      std::sort(Tcols_.begin(), Tcols_.end());
      std::sort(Rrows_.begin(), Rrows_.end());
      if (!factor_basis()) {
        log_debug("simplex: warm-start basis singular; cold start");
        init(std::nullopt);
        return;
      }
    }
    refresh_values();
  }

  bool start_is_sane(const LpStart& s) const {
    if (s.basic.size() > std::min(nv_, nr_)) return false;
    std::vector<int> cols, rws;
    for (auto [c, r] : s.basic) {
      if (c < 0 || static_cast<std::size_t>(c) >= nv_) return false;
      if (r < 0 || static_cast<std::size_t>(r) >= nr_) return false;
      cols.push_back(c);
      rws.push_back(r);
    }
    std::sort(cols.begin(), cols.end());
    std::sort(rws.begin(), rws.end());
    return std::adjacent_find(cols.begin(), cols.end()) == cols.end() &&
           std::adjacent_find(rws.begin(), rws.end()) == rws.end();
  }

  bool factor_basis() {
    const std::size_t k = Tcols_.size();
    wmat_.assign(k * k, 0.0);
    for (std::size_t p = 0; p < k; ++p) {
      const double* r = row(Rrows_[p]);
      for (std::size_t q = 0; q < k; ++q) {
        wmat_[p * k + q] = r[Tcols_[q]];
      }
    }
    return k == 0 || lu_.factor(wmat_, static_cast<int>(k));
  }

  // Recomputes every basic variable's value from the nonbasic values.
  void refresh_values() {
    const std::size_t k = Tcols_.size();
    // Structural values with basic entries zeroed: contribution of nonbasics.
    xnb_.assign(nv_, 0.0);
    for (std::size_t j = 0; j < nv_; ++j) {
      if (status_[j] != kBasic) xnb_[j] = value_[j];
    }
    if (k > 0) {
      bt_.resize(k);
      for (std::size_t p = 0; p < k; ++p) {
        const double* r = row(Rrows_[p]);
        double s = rhs(Rrows_[p]);
        for (std::size_t j = 0; j < nv_; ++j) s -= r[j] * xnb_[j];
        bt_[p] = s;
      }
      lu_.solve(bt_);
      for (std::size_t p = 0; p < k; ++p) value_[Tcols_[p]] = bt_[p];
    }
    // Full structural vector, then slack values for slack-basic rows.
    xfull_.assign(nv_, 0.0);
    for (std::size_t j = 0; j < nv_; ++j) xfull_[j] = value_[j];
    for (std::size_t i = 0; i < nr_; ++i) {
      if (!slack_basic_[i]) continue;
      const double* r = row(i);
      double s = rhs(i);
      for (std::size_t j = 0; j < nv_; ++j) s -= r[j] * xfull_[j];
      value_[nv_ + i] = s;
    }
  }

  void scan_infeasible() {
    infeasible_.clear();
    for (int c : Tcols_) {
      const double v = value_[c];
      if (v < lower_[c] - kTolFeas || v > upper_[c] + kTolFeas) {
        infeasible_.push_back(c);
      }
    }
    for (std::size_t i = 0; i < nr_; ++i) {
      if (slack_basic_[i] && value_[nv_ + i] < -kTolFeas) {
        infeasible_.push_back(static_cast<int>(nv_ + i));
      }
    }
  }

  double violation_sign(std::size_t v) const {
    if (value_[v] < var_lower(v) - kTolFeas) return -1.0;
    if (value_[v] > var_upper(v) + kTolFeas) return 1.0;
    return 0.0;
  }

  void compute_duals(bool phase1) {
    for (int r : y_touched_) y_[r] = 0.0;
    y_touched_.clear();
    const std::size_t k = Tcols_.size();

    // Basic slacks of violated rows carry phase-1 cost directly in y.
    if (phase1) {
      for (int v : infeasible_) {
        if (static_cast<std::size_t>(v) >= nv_) {
          const int r = v - static_cast<int>(nv_);
          y_[r] = violation_sign(v);
          y_touched_.push_back(r);
        }
      }
    }
    if (k > 0) {
      bt_.resize(k);
      for (std::size_t p = 0; p < k; ++p) {
        const std::size_t c = Tcols_[p];
        double s = phase1 ? violation_sign(c) : cost_[c];
        bt_[p] = s;
      }
      // Subtract contributions of violated basic slacks: W^T yR = cT - G^T yI.
      if (phase1) {
        for (int r : y_touched_) {
          const double yi = y_[r];
          const double* rw = row(r);
          for (std::size_t p = 0; p < k; ++p) bt_[p] -= rw[Tcols_[p]] * yi;
        }
      }
      lu_.solve_transposed(bt_);
      for (std::size_t p = 0; p < k; ++p) {
        y_[Rrows_[p]] = bt_[p];
        y_touched_.push_back(Rrows_[p]);
      }
    }
  }

  void price(bool phase1) {
    if (phase1) {
      std::fill(d_.begin(), d_.end(), 0.0);
    } else {
      std::copy(cost_.begin(), cost_.end(), d_.begin());
    }
    for (int r : y_touched_) {
      const double yr = y_[r];
      if (yr == 0.0) continue;
      const double* rw = row(r);
      for (std::size_t j = 0; j < nv_; ++j) d_[j] -= yr * rw[j];
    }
  }

  // Returns the entering column (structural j or slack nv_+r), or -1.
  // Candidates are visited in ascending column order (Rrows_ is sorted and
  // slack indices all exceed structural ones), so keeping a candidate only on
  // a strictly better score makes ties resolve to the smallest index, and
  // Bland's rule is simply "first eligible".
  int select_entering(bool /*phase1*/) const {
    int best = -1;
    double best_score = 0.0;
    auto consider = [&](std::size_t col, double dj) {
      const bool eligible = (status_[col] == kAtLower && dj < -kTolDual) ||
                            (status_[col] == kAtUpper && dj > kTolDual);
      if (!eligible) return false;
      if (bland_) {
        best = static_cast<int>(col);
        return true;
      }
      if (std::abs(dj) > best_score) {
        best = static_cast<int>(col);
        best_score = std::abs(dj);
      }
      return false;
    };
    for (std::size_t j = 0; j < nv_; ++j) {
      if (status_[j] == kBasic || lower_[j] >= upper_[j]) continue;
      if (consider(j, d_[j])) return best;
    }
    for (int r : Rrows_) {
      if (consider(nv_ + static_cast<std::size_t>(r), -y_[r])) return best;
    }
    return best;
  }

  // Executes one pivot with entering column e; returns the step length.
  double pivot(int e, bool phase1) {
    const std::size_t k = Tcols_.size();
    const double sigma = status_[e] == kAtLower ? 1.0 : -1.0;

    // Direction of the basic variables when the entering column moves +1.
    bt_.resize(k);
    for (std::size_t p = 0; p < k; ++p) {
      const int r = Rrows_[p];
      bt_[p] = e < static_cast<int>(nv_)
                   ? row(r)[e]
                   : (r == e - static_cast<int>(nv_) ? 1.0 : 0.0);
    }
    if (k > 0) lu_.solve(bt_);
    for (std::size_t i = 0; i < nr_; ++i) {
      if (!slack_basic_[i]) continue;
      const double* rw = row(i);
      double s = e < static_cast<int>(nv_)
                     ? rw[e]
                     : (static_cast<int>(i) == e - static_cast<int>(nv_) ? 1.0
                                                                         : 0.0);
      for (std::size_t p = 0; p < k; ++p) s -= rw[Tcols_[p]] * bt_[p];
      ws_[i] = s;
    }

    // Ratio test.  The entering variable moves t >= 0 toward its opposite
    // bound; basic variable v changes at rate rho = -sigma * w_v.  Feasible
    // basics block at their bounds; out-of-bound basics (phase 1) block when
    // they reach the violated bound, and never when moving further out.
    double t_best = var_upper(e) - var_lower(e);  // own-bound flip distance
    int leave = -1;          // variable index leaving the basis
    double leave_at = 0.0;   // bound it blocks at
    double leave_rho = 0.0;
    auto consider_basic = [&](std::size_t v, double w_v) {
      const double rho = -sigma * w_v;
      if (std::abs(rho) <= kTolPivot) return;
      const double xv = value_[v];
      const double lo = var_lower(v), up = var_upper(v);
      double t, at;
      if (phase1 && xv < lo - kTolFeas) {
        if (rho <= 0.0) return;
        t = (lo - xv) / rho;
        at = lo;
      } else if (phase1 && xv > up + kTolFeas) {
        if (rho >= 0.0) return;
        t = (up - xv) / rho;
        at = up;
      } else if (rho > 0.0) {
        if (std::isinf(up)) return;
        t = (up - xv) / rho;
        at = up;
      } else {
        if (std::isinf(lo)) return;
        t = (lo - xv) / rho;
        at = lo;
      }
      t = std::max(t, 0.0);
      const bool wins =
          t < t_best - 1e-12 ||
          (t <= t_best + 1e-12 &&
           (leave < 0 ||
            (bland_ ? v < static_cast<std::size_t>(leave)
                    : std::abs(rho) > std::abs(leave_rho) + 1e-15 ||
                          (std::abs(rho) >= std::abs(leave_rho) - 1e-15 &&
                           v < static_cast<std::size_t>(leave)))));
      if (wins) {
        t_best = std::min(t, t_best);
        leave = static_cast<int>(v);
        leave_at = at;
        leave_rho = rho;
      }
    };
    for (std::size_t p = 0; p < k; ++p) consider_basic(Tcols_[p], bt_[p]);
    for (std::size_t i = 0; i < nr_; ++i) {
      if (slack_basic_[i]) consider_basic(nv_ + i, ws_[i]);
    }

    if (std::isinf(t_best) && leave < 0) {
      throw SolverError(
          "LP is unbounded in the improving direction (missing variable "
          "bounds?)");
    }
    const double t = t_best;

    // Move the point.
    value_[e] += sigma * t;
    for (std::size_t p = 0; p < k; ++p) {
      value_[Tcols_[p]] += -sigma * bt_[p] * t;
    }
    for (std::size_t i = 0; i < nr_; ++i) {
      if (slack_basic_[i]) value_[nv_ + i] += -sigma * ws_[i] * t;
    }

    if (leave < 0) {
      // Bound flip: the entering variable reaches its other bound.
      status_[e] = sigma > 0 ? kAtUpper : kAtLower;
      value_[e] = sigma > 0 ? var_upper(e) : var_lower(e);
      return t;
    }

    // Basis exchange.
    status_[e] = kBasic;
    status_[leave] = leave_at == var_lower(leave) ? kAtLower : kAtUpper;
    value_[leave] = leave_at;
    const bool e_structural = e < static_cast<int>(nv_);
    const bool f_structural = leave < static_cast<int>(nv_);
    if (e_structural) {
      Tcols_.insert(std::upper_bound(Tcols_.begin(), Tcols_.end(), e), e);
    } else {
      const int r = e - static_cast<int>(nv_);
      Rrows_.erase(std::find(Rrows_.begin(), Rrows_.end(), r));
      slack_basic_[r] = 1;
    }
    if (f_structural) {
      Tcols_.erase(std::find(Tcols_.begin(), Tcols_.end(), leave));
    } else {
      const int r = leave - static_cast<int>(nv_);
      Rrows_.insert(std::upper_bound(Rrows_.begin(), Rrows_.end(), r), r);
      slack_basic_[r] = 0;
    }
    return t;
  }

  void extract(Result& res) {
    res.z.assign(nv_, 0.0);
    for (std::size_t j = 0; j < nv_; ++j) {
      double v = value_[j];
      if (std::abs(v - lower_[j]) <= 1e-9) v = lower_[j];
      if (std::abs(v - upper_[j]) <= 1e-9) v = upper_[j];
      res.z[j] = std::clamp(v, lower_[j], upper_[j]);
    }
    res.objective = 0.0;
    for (std::size_t j = 0; j < nv_; ++j) res.objective += cost_[j] * res.z[j];

    // Verify primal feasibility of the reported point (scaled tolerance).
    for (std::size_t i = 0; i < nr_; ++i) {
      const double* rw = row(i);
      double s = 0.0, scale = 1.0;
      for (std::size_t j = 0; j < nv_; ++j) {
        s += rw[j] * res.z[j];
        scale += std::abs(rw[j] * res.z[j]);
      }
      if (s - rhs(i) > 1e-9 * scale + 1e-9) {
        throw SolverError("solver reported an infeasible optimum (residual " +
                          std::to_string(s - rhs(i)) + " on row " +
                          std::to_string(i) + ")");
      }
    }

    // Alternate optima: a nonbasic variable that could move at zero reduced
    // cost.  Conservative flag used to decide whether the lexicographic
    // refinement pass must run.
    res.alternate_optima = false;
    for (std::size_t j = 0; j < nv_; ++j) {
      if (status_[j] == kBasic || lower_[j] >= upper_[j]) continue;
      if (std::abs(d_[j]) <= 1e-7) {
        res.alternate_optima = true;
        return;
      }
    }
    for (int r : Rrows_) {
      if (std::abs(y_[r]) <= 1e-7) {
        res.alternate_optima = true;
        return;
      }
    }
  }

  const LpModel& model_;
  const std::size_t nv_;
  const std::size_t nr_;
  std::vector<double> lower_, upper_, cost_;
  std::span<const double> extra_rows_;
  std::span<const double> extra_rhs_;

  std::vector<std::uint8_t> status_;
  std::vector<double> value_;
  std::vector<std::uint8_t> slack_basic_;
  std::vector<int> Tcols_, Rrows_;
  DenseLu lu_;
  std::vector<double> wmat_, bt_, xnb_, xfull_, ws_, y_, d_;
  std::vector<int> y_touched_;
  std::vector<int> infeasible_;
  bool bland_ = false;
  int degenerate_streak_ = 0;
  int singular_restarts_ = 0;
};

}  // namespace detail

// Solves the LP to optimality and, whenever multiple optima are indicated,
// refines to the lexicographically smallest optimal point: coordinates are
// minimized in index order over the optimal face (the face is held by an
// auxiliary row c.z <= J* plus progressive pinning of finished coordinates).
// The result is therefore a single-valued, deterministic function of the
// model.
inline LpSolution solve_lp(const LpModel& model) {
  const std::size_t nv = model.num_vars();
  const std::size_t nr = model.num_rows();
  if (model.lower.size() != nv || model.upper.size() != nv) {
    throw SolverError("model bounds sized inconsistently with the objective");
  }
  if (model.rows.size() != nr * nv) {
    throw SolverError("model row storage sized inconsistently");
  }

  detail::BoundedSimplex base(model, model.lower, model.upper, model.objective,
                              {}, {});
  auto r0 = base.run(model.start);
  LpSolution sol;
  sol.iterations = r0.iterations;
  if (!r0.feasible) {
    sol.status = LpStatus::kInfeasible;
    return sol;
  }
  sol.status = LpStatus::kOptimal;
  sol.z = r0.z;
  sol.objective = r0.objective;

  if (r0.alternate_optima) {
    log_debug("lp: alternate optima indicated; lexicographic refinement");
    std::vector<double> lo = model.lower, up = model.upper;
    const std::span<const double> obj_row(model.objective);
    const double extra_rhs_val[1] = {r0.objective};
    std::vector<double> z_cur = r0.z;
    std::vector<double> ej(nv, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
      if (z_cur[j] <= model.lower[j] + 1e-9) {
        lo[j] = up[j] = model.lower[j];
        z_cur[j] = model.lower[j];
        continue;
      }
      std::fill(ej.begin(), ej.end(), 0.0);
      ej[j] = 1.0;
      detail::BoundedSimplex sx(model, lo, up, ej, obj_row,
                                std::span<const double>(extra_rhs_val, 1));
      auto rj = sx.run(std::nullopt);
      sol.iterations += rj.iterations;
      if (!rj.feasible) {
        throw SolverError("lexicographic refinement lost feasibility");
      }
      z_cur = rj.z;
      lo[j] = up[j] = z_cur[j];
    }
    sol.z = z_cur;
    double obj = 0.0;
    for (std::size_t j = 0; j < nv; ++j) obj += model.objective[j] * z_cur[j];
    sol.objective = obj;
  }

  // Rows tight at the reported solution.
  for (std::size_t i = 0; i < nr; ++i) {
    const double* rw = model.rows.data() + i * nv;
    double s = 0.0, scale = 1.0;
    for (std::size_t j = 0; j < nv; ++j) {
      s += rw[j] * sol.z[j];
      scale += std::abs(rw[j] * sol.z[j]);
    }
    if (std::abs(s - model.rhs[i]) <= 1e-7 * scale) {
      sol.active_rows.push_back(static_cast<std::int32_t>(i));
    }
  }
  return sol;
}

}  // namespace pacsafe
