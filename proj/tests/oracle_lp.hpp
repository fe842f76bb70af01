#pragma once

// Brute-force reference for small linear programs.  Every vertex of the
// feasible polytope lies at the intersection of `nv` constraint hyperplanes
// drawn from the inequality rows and the variable bounds, so enumerating all
// nv-subsets, solving each square system, and filtering by feasibility yields
// the complete vertex set.  All variables must have finite bounds; the
// feasible region is then a polytope, which is nonempty exactly when some
// candidate vertex is feasible, and any linear objective attains its minimum
// at one of the feasible vertices.  Exponential in the variable count: keep
// nv at four or fewer and rows near a dozen.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "pacsafe/lp.hpp"

namespace oracle {

struct Verdict {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> lex_argmin;  // lexicographically smallest optimal vertex
};

// Gaussian elimination with partial pivoting; false when (near-)singular.
inline bool solve_square(std::vector<double> a, std::vector<double> b, int n,
                         std::vector<double>& x) {
  for (int j = 0; j < n; ++j) {
    int p = j;
    double best = std::abs(a[static_cast<std::size_t>(j) * n + j]);
    for (int i = j + 1; i < n; ++i) {
      const double v = std::abs(a[static_cast<std::size_t>(i) * n + j]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best > 1e-11)) return false;
    if (p != j) {
      for (int c = 0; c < n; ++c) {
        std::swap(a[static_cast<std::size_t>(j) * n + c],
                  a[static_cast<std::size_t>(p) * n + c]);
      }
      std::swap(b[j], b[p]);
    }
    const double d = a[static_cast<std::size_t>(j) * n + j];
    for (int i = j + 1; i < n; ++i) {
      const double l = a[static_cast<std::size_t>(i) * n + j] / d;
      if (l == 0.0) continue;
      for (int c = j; c < n; ++c) {
        a[static_cast<std::size_t>(i) * n + c] -=
            l * a[static_cast<std::size_t>(j) * n + c];
      }
      b[i] -= l * b[j];
    }
  }
  x.assign(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int c = i + 1; c < n; ++c) {
      s -= a[static_cast<std::size_t>(i) * n + c] * x[c];
    }
    x[i] = s / a[static_cast<std::size_t>(i) * n + i];
  }
  return true;
}

inline bool point_feasible(const pacsafe::LpModel& m,
                           const std::vector<double>& z) {
  const std::size_t nv = m.num_vars();
  for (std::size_t j = 0; j < nv; ++j) {
    if (z[j] < m.lower[j] - 1e-9 || z[j] > m.upper[j] + 1e-9) return false;
  }
  for (std::size_t i = 0; i < m.num_rows(); ++i) {
    const double* r = m.rows.data() + i * nv;
    double s = 0.0, scale = 1.0;
    for (std::size_t j = 0; j < nv; ++j) {
      s += r[j] * z[j];
      scale += std::abs(r[j] * z[j]);
    }
    if (s - m.rhs[i] > 1e-9 * scale) return false;
  }
  return true;
}

// Enumerates all candidate vertices and reports feasibility, the optimal
// objective, and the lexicographically smallest vertex attaining it.
inline Verdict solve_reference(const pacsafe::LpModel& m) {
  const int nv = static_cast<int>(m.num_vars());
  const int nr = static_cast<int>(m.num_rows());
  const int total = nr + 2 * nv;  // rows, then lower bounds, then uppers
  Verdict out;
  out.objective = std::numeric_limits<double>::infinity();

  std::vector<int> pick(nv);
  for (int i = 0; i < nv; ++i) pick[i] = i;
  std::vector<double> a(static_cast<std::size_t>(nv) * nv), b(nv), z;

  auto lex_less = [&](const std::vector<double>& u,
                      const std::vector<double>& v) {
    for (int j = 0; j < nv; ++j) {
      if (u[j] < v[j] - 1e-9) return true;
      if (u[j] > v[j] + 1e-9) return false;
    }
    return false;
  };

  for (;;) {
    // Assemble the square system for this constraint subset.
    std::fill(a.begin(), a.end(), 0.0);
    for (int q = 0; q < nv; ++q) {
      const int c = pick[q];
      if (c < nr) {
        const double* r = m.rows.data() + static_cast<std::size_t>(c) * nv;
        for (int j = 0; j < nv; ++j) a[static_cast<std::size_t>(q) * nv + j] = r[j];
        b[q] = m.rhs[c];
      } else if (c < nr + nv) {
        a[static_cast<std::size_t>(q) * nv + (c - nr)] = 1.0;
        b[q] = m.lower[c - nr];
      } else {
        a[static_cast<std::size_t>(q) * nv + (c - nr - nv)] = 1.0;
        b[q] = m.upper[c - nr - nv];
      }
    }
    if (solve_square(a, b, nv, z) && point_feasible(m, z)) {
      double obj = 0.0;
      for (int j = 0; j < nv; ++j) obj += m.objective[j] * z[j];
      const double tol = 1e-9 * (1.0 + std::abs(out.objective));
      if (!out.feasible || obj < out.objective - tol) {
        out.feasible = true;
        out.objective = obj;
        out.lex_argmin = z;
      } else if (obj <= out.objective + tol) {
        out.objective = std::min(out.objective, obj);
        if (lex_less(z, out.lex_argmin)) out.lex_argmin = z;
      }
    }
    // Next nv-subset of {0, ..., total-1} in lexicographic order.
    int q = nv - 1;
    while (q >= 0 && pick[q] == total - nv + q) --q;
    if (q < 0) break;
    ++pick[q];
    for (int r = q + 1; r < nv; ++r) pick[r] = pick[r - 1] + 1;
  }
  if (!out.feasible) out.objective = 0.0;
  return out;
}

}  // namespace oracle
