#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qnl/assembly.hpp"
#include "qnl/banded.hpp"
#include "qnl/report.hpp"
#include "qnl/rng.hpp"

namespace qnl {

inline std::vector<double> solve(const OperatorMatrix& a,
                                 const std::vector<double>& rhs) {
  BandedLU lu(a.core());
  return lu.solve(rhs);
}

// ||A - A^T||_inf / ||A||_inf over the banded core. Reported, never
// asserted zero: transitional rows are genuinely nonsymmetric.
inline double symmetry_defect(const OperatorMatrix& a) {
  const BandedMatrix& m = a.core();
  const int n = m.size();
  const int kl = m.lower_bandwidth(), ku = m.upper_bandwidth();
  double defect = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = std::max(0, i - std::max(kl, ku));
         j <= std::min(n - 1, i + std::max(kl, ku)); ++j)
      s += std::abs(m.get(i, j) - m.get(j, i));
    defect = std::max(defect, s);
  }
  return defect / m.infinity_norm();
}

namespace detail {

// Householder reduction of a symmetric dense matrix to tridiagonal form
// (diagonal d, subdiagonal e); eigenvectors are not accumulated.
inline void tridiagonalize(std::vector<std::vector<double>>& a,
                           std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(a.size());
  d.assign(static_cast<size_t>(n), 0.0);
  e.assign(static_cast<size_t>(n), 0.0);
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double scale = 0.0, hh = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::abs(a[i][k]);
      if (scale == 0.0) {
        e[i] = a[i][l];
      } else {
        for (int k = 0; k <= l; ++k) {
          a[i][k] /= scale;
          hh += a[i][k] * a[i][k];
        }
        double f = a[i][l];
        double g = (f >= 0.0) ? -std::sqrt(hh) : std::sqrt(hh);
        e[i] = scale * g;
        hh -= f * g;
        a[i][l] = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += a[j][k] * a[i][k];
          for (int k = j + 1; k <= l; ++k) g += a[k][j] * a[i][k];
          e[j] = g / hh;
          f += e[j] * a[i][j];
        }
        const double hhh = f / (hh + hh);
        for (int j = 0; j <= l; ++j) {
          f = a[i][j];
          e[j] = g = e[j] - hhh * f;
          for (int k = 0; k <= j; ++k)
            a[j][k] -= f * e[k] + g * a[i][k];
        }
      }
    } else {
      e[i] = a[i][l];
    }
    d[i] = hh;
  }
  for (int i = 0; i < n; ++i) d[i] = a[i][i];
}

// Number of eigenvalues of the tridiagonal (d, e) strictly below x,
// via the Sturm sequence of leading principal minors.
inline int sturm_count(const std::vector<double>& d, const std::vector<double>& e,
                       double x) {
  const int n = static_cast<int>(d.size());
  int count = 0;
  double q = d[0] - x;
  if (q < 0.0) ++count;
  for (int i = 1; i < n; ++i) {
    double denom = q;
    if (denom == 0.0) denom = 1e-300;
    q = d[i] - x - e[i] * e[i] / denom;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace detail

// Smallest eigenvalue of (A + A^T)/2 by tridiagonalization plus Sturm
// bisection. Cost is O(n^3); intended for modest n diagnostics.
inline double smallest_symmetrized_eigenvalue(const OperatorMatrix& a) {
  const int n = a.core().size();
  auto dense = a.core().dense();
  std::vector<std::vector<double>> s(static_cast<size_t>(n),
                                     std::vector<double>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s[i][j] = 0.5 * (dense[i][j] + dense[j][i]);

  std::vector<double> d, e;
  detail::tridiagonalize(s, d, e);

  double lo = d[0], hi = d[0];
  for (int i = 0; i < n; ++i) {
    const double off = (i > 0 ? std::abs(e[i]) : 0.0) +
                       (i + 1 < n ? std::abs(e[i + 1]) : 0.0);
    lo = std::min(lo, d[i] - off);
    hi = std::max(hi, d[i] + off);
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (detail::sturm_count(d, e, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// v^T A v > 0 for seeded random vectors; on small systems also the
// smallest eigenvalue of the symmetrized part.
inline Report positive_definiteness_check(const OperatorMatrix& a, int trials,
                                          uint64_t seed) {
  Report rep;
  const int n = a.core().size();
  Rng rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    std::vector<double> v(static_cast<size_t>(n));
    for (auto& x : v) x = rng.normal();
    const auto av = a.core().multiply(v);
    double q = 0.0;
    for (int i = 0; i < n; ++i) q += v[static_cast<size_t>(i)] * av[static_cast<size_t>(i)];
    worst = std::min(worst, q);
  }
  rep.add("rayleigh_quotient_min", worst, 0.0, worst > 0.0);
  if (n <= 64) {
    const double ev = smallest_symmetrized_eigenvalue(a);
    rep.add("smallest_symmetrized_eigenvalue", ev, 0.0, ev > 0.0);
  }
  return rep;
}

// Entrywise nonnegativity of A^{-1}, computed column by column with the
// banded factorization (no dense inverse is stored).
inline Report inverse_positivity_check(const OperatorMatrix& a) {
  Report rep;
  const int n = a.core().size();
  BandedLU lu(a.core());
  double min_entry = std::numeric_limits<double>::infinity();
  std::vector<double> row_abs_sum(static_cast<size_t>(n), 0.0);
  std::vector<double> unit(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    unit[static_cast<size_t>(j)] = 1.0;
    const auto col = lu.solve(unit);
    unit[static_cast<size_t>(j)] = 0.0;
    for (int i = 0; i < n; ++i) {
      min_entry = std::min(min_entry, col[static_cast<size_t>(i)]);
      row_abs_sum[static_cast<size_t>(i)] += std::abs(col[static_cast<size_t>(i)]);
    }
  }
  const double inv_norm = *std::max_element(row_abs_sum.begin(), row_abs_sum.end());
  const double threshold = -1e-12 * inv_norm;
  rep.add("inverse_min_entry", min_entry, threshold, min_entry >= threshold);
  return rep;
}

}  // namespace qnl
