#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qnl/errors.hpp"

namespace qnl {

// General banded matrix in LAPACK-style band storage: entry (i, j) lives
// at ab[col j][kl + ku + i - j]; the top kl band rows hold fill produced
// by row pivoting during factorization.
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
        ab_(static_cast<size_t>(ldab_) * n, 0.0) {
    if (n < 1 || kl < 0 || ku < 0)
      throw argument_error("banded matrix: bad dimensions");
  }

  int size() const { return n_; }
  int lower_bandwidth() const { return kl_; }
  int upper_bandwidth() const { return ku_; }

  bool in_band(int i, int j) const {
    return i >= 0 && j >= 0 && i < n_ && j < n_ && i - j <= kl_ && j - i <= ku_;
  }

  double get(int i, int j) const {
    return in_band(i, j) ? ab_[idx(i, j)] : 0.0;
  }

  void set(int i, int j, double v) {
    check(i, j);
    ab_[idx(i, j)] = v;
  }

  void add(int i, int j, double v) {
    check(i, j);
    ab_[idx(i, j)] += v;
  }

  double infinity_norm() const {
    double best = 0.0;
    for (int i = 0; i < n_; ++i) {
      double s = 0.0;
      for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
        s += std::abs(ab_[idx(i, j)]);
      best = std::max(best, s);
    }
    return best;
  }

  std::vector<double> multiply(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_)
      throw argument_error("banded multiply: size mismatch");
    std::vector<double> y(static_cast<size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i)
      for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
        y[i] += ab_[idx(i, j)] * x[j];
    return y;
  }

  std::vector<std::vector<double>> dense() const {
    std::vector<std::vector<double>> d(
        static_cast<size_t>(n_), std::vector<double>(static_cast<size_t>(n_), 0.0));
    for (int i = 0; i < n_; ++i)
      for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j)
        d[i][j] = ab_[idx(i, j)];
    return d;
  }

 private:
  friend class BandedLU;

  size_t idx(int i, int j) const {
    return static_cast<size_t>(j) * ldab_ + (kl_ + ku_ + i - j);
  }

  void check(int i, int j) const {
    if (!in_band(i, j)) throw argument_error("banded matrix: entry outside band");
  }

  int n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
  std::vector<double> ab_;
};

// LU factorization with partial pivoting on band storage (the classic
// unblocked GBTF2 sweep). Pivoting can fill at most kl extra upper
// diagonals, which the storage already reserves.
class BandedLU {
 public:
  explicit BandedLU(BandedMatrix a, double pivot_rel_tol = 1e-14)
      : m_(std::move(a)), ipiv_(static_cast<size_t>(m_.n_), 0) {
    const int n = m_.n_, kl = m_.kl_, ku = m_.ku_;
    const int kv = kl + ku;
    const double tiny = pivot_rel_tol * m_.infinity_norm();
    auto& ab = m_.ab_;
    auto at = [&](int band_row, int col) -> double& {
      return ab[static_cast<size_t>(col) * m_.ldab_ + band_row];
    };

    int ju = 0;
    for (int j = 0; j < n; ++j) {
      const int km = std::min(kl, n - 1 - j);
      int jp = 0;
      for (int p = 1; p <= km; ++p)
        if (std::abs(at(kv + p, j)) > std::abs(at(kv + jp, j))) jp = p;
      ipiv_[j] = j + jp;
      if (std::abs(at(kv + jp, j)) <= tiny)
        throw singular_error("banded LU: numerically singular pivot");
      ju = std::max(ju, std::min(j + ku + jp, n - 1));
      if (jp != 0)
        for (int c = j; c <= ju; ++c)
          std::swap(at(kv + j - c, c), at(kv + j + jp - c, c));
      if (km > 0) {
        const double piv = at(kv, j);
        for (int p = 1; p <= km; ++p) at(kv + p, j) /= piv;
        for (int c = j + 1; c <= ju; ++c) {
          const double t = at(kv + j - c, c);
          if (t != 0.0)
            for (int p = 1; p <= km; ++p)
              at(kv + j + p - c, c) -= at(kv + p, j) * t;
        }
      }
    }
  }

  std::vector<double> solve(std::vector<double> b) const {
    const int n = m_.n_, kl = m_.kl_, ku = m_.ku_;
    const int kv = kl + ku;
    if (static_cast<int>(b.size()) != n)
      throw argument_error("banded solve: size mismatch");
    const auto& ab = m_.ab_;
    auto at = [&](int band_row, int col) {
      return ab[static_cast<size_t>(col) * m_.ldab_ + band_row];
    };
    for (int j = 0; j < n - 1; ++j) {
      if (ipiv_[j] != j) std::swap(b[j], b[ipiv_[j]]);
      const int km = std::min(kl, n - 1 - j);
      for (int p = 1; p <= km; ++p) b[j + p] -= at(kv + p, j) * b[j];
    }
    for (int j = n - 1; j >= 0; --j) {
      b[j] /= at(kv, j);
      const int lo = std::max(0, j - kv);
      for (int i = lo; i < j; ++i) b[i] -= at(kv + i - j, j) * b[j];
    }
    return b;
  }

 private:
  BandedMatrix m_;
  std::vector<int> ipiv_;
};

}  // namespace qnl
