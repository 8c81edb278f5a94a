#pragma once

// Deliberately independent reference implementations used only by tests:
// plain composite Simpson for moments, dense Gaussian elimination, and a
// cyclic Jacobi eigensolver. Kept free of any library numerics so that
// agreement is evidence, not tautology.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int panels = 2000) {
  if (b <= a) return 0.0;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Kernel profiles restated from their formulas. The cutoff is closed so
// quadrature endpoint samples at s = delta carry the limiting value.
inline double gamma_constant(double delta, double s) {
  return (s > 0.0 && s <= delta) ? 3.0 / (2.0 * delta * delta * delta) : 0.0;
}

inline double gamma_inverse_abs(double delta, double s) {
  return (s > 0.0 && s <= delta) ? 1.0 / (delta * delta * s) : 0.0;
}

// Partial moment of order p over (a, b) by quadrature.
inline double moment(const std::function<double(double)>& gamma, int p, double a,
                     double b) {
  return simpson([&](double s) { return std::pow(s, p) * gamma(s); }, a, b);
}

// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> a,
                                       std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    if (a[piv][k] == 0.0) throw std::runtime_error("oracle: singular matrix");
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (int i = k + 1; i < n; ++i) {
      const double m = a[i][k] / a[k][k];
      if (m == 0.0) continue;
      for (int j = k; j < n; ++j) a[i][j] -= m * a[k][j];
      b[i] -= m * b[k];
    }
  }
  std::vector<double> x(static_cast<size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a[i][j] * x[static_cast<size_t>(j)];
    x[static_cast<size_t>(i)] = s / a[i][i];
  }
  return x;
}

// Smallest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
inline double jacobi_min_eigenvalue(std::vector<std::vector<double>> a) {
  const int n = static_cast<int>(a.size());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-26) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
      }
    }
  }
  double best = a[0][0];
  for (int i = 1; i < n; ++i) best = std::min(best, a[i][i]);
  return best;
}

}  // namespace oracle
