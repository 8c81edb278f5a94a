#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

#include "qnl/errors.hpp"

namespace qnl {

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1].
inline constexpr double gk_nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,
    0.741531185599394,  0.864864423359769,  0.949107912342759,
    0.991455371120813};

inline constexpr double gk_weights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529};

// Embedded 7-point Gauss weights (nonzero at odd Kronrod indices).
inline constexpr double g7_weights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

template <class F>
void gk15(const F& f, double a, double b, double& result, double& err) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double fx = f(c + hw * gk_nodes[i]);
    kron += gk_weights[i] * fx;
    if (i % 2 == 1) gauss += g7_weights[i / 2] * fx;
  }
  result = kron * hw;
  err = std::abs((kron - gauss) * hw);
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration to an absolute tolerance.
// Bisects the worst interval first via simple recursion.
template <class F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-12,
                 int max_depth = 40) {
  if (!(a <= b)) throw argument_error("integrate: requires a <= b");
  if (a == b) return 0.0;
  struct Rec {
    static double go(const F& f, double a, double b, double tol, int depth) {
      double r, e;
      detail::gk15(f, a, b, r, e);
      if (e <= tol || depth <= 0) return r;
      const double c = 0.5 * (a + b);
      return go(f, a, c, 0.5 * tol, depth - 1) +
             go(f, c, b, 0.5 * tol, depth - 1);
    }
  };
  return Rec::go(f, a, b, abs_tol, max_depth);
}

inline double integrate_fn(const std::function<double(double)>& f, double a,
                           double b, double abs_tol = 1e-12) {
  return integrate(f, a, b, abs_tol);
}

}  // namespace qnl
