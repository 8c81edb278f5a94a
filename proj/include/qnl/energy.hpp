#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qnl/arrangement.hpp"
#include "qnl/kernel.hpp"
#include "qnl/mesh.hpp"
#include "qnl/weights.hpp"

namespace qnl {

namespace detail {

// Kernel weight for node pairs at offset j*h: the zeroth moment over the
// cell centered at the offset, clipped to the support. Midpoint cells keep
// the inverse-abs kernel integrable at j = 1.
inline std::vector<double> pair_weights(const Kernel& k, int r, double h) {
  std::vector<double> w(static_cast<size_t>(r) + 1, 0.0);
  for (int j = 1; j <= r; ++j)
    w[static_cast<size_t>(j)] = k.moment(0, (j - 0.5) * h, (j + 0.5) * h);
  return w;
}

// True when node i is inside the closed nonlocal region (ghost layers
// extend the adjacent nonlocal region).
inline std::vector<bool> nonlocal_mask(const CouplingConfig& cfg) {
  const Mesh& mesh = cfg.mesh;
  const auto regimes = classify(cfg);
  std::vector<bool> mask(static_cast<size_t>(mesh.total_nodes()), false);
  for (int i = mesh.lowest(); i <= mesh.highest(); ++i) {
    bool nl;
    if (i < 0)
      nl = mesh.ghost_left > 0;
    else if (i > mesh.last())
      nl = mesh.ghost_right > 0;
    else
      nl = regimes[static_cast<size_t>(i)].regime == Regime::Nonlocal;
    mask[static_cast<size_t>(i - mesh.lowest())] = nl;
  }
  return mask;
}

}  // namespace detail

// Symmetric bilinear form b(u, v): nonlocal pair sum over pairs with at
// least one endpoint in the nonlocal region, plus the omega-weighted local
// gradient sum over cells (omega of the distance from the cell midpoint to
// the nonlocal region, so pure regions degenerate correctly).
inline double bilinear(const CouplingConfig& cfg, const GridFunction& u,
                       const GridFunction& v) {
  const Mesh& mesh = cfg.mesh;
  const double h = mesh.h();
  const double delta = cfg.delta();
  const int r = cfg.ratio;
  const auto w = detail::pair_weights(cfg.kernel, r, h);
  const auto nl = detail::nonlocal_mask(cfg);
  const int lo = mesh.lowest(), hi = mesh.highest();

  double pair_sum = 0.0;
  for (int i = lo; i <= hi; ++i) {
    for (int j = 1; j <= r; ++j) {
      const int p = i + j;
      if (p > hi) break;
      if (!nl[static_cast<size_t>(i - lo)] && !nl[static_cast<size_t>(p - lo)])
        continue;
      pair_sum += w[static_cast<size_t>(j)] * (u(p) - u(i)) * (v(p) - v(i)) * h;
    }
  }
  // Ordered-pair normalization: each unordered pair counts twice.
  pair_sum *= 2.0;

  WeightEvaluator we(cfg.kernel);
  double local_sum = 0.0;
  for (int i = lo; i < hi; ++i) {
    const double mid = mesh.node(i) + 0.5 * h;
    const double dist =
        std::min(distance_to_nonlocal(cfg.arrangement, mid), delta);
    const double om = we.omega(dist);
    if (om == 0.0) continue;
    local_sum += om * ((u(i + 1) - u(i)) / h) * ((v(i + 1) - v(i)) / h) * h;
  }
  return pair_sum + local_sum;
}

inline double discrete_energy(const CouplingConfig& cfg, const GridFunction& u) {
  return 0.5 * bilinear(cfg, u, u);
}

// The fully nonlocal pair energy over ALL pairs with the same quadrature;
// the QNL form dominates it (stability of the coupling).
inline double nonlocal_energy_all_pairs(const CouplingConfig& cfg,
                                        const GridFunction& u) {
  const Mesh& mesh = cfg.mesh;
  const double h = mesh.h();
  const int r = cfg.ratio;
  const auto w = detail::pair_weights(cfg.kernel, r, h);
  const int lo = mesh.lowest(), hi = mesh.highest();
  double s = 0.0;
  for (int i = lo; i <= hi; ++i)
    for (int j = 1; j <= r && i + j <= hi; ++j) {
      const double d = u(i + j) - u(i);
      s += w[static_cast<size_t>(j)] * d * d * h;
    }
  return 2.0 * s;
}

}  // namespace qnl
