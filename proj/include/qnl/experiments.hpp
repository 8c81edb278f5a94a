#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qnl/arrangement.hpp"
#include "qnl/assembly.hpp"
#include "qnl/energy.hpp"
#include "qnl/kernel.hpp"
#include "qnl/linalg.hpp"
#include "qnl/problems.hpp"
#include "qnl/report.hpp"
#include "qnl/rng.hpp"

namespace qnl {

// Assembles and solves -L^qnl u = f with homogeneous boundary/volumetric
// data; returns the solution on the full grid (prescribed slots zero).
inline GridFunction solve_problem(const CouplingConfig& cfg, const Problem& prob) {
  const auto a = assemble(cfg);
  GridFunction zero(cfg.mesh);
  const auto rhs = a.fold_rhs([&](double x) { return prob.forcing(x); }, zero);
  const auto u_int = solve(a, rhs);
  GridFunction u(cfg.mesh);
  for (int i = 1; i <= cfg.mesh.last() - 1; ++i)
    u(i) = u_int[static_cast<size_t>(i - 1)];
  return u;
}

// Central differences at the mesh points; one-sided second-order stencils
// at the two endpoints. Defined on 0..2N (ghosts are not differentiated).
inline GridFunction gradient(const GridFunction& u) {
  const Mesh& mesh = u.mesh();
  const double h = mesh.h();
  const int n = mesh.last();
  GridFunction g(mesh);
  g(0) = (-3.0 * u(0) + 4.0 * u(1) - u(2)) / (2.0 * h);
  for (int i = 1; i < n; ++i) g(i) = (u(i + 1) - u(i - 1)) / (2.0 * h);
  g(n) = (3.0 * u(n) - 4.0 * u(n - 1) + u(n - 2)) / (2.0 * h);
  return g;
}

struct ErrorPair {
  double err_u = 0.0;
  double err_grad = 0.0;
};

// Discrete L-infinity distances to the exact local solution, over interior
// nodes (gradient errors exclude the endpoint nodes by construction).
inline ErrorPair error_vs_exact(const GridFunction& u, const Problem& prob) {
  const Mesh& mesh = u.mesh();
  const auto g = gradient(u);
  ErrorPair e;
  for (int i = 1; i <= mesh.last() - 1; ++i) {
    const double x = mesh.node(i);
    e.err_u = std::max(e.err_u, std::abs(u(i) - prob.exact(x)));
    e.err_grad = std::max(e.err_grad, std::abs(g(i) - prob.exact_grad(x)));
  }
  return e;
}

struct ConvergenceRow {
  int n_half = 0;
  double h = 0.0, delta = 0.0;
  double err_u = 0.0, order_u = 0.0;
  double err_grad = 0.0, order_grad = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;

  double lsq_order_u() const { return lsq_order(true); }
  double lsq_order_grad() const { return lsq_order(false); }

 private:
  double lsq_order(bool u) const {
    const size_t n = rows.size();
    if (n < 2) return 0.0;
    double mh = 0.0, me = 0.0;
    std::vector<double> lh(n), le(n);
    for (size_t i = 0; i < n; ++i) {
      lh[i] = std::log(rows[i].h);
      le[i] = std::log(u ? rows[i].err_u : rows[i].err_grad);
      mh += lh[i];
      me += le[i];
    }
    mh /= n;
    me /= n;
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < n; ++i) {
      num += (lh[i] - mh) * (le[i] - me);
      den += (lh[i] - mh) * (lh[i] - mh);
    }
    return num / den;
  }
};

inline CouplingConfig build_config(double x_left, double x_right, int n_half,
                                   const Arrangement& arr, KernelKind kind,
                                   int ratio,
                                   SchemeKind scheme = SchemeKind::Compatible,
                                   TilingRule tiling = TilingRule::Exact) {
  Mesh mesh = make_mesh(x_left, x_right, n_half, arr, ratio);
  return CouplingConfig{mesh, arr, make_kernel(kind, ratio * mesh.h()), ratio,
                        scheme, tiling};
}

// Refinement sweep at fixed ratio r (delta = r*h shrinks with h).
inline ConvergenceReport convergence_study(
    const Problem& prob, KernelKind kind, int ratio,
    const std::vector<int>& levels,
    const Arrangement& arr = Arrangement::nonlocal_local(0.0),
    SchemeKind scheme = SchemeKind::Compatible,
    TilingRule tiling = TilingRule::Exact) {
  if (!prob.has_exact())
    throw config_error("convergence study needs an exact local solution");
  ConvergenceReport rep;
  for (int n : levels) {
    const auto cfg = build_config(-1.0, 1.0, n, arr, kind, ratio, scheme, tiling);
    const auto u = solve_problem(cfg, prob);
    const auto e = error_vs_exact(u, prob);
    ConvergenceRow row;
    row.n_half = n;
    row.h = cfg.mesh.h();
    row.delta = cfg.delta();
    row.err_u = e.err_u;
    row.err_grad = e.err_grad;
    if (!rep.rows.empty()) {
      row.order_u = std::log2(rep.rows.back().err_u / e.err_u);
      row.order_grad = std::log2(rep.rows.back().err_grad / e.err_grad);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

struct CompareReport {
  ConvergenceReport compatible;
  ConvergenceReport direct;
};

inline CompareReport compare_direct_vs_compatible(const Problem& prob,
                                                  KernelKind kind, int ratio,
                                                  double x_star,
                                                  const std::vector<int>& levels) {
  const auto arr = Arrangement::nonlocal_local(x_star);
  CompareReport rep;
  rep.compatible = convergence_study(prob, kind, ratio, levels, arr,
                                     SchemeKind::Compatible);
  rep.direct = convergence_study(prob, kind, ratio, levels, arr,
                                 SchemeKind::Direct);
  return rep;
}

struct PatchResult {
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Applies the full stencils to u = F*x + c (sampled on the entire grid,
// ghosts included) and reports the largest interior residual.
inline PatchResult patch_test(const CouplingConfig& cfg, double F, double c) {
  const auto a = assemble(cfg);
  const auto lin = GridFunction::sample(cfg.mesh,
                                        [&](double x) { return F * x + c; });
  const auto res = a.apply(lin);
  PatchResult out;
  for (int i = 1; i <= cfg.mesh.last() - 1; ++i)
    out.max_residual = std::max(out.max_residual, std::abs(res(i)));
  out.tolerance = 1e-11 * (std::abs(F) + std::abs(c)) * a.infinity_norm();
  out.pass = out.max_residual <= out.tolerance;
  return out;
}

struct TruncationResult {
  double max_nonlocal = 0.0;
  double max_transitional = 0.0;
  double max_local = 0.0;
};

// T_i = (L^qnl u)_i - u''(x_i) on exact nodal samples, split by row regime.
template <class U, class Upp>
TruncationResult truncation_error(const CouplingConfig& cfg, const U& u,
                                  const Upp& u_second) {
  const auto a = assemble(cfg);
  const auto samples = GridFunction::sample(cfg.mesh, u);
  const auto au = a.apply(samples);
  TruncationResult out;
  for (int k = 0; k < a.rows_count(); ++k) {
    const int i = k + 1;
    const double t = -au(i) - u_second(cfg.mesh.node(i));
    switch (a.row_regime(k)) {
      case Regime::Nonlocal:
        out.max_nonlocal = std::max(out.max_nonlocal, std::abs(t));
        break;
      case Regime::Transitional:
        out.max_transitional = std::max(out.max_transitional, std::abs(t));
        break;
      case Regime::Local:
        out.max_local = std::max(out.max_local, std::abs(t));
        break;
    }
  }
  return out;
}

// Random nonnegative forcings f(x) = c0 + c2 x^2 + c4 x^4 with uniform
// coefficients; the solution must stay nonnegative (discrete maximum
// principle with zero boundary data).
inline Report max_principle_check(const CouplingConfig& cfg, int trials,
                                  uint64_t seed) {
  Report rep;
  const auto a = assemble(cfg);
  BandedLU lu(a.core());
  GridFunction zero(cfg.mesh);
  Rng rng(seed);
  double worst_ratio = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double c0 = rng.uniform01(), c2 = rng.uniform01(), c4 = rng.uniform01();
    const auto rhs = a.fold_rhs(
        [&](double x) { return c0 + c2 * x * x + c4 * x * x * x * x; }, zero);
    const auto u = lu.solve(rhs);
    double min_u = 0.0, norm_u = 0.0;
    for (double v : u) {
      min_u = std::min(min_u, v);
      norm_u = std::max(norm_u, std::abs(v));
    }
    if (norm_u > 0.0) worst_ratio = std::min(worst_ratio, min_u / norm_u);
  }
  rep.add("min_u_over_norm_worst", worst_ratio, -1e-12, worst_ratio >= -1e-12);
  if (a.unknowns() <= 512) {
    auto inv = inverse_positivity_check(a);
    rep.entries.insert(rep.entries.end(), inv.entries.begin(), inv.entries.end());
  }
  return rep;
}

struct BoundaryLayerResult {
  GridFunction u_nonlocal_coupled;  // NonlocalLocal(0), volumetric left layer
  GridFunction u_lnl;               // LocalNonlocalLocal(-1/2, 1/2)
  GridFunction u_local;             // PureLocal
  double m1 = 0.0;  // max over [-1,-0.9] of |u_lnl - u_local|
  double m2 = 0.0;  // max over [-1,-0.9] of |u_nonlocal_coupled - u_local|
};

// f = 1 study: the volumetric constraint creates a boundary layer that the
// local-nonlocal-local arrangement removes.
inline BoundaryLayerResult boundary_layer_study(
    double delta, int n_half, KernelKind kind = KernelKind::Constant) {
  const double h = 1.0 / n_half;
  const int r = static_cast<int>(std::lround(delta / h));
  if (std::abs(r * h - delta) > 1e-12)
    throw config_error("boundary layer study: delta must be an integer multiple of h");
  const auto prob = Problem::constant_one();

  BoundaryLayerResult out;
  out.u_nonlocal_coupled = solve_problem(
      build_config(-1.0, 1.0, n_half, Arrangement::nonlocal_local(0.0), kind, r),
      prob);
  out.u_lnl = solve_problem(
      build_config(-1.0, 1.0, n_half,
                   Arrangement::local_nonlocal_local(-0.5, 0.5), kind, r),
      prob);
  out.u_local = solve_problem(
      build_config(-1.0, 1.0, n_half, Arrangement::pure_local(), kind, r), prob);

  const Mesh& mesh = out.u_local.mesh();
  for (int i = 0; i <= mesh.last(); ++i) {
    const double x = mesh.node(i);
    if (x > -0.9) break;
    out.m1 = std::max(out.m1, std::abs(out.u_lnl(i) - out.u_local(i)));
    out.m2 = std::max(out.m2, std::abs(out.u_nonlocal_coupled(i) - out.u_local(i)));
  }
  return out;
}

struct SingularResult {
  GridFunction u_nonlocal;  // PureNonlocal, volumetric layers both sides
  GridFunction u_lnl;
  GridFunction u_local;
  double s0 = 0.0;
  double err_lnl_window = 0.0;    // ||u_lnl - u_nonlocal||_inf over [-0.4, 0.4]
  double err_local_window = 0.0;  // ||u_local - u_nonlocal||_inf over same
};

// Singular forcing f = (1-x^2)(1+x^2)/|x - s0| with s0 = h/2: the coupled
// arrangement tracks the nonlocal solution in the center window better
// than the pure local solution does.
inline SingularResult singular_forcing_study(double delta, int n_half,
                                             double x_a, double x_b,
                                             KernelKind kind = KernelKind::Constant) {
  const double h = 1.0 / n_half;
  const int r = static_cast<int>(std::lround(delta / h));
  if (std::abs(r * h - delta) > 1e-12)
    throw config_error("singular study: delta must be an integer multiple of h");
  SingularResult out;
  out.s0 = 0.5 * h;
  const auto prob = Problem::singular(out.s0);

  out.u_nonlocal = solve_problem(
      build_config(-1.0, 1.0, n_half, Arrangement::pure_nonlocal(), kind, r), prob);
  out.u_lnl = solve_problem(
      build_config(-1.0, 1.0, n_half,
                   Arrangement::local_nonlocal_local(x_a, x_b), kind, r),
      prob);
  out.u_local = solve_problem(
      build_config(-1.0, 1.0, n_half, Arrangement::pure_local(), kind, r), prob);

  const Mesh& mesh = out.u_local.mesh();
  for (int i = 0; i <= mesh.last(); ++i) {
    const double x = mesh.node(i);
    if (x < -0.4 || x > 0.4) continue;
    out.err_lnl_window = std::max(out.err_lnl_window,
                                  std::abs(out.u_lnl(i) - out.u_nonlocal(i)));
    out.err_local_window = std::max(out.err_local_window,
                                    std::abs(out.u_local(i) - out.u_nonlocal(i)));
  }
  return out;
}

struct DeltaSweepRow {
  int ratio = 0;
  double delta = 0.0;
  double err_u = 0.0;
};

// Horizon sweep at fixed fine h: the modeling error scales like delta.
inline std::vector<DeltaSweepRow> delta_sweep(const Problem& prob,
                                              KernelKind kind, int n_half,
                                              const std::vector<int>& ratios) {
  std::vector<DeltaSweepRow> out;
  for (int r : ratios) {
    const auto cfg = build_config(-1.0, 1.0, n_half,
                                  Arrangement::nonlocal_local(0.0), kind, r);
    const auto u = solve_problem(cfg, prob);
    out.push_back({r, cfg.delta(), error_vs_exact(u, prob).err_u});
  }
  return out;
}

}  // namespace qnl
