#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "qnl/arrangement.hpp"
#include "qnl/banded.hpp"
#include "qnl/errors.hpp"
#include "qnl/kernel.hpp"
#include "qnl/mesh.hpp"

namespace qnl {

// One full stencil row of L^qnl: coefficients keyed by global node index,
// including boundary/ghost columns that are later eliminated.
struct StencilRow {
  int node = 0;
  Regime regime = Regime::Local;
  std::vector<std::pair<int, double>> terms;  // sorted by node index

  double coefficient(int node_index) const {
    for (const auto& [n, c] : terms)
      if (n == node_index) return c;
    return 0.0;
  }

  double sum() const {
    double s = 0.0;
    for (const auto& [n, c] : terms) s += c;
    return s;
  }

  double abs_sum() const {
    double s = 0.0;
    for (const auto& [n, c] : terms) s += std::abs(c);
    return s;
  }

  // Applies the stencil to nodal samples of a callable.
  template <class F>
  double apply_to(const F& f, const Mesh& mesh) const {
    double s = 0.0;
    for (const auto& [n, c] : terms) s += c * f(mesh.node(n));
    return s;
  }
};

namespace detail {

using RowMap = std::map<int, double>;

inline void add_term(RowMap& row, int node, double v) { row[node] += v; }

// Pure nonlocal row: 2 sum_j M2(cell_j)/(jh)^2 (u_{i+j} - 2u_i + u_{i-j}).
inline RowMap row_nonlocal(int i, int r, double h, const Kernel& k) {
  RowMap row;
  for (int j = 1; j <= r; ++j) {
    const double c = 2.0 * k.moment(2, (j - 1) * h, j * h) / ((j * h) * (j * h));
    add_term(row, i + j, c);
    add_term(row, i - j, c);
    add_term(row, i, -2.0 * c);
  }
  return row;
}

// Transitional row in the standard orientation (nonlocal region on the
// LEFT), at distance ell*h from the interface. The nonlocal integral over
// (xi, delta) is split per cell into a centered diffusion part and a
// one-sided convection part; the local remainder contributes a forward
// convection difference (pointing away from the nonlocal region) plus an
// omega-weighted central second difference. Cells tile (ell*h, delta)
// exactly for TilingRule::Exact (j = ell+1..r); TilingRule::Paper keeps
// the literal lower index j = ell, which breaks the exact patch test and
// exists only for comparison.
inline RowMap row_transitional(int i, int ell, int r, double h,
                               const Kernel& k, TilingRule tiling,
                               SchemeKind scheme) {
  RowMap row;
  const double xi = ell * h;
  const double delta = r * h;
  const int jlo = (tiling == TilingRule::Exact) ? ell + 1 : std::max(ell, 1);
  for (int j = jlo; j <= r; ++j) {
    const double a = (j - 1) * h, b = j * h;
    if (scheme == SchemeKind::Compatible) {
      const double m2 = k.moment(2, a, b) / ((j * h) * (j * h));
      const double m1 = k.moment(1, a, b) / (j * h);
      add_term(row, i + j, m2 - m1);
      add_term(row, i - j, m2 + m1);
      add_term(row, i, -2.0 * m2);
    } else {
      const double m0 = 2.0 * k.moment(0, a, b);
      add_term(row, i - j, m0);
      add_term(row, i, -m0);
    }
  }
  const double c1 = 2.0 * k.moment(1, xi, delta) / h;
  add_term(row, i + 1, c1);
  add_term(row, i, -c1);
  const double w = 2.0 * k.moment(2, 0.0, xi) + 2.0 * xi * k.moment(1, xi, delta);
  add_term(row, i + 1, w / (h * h));
  add_term(row, i - 1, w / (h * h));
  add_term(row, i, -2.0 * w / (h * h));
  return row;
}

inline RowMap row_local(int i, double h) {
  RowMap row;
  add_term(row, i + 1, 1.0 / (h * h));
  add_term(row, i - 1, 1.0 / (h * h));
  add_term(row, i, -2.0 / (h * h));
  return row;
}

// Mirrored orientation (nonlocal region on the RIGHT): reflect offsets
// about the node. This is algebraically the flipped-convection form of
// the standard row.
inline RowMap reflect(const RowMap& row, int center) {
  RowMap out;
  for (const auto& [n, c] : row) out[2 * center - n] += c;
  return out;
}

}  // namespace detail

// The assembled matrix A = -L^qnl over interior unknowns i = 1..2N-1,
// in banded form with half-bandwidth r, plus the full stencils (with
// boundary/ghost columns) needed for right-hand-side folding, residual
// evaluation and dumps.
class OperatorMatrix {
 public:
  OperatorMatrix(BandedMatrix core, std::vector<StencilRow> rows, Mesh mesh)
      : core_(std::move(core)), rows_(std::move(rows)), mesh_(std::move(mesh)) {}

  const BandedMatrix& core() const { return core_; }
  const Mesh& mesh() const { return mesh_; }
  int unknowns() const { return core_.size(); }

  // Row k corresponds to node k+1.
  const StencilRow& row(int k) const { return rows_[static_cast<size_t>(k)]; }
  int rows_count() const { return static_cast<int>(rows_.size()); }

  Regime row_regime(int k) const { return rows_[static_cast<size_t>(k)].regime; }

  // Max over rows of the full-stencil absolute sum (includes eliminated
  // boundary/ghost columns).
  double infinity_norm() const {
    double best = 0.0;
    for (const auto& r : rows_) best = std::max(best, r.abs_sum());
    return best;
  }

  // A*u over interior rows, taking prescribed boundary/ghost values from u.
  GridFunction apply(const GridFunction& u) const {
    GridFunction out(mesh_);
    for (const auto& r : rows_) {
      double s = 0.0;
      for (const auto& [n, c] : r.terms) s += c * u(n);
      out(r.node) = s;
    }
    return out;
  }

  // rhs_k = f(x_{k+1}) - sum over eliminated columns A_{ij} g_j.
  template <class F>
  std::vector<double> fold_rhs(const F& forcing, const GridFunction& g) const {
    std::vector<double> rhs(static_cast<size_t>(unknowns()));
    for (int k = 0; k < unknowns(); ++k) {
      const auto& r = rows_[static_cast<size_t>(k)];
      double s = forcing(mesh_.node(r.node));
      for (const auto& [n, c] : r.terms)
        if (n < 1 || n > mesh_.last() - 1) s -= c * g(n);
      rhs[static_cast<size_t>(k)] = s;
    }
    return rhs;
  }

 private:
  BandedMatrix core_;
  std::vector<StencilRow> rows_;
  Mesh mesh_;
};

// Assembles A = -L^qnl for the configured scheme. Every referenced node
// must exist (in-domain or in a ghost layer); a transitional or nonlocal
// stencil that exits the available range is a configuration error.
inline OperatorMatrix assemble(const CouplingConfig& cfg) {
  const Mesh& mesh = cfg.mesh;
  const int r = cfg.ratio;
  const double h = mesh.h();
  if (r < 1) throw config_error("assemble: requires ratio r >= 1");
  const auto regimes = classify(cfg);

  const int n_unknowns = mesh.last() - 1;
  BandedMatrix core(n_unknowns, r, r);
  std::vector<StencilRow> rows;
  rows.reserve(static_cast<size_t>(n_unknowns));

  for (int i = 1; i <= mesh.last() - 1; ++i) {
    const NodeRegime& nr = regimes[static_cast<size_t>(i)];
    detail::RowMap lrow;
    switch (nr.regime) {
      case Regime::Nonlocal:
        lrow = detail::row_nonlocal(i, r, h, cfg.kernel);
        break;
      case Regime::Transitional:
        lrow = detail::row_transitional(i, nr.ell, r, h, cfg.kernel,
                                        cfg.tiling, cfg.scheme);
        if (!nr.nonlocal_on_left) lrow = detail::reflect(lrow, i);
        break;
      case Regime::Local:
        lrow = detail::row_local(i, h);
        break;
    }

    StencilRow srow;
    srow.node = i;
    srow.regime = nr.regime;
    for (const auto& [n, c] : lrow) {
      if (n < mesh.lowest() || n > mesh.highest())
        throw config_error(
            "stencil at node " + std::to_string(i) +
            " references node " + std::to_string(n) +
            " outside the domain/ghost range; the nonlocal region sits too "
            "close to a boundary for this horizon");
      srow.terms.emplace_back(n, -c);  // A = -L
      if (n >= 1 && n <= mesh.last() - 1) core.add(i - 1, n - 1, -c);
    }
    rows.push_back(std::move(srow));
  }
  return OperatorMatrix(std::move(core), std::move(rows), mesh);
}

}  // namespace qnl
