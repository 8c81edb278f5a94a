#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qnl/errors.hpp"
#include "qnl/kernel.hpp"
#include "qnl/mesh.hpp"

namespace qnl {

enum class ArrangementKind { PureNonlocal, PureLocal, NonlocalLocal, LocalNonlocalLocal };

// Which model lives where on [x_left, x_right]. Interfaces must coincide
// with grid nodes.
struct Arrangement {
  ArrangementKind kind = ArrangementKind::PureLocal;
  double x_star = 0.0;  // NonlocalLocal interface
  double x_a = 0.0, x_b = 0.0;  // LocalNonlocalLocal interfaces

  static Arrangement pure_nonlocal() { return {ArrangementKind::PureNonlocal, 0, 0, 0}; }
  static Arrangement pure_local() { return {ArrangementKind::PureLocal, 0, 0, 0}; }
  static Arrangement nonlocal_local(double x_star) {
    return {ArrangementKind::NonlocalLocal, x_star, 0, 0};
  }
  static Arrangement local_nonlocal_local(double x_a, double x_b) {
    if (!(x_a < x_b))
      throw config_error("local_nonlocal_local: requires x_a < x_b");
    return {ArrangementKind::LocalNonlocalLocal, 0, x_a, x_b};
  }

  std::string name() const {
    switch (kind) {
      case ArrangementKind::PureNonlocal: return "pure_nonlocal";
      case ArrangementKind::PureLocal: return "pure_local";
      case ArrangementKind::NonlocalLocal: return "nonlocal_local";
      case ArrangementKind::LocalNonlocalLocal: return "local_nonlocal_local";
    }
    return "?";
  }
};

enum class Regime { Nonlocal, Transitional, Local };

// Per-node classification. Transitional nodes carry ell = distance to the
// interface in grid cells (1..r) and the orientation of the adjacent
// nonlocal region.
struct NodeRegime {
  Regime regime = Regime::Local;
  int ell = 0;
  bool nonlocal_on_left = true;
};

enum class SchemeKind { Compatible, Direct };
enum class TilingRule { Exact, Paper };

struct CouplingConfig {
  Mesh mesh;
  Arrangement arrangement;
  Kernel kernel;
  int ratio = 1;  // r, with delta = r*h exactly
  SchemeKind scheme = SchemeKind::Compatible;
  TilingRule tiling = TilingRule::Exact;

  double delta() const { return ratio * mesh.h(); }
};

namespace detail {

// Snap a coordinate to its grid index; reject off-grid interfaces.
inline int grid_index(const Mesh& mesh, double x, const char* what) {
  const double t = (x - mesh.x_left) / mesh.h();
  const int i = static_cast<int>(std::lround(t));
  if (std::abs(t - i) > 1e-9 * std::max(1.0, std::abs(t)))
    throw config_error(std::string(what) + " at " + std::to_string(x) +
                       " does not coincide with a grid node");
  return i;
}

}  // namespace detail

// Builds the mesh (with the ghost layers the arrangement needs) and
// validates interface placement against the horizon.
inline Mesh make_mesh(double x_left, double x_right, int n_half,
                      const Arrangement& arr, int ratio) {
  int gl = 0, gr = 0;
  switch (arr.kind) {
    case ArrangementKind::PureNonlocal: gl = gr = ratio; break;
    case ArrangementKind::NonlocalLocal: gl = ratio; break;
    default: break;
  }
  return Mesh(x_left, x_right, n_half, gl, gr);
}

// Node regimes per the case decomposition. NonlocalLocal: x <= x* nonlocal,
// x* < x <= x*+delta transitional, beyond local. LocalNonlocalLocal mirrors
// the transitional band on the left interface.
inline std::vector<NodeRegime> classify(const CouplingConfig& cfg) {
  const Mesh& mesh = cfg.mesh;
  const int r = cfg.ratio;
  const int n = mesh.last();
  std::vector<NodeRegime> out(static_cast<size_t>(n) + 1);

  auto set_all = [&](Regime reg) {
    for (auto& nr : out) nr = {reg, 0, true};
  };

  switch (cfg.arrangement.kind) {
    case ArrangementKind::PureNonlocal: set_all(Regime::Nonlocal); break;
    case ArrangementKind::PureLocal: set_all(Regime::Local); break;
    case ArrangementKind::NonlocalLocal: {
      const int istar = detail::grid_index(mesh, cfg.arrangement.x_star, "interface");
      if (istar < 0 || istar > n)
        throw config_error("interface lies outside the domain");
      for (int i = 0; i <= n; ++i) {
        if (i <= istar)
          out[i] = {Regime::Nonlocal, 0, true};
        else if (i <= istar + r)
          out[i] = {Regime::Transitional, i - istar, true};
        else
          out[i] = {Regime::Local, 0, true};
      }
      break;
    }
    case ArrangementKind::LocalNonlocalLocal: {
      const int ia = detail::grid_index(mesh, cfg.arrangement.x_a, "interface x_a");
      const int ib = detail::grid_index(mesh, cfg.arrangement.x_b, "interface x_b");
      if (ia < 0 || ib > n || ia >= ib)
        throw config_error("interfaces x_a, x_b must satisfy x_left <= x_a < x_b <= x_right");
      if (ia - r < 0 || ib + r > n)
        throw config_error(
            "nonlocal region must sit at least one horizon away from the boundary "
            "(x_a - delta >= x_left and x_b + delta <= x_right)");
      for (int i = 0; i <= n; ++i) {
        if (i >= ia && i <= ib)
          out[i] = {Regime::Nonlocal, 0, true};
        else if (i >= ia - r && i < ia)
          out[i] = {Regime::Transitional, ia - i, false};
        else if (i > ib && i <= ib + r)
          out[i] = {Regime::Transitional, i - ib, true};
        else
          out[i] = {Regime::Local, 0, true};
      }
      break;
    }
  }
  return out;
}

// Distance from a point to the nonlocal region (0 inside it, +inf if none).
inline double distance_to_nonlocal(const Arrangement& arr, double x) {
  switch (arr.kind) {
    case ArrangementKind::PureNonlocal: return 0.0;
    case ArrangementKind::PureLocal:
      return std::numeric_limits<double>::infinity();
    case ArrangementKind::NonlocalLocal: return std::max(0.0, x - arr.x_star);
    case ArrangementKind::LocalNonlocalLocal:
      return std::max({0.0, arr.x_a - x, x - arr.x_b});
  }
  return 0.0;
}

}  // namespace qnl
