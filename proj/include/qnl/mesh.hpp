#pragma once

#include <cstddef>
#include <vector>

#include "qnl/errors.hpp"

namespace qnl {

// Uniform grid with 2N subintervals on [x_left, x_right] and optional
// ghost nodes extending the same spacing beyond either boundary (the
// volumetric-constraint layer). Node i runs over -ghost_left .. 2N+ghost_right.
struct Mesh {
  double x_left = -1.0;
  double x_right = 1.0;
  int n_half = 1;      // N; interior unknowns are i = 1 .. 2N-1
  int ghost_left = 0;
  int ghost_right = 0;

  Mesh() = default;
  Mesh(double xl, double xr, int n, int gl = 0, int gr = 0)
      : x_left(xl), x_right(xr), n_half(n), ghost_left(gl), ghost_right(gr) {
    if (!(x_right > x_left)) throw config_error("mesh: requires x_right > x_left");
    if (n_half < 1) throw config_error("mesh: requires N >= 1");
    if (ghost_left < 0 || ghost_right < 0)
      throw config_error("mesh: ghost counts must be nonnegative");
  }

  double h() const { return (x_right - x_left) / (2.0 * n_half); }
  int last() const { return 2 * n_half; }   // index of the right endpoint
  double node(int i) const { return x_left + i * h(); }
  int lowest() const { return -ghost_left; }
  int highest() const { return last() + ghost_right; }
  int total_nodes() const { return highest() - lowest() + 1; }
};

// Nodal values over the full grid including ghosts. Boundary and ghost
// slots carry prescribed data; interior slots carry unknowns/solutions.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(const Mesh& mesh)
      : mesh_(mesh), values_(static_cast<size_t>(mesh.total_nodes()), 0.0) {}

  template <class F>
  static GridFunction sample(const Mesh& mesh, const F& f) {
    GridFunction g(mesh);
    for (int i = mesh.lowest(); i <= mesh.highest(); ++i)
      g(i) = f(mesh.node(i));
    return g;
  }

  const Mesh& mesh() const { return mesh_; }

  double& operator()(int i) { return values_[index(i)]; }
  double operator()(int i) const { return values_[index(i)]; }

  const std::vector<double>& raw() const { return values_; }

 private:
  size_t index(int i) const {
    if (i < mesh_.lowest() || i > mesh_.highest())
      throw argument_error("grid function index out of range");
    return static_cast<size_t>(i - mesh_.lowest());
  }

  Mesh mesh_;
  std::vector<double> values_;
};

}  // namespace qnl
