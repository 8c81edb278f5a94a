#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qnl/experiments.hpp"

using qnl::Arrangement;
using qnl::GridFunction;
using qnl::KernelKind;
using qnl::Problem;

TEST_CASE("discrete gradient is exact on quadratics", "[experiments]") {
  const auto mesh = qnl::Mesh(-1.0, 1.0, 20, 0, 0);
  const auto u = GridFunction::sample(mesh, [](double x) { return x * x - 0.3 * x; });
  const auto g = qnl::gradient(u);
  for (int i = 0; i <= mesh.last(); ++i) {
    const double x = mesh.node(i);
    CHECK(g(i) == Catch::Approx(2.0 * x - 0.3).margin(1e-12));
  }

  const auto flat = GridFunction::sample(mesh, [](double) { return 5.0; });
  const auto gf = qnl::gradient(flat);
  for (int i = 0; i <= mesh.last(); ++i) CHECK(gf(i) == 0.0);
}

TEST_CASE("discrete gradient carries the h^2 cubic defect", "[experiments]") {
  const auto mesh = qnl::Mesh(-1.0, 1.0, 10, 0, 0);
  const auto u = GridFunction::sample(mesh, [](double x) { return x * x * x; });
  const auto g = qnl::gradient(u);
  // central difference of x^3 at 0 is h^2, the exact derivative is 0
  CHECK(g(10) == Catch::Approx(0.01).margin(1e-15));
}

TEST_CASE("local solver is exact for quadratic solutions", "[experiments]") {
  const auto cfg = qnl::build_config(-1.0, 1.0, 32, Arrangement::pure_local(),
                                     KernelKind::Constant, 1);
  const auto prob = Problem::constant_one();
  const auto u = qnl::solve_problem(cfg, prob);
  const auto e = qnl::error_vs_exact(u, prob);
  CHECK(e.err_u <= 1e-11);
  CHECK(e.err_grad <= 1e-11);
}

TEST_CASE("solutions honor prescribed boundary and ghost values", "[experiments]") {
  const auto cfg = qnl::build_config(-1.0, 1.0, 16, Arrangement::nonlocal_local(0.0),
                                     KernelKind::Constant, 3);
  const auto u = qnl::solve_problem(cfg, Problem::quartic());
  CHECK(u(0) == 0.0);
  CHECK(u(cfg.mesh.last()) == 0.0);
  CHECK(u(cfg.mesh.lowest()) == 0.0);
  CHECK(u(16) != 0.0);
}

TEST_CASE("zero forcing yields the zero solution", "[experiments]") {
  const auto cfg = qnl::build_config(-1.0, 1.0, 16, Arrangement::nonlocal_local(0.0),
                                     KernelKind::InverseAbs, 2);
  const auto u = qnl::solve_problem(cfg, Problem::polynomial({0.0}));
  for (int i = cfg.mesh.lowest(); i <= cfg.mesh.highest(); ++i) CHECK(u(i) == 0.0);
}

TEST_CASE("local discretization converges at second order", "[experiments]") {
  const auto rep = qnl::convergence_study(Problem::quartic(), KernelKind::Constant,
                                          1, {25, 50, 100, 200},
                                          Arrangement::pure_local());
  CHECK(rep.lsq_order_u() == Catch::Approx(2.0).margin(0.05));
  CHECK(rep.lsq_order_grad() == Catch::Approx(2.0).margin(0.05));
}

TEST_CASE("coupled discretization converges at first order", "[experiments]") {
  const auto rep = qnl::convergence_study(Problem::quartic(), KernelKind::Constant,
                                          3, {50, 100, 200});
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].err_u > rep.rows[1].err_u);
  CHECK(rep.rows[1].err_u > rep.rows[2].err_u);
  CHECK(rep.lsq_order_u() > 0.7);
  CHECK(rep.lsq_order_u() < 1.3);
}

TEST_CASE("convergence studies require an exact solution", "[experiments]") {
  CHECK_THROWS_AS(qnl::convergence_study(Problem::singular(0.01),
                                         KernelKind::Constant, 3, {50}),
                  qnl::config_error);
}

TEST_CASE("truncation error vanishes on quadratics away from the interface",
          "[experiments]") {
  const auto cfg = qnl::build_config(-1.0, 1.0, 100, Arrangement::nonlocal_local(0.0),
                                     KernelKind::Constant, 3);
  const auto t = qnl::truncation_error(
      cfg, [](double x) { return x * x; }, [](double) { return 2.0; });
  CHECK(t.max_nonlocal <= 1e-10);
  CHECK(t.max_local <= 1e-10);
  // the effective diffusion differs from 1 inside the blending band
  CHECK(t.max_transitional > 0.1);
  CHECK(t.max_transitional < 6.0);
}

TEST_CASE("truncation error splits by regime for the quartic", "[experiments]") {
  const auto cfg = qnl::build_config(-1.0, 1.0, 200, Arrangement::nonlocal_local(0.0),
                                     KernelKind::Constant, 3);
  const auto t = qnl::truncation_error(
      cfg, [](double x) { const double s = 1.0 - x * x; return s * s; },
      [](double x) { return 12.0 * x * x - 4.0; });
  CHECK(t.max_nonlocal <= 1e-3);
  CHECK(t.max_local <= 1e-3);
  // O(1) interfacial truncation, yet first-order convergence overall
  CHECK(t.max_transitional > 0.8);
  CHECK(t.max_transitional < 4.8);
}

TEST_CASE("random nonnegative forcings keep the solution nonnegative",
          "[experiments]") {
  const auto cfg = qnl::build_config(-1.0, 1.0, 32, Arrangement::nonlocal_local(0.0),
                                     KernelKind::Constant, 3);
  const auto rep = qnl::max_principle_check(cfg, 20, 42);
  CHECK(rep.all_pass());
  bool saw_ratio = false, saw_inverse = false;
  for (const auto& e : rep.entries) {
    if (e.check == "min_u_over_norm_worst") saw_ratio = true;
    if (e.check == "inverse_min_entry") {
      saw_inverse = true;
      CHECK(e.value > 0.0);
    }
  }
  CHECK(saw_ratio);
  CHECK(saw_inverse);
}

TEST_CASE("interface placement controls the volumetric boundary layer",
          "[experiments]") {
  const auto res = qnl::boundary_layer_study(0.2, 100);
  CHECK(res.m1 < res.m2);
  CHECK(res.m2 > 1e-4);
  CHECK_THROWS_AS(qnl::boundary_layer_study(0.213, 100), qnl::config_error);
}

TEST_CASE("coupled arrangement tracks the nonlocal solution near a singular pole",
          "[experiments]") {
  const auto res = qnl::singular_forcing_study(0.1, 100, -0.5, 0.5);
  CHECK(res.err_lnl_window < res.err_local_window);
}

TEST_CASE("model error scales linearly in the horizon", "[experiments]") {
  const auto rows = qnl::delta_sweep(Problem::quartic(), KernelKind::Constant,
                                     800, {2, 4, 8});
  REQUIRE(rows.size() == 3);
  const double q1 = rows[1].err_u / rows[0].err_u;
  const double q2 = rows[2].err_u / rows[1].err_u;
  CHECK(q1 > 4.0 / 3.0);
  CHECK(q1 < 3.0);
  CHECK(q2 > 4.0 / 3.0);
  CHECK(q2 < 3.0);
}

TEST_CASE("direct coupling stalls while compatible coupling converges",
          "[experiments]") {
  const auto rep = qnl::compare_direct_vs_compatible(
      Problem::quartic(), KernelKind::InverseAbs, 3, 0.5, {50, 100});
  REQUIRE(rep.compatible.rows.size() == 2);
  REQUIRE(rep.direct.rows.size() == 2);
  CHECK(rep.direct.rows[1].err_grad > 2.0 * rep.compatible.rows[1].err_grad);
}
