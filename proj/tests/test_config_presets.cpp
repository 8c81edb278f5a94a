#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "qnl/config.hpp"
#include "qnl/io.hpp"
#include "qnl/presets.hpp"

using qnl::RunConfig;

TEST_CASE("config serialization round-trips", "[config]") {
  RunConfig c;
  c.x_left = -2.0;
  c.x_right = 1.5;
  c.levels = {50, 100, 200};
  c.kernel_type = "inverse_abs";
  c.kernel_ratio = 4;
  c.arrangement_type = "local_nonlocal_local";
  c.x_a = -0.75;
  c.x_b = 0.25;
  c.forcing = "polynomial";
  c.coeffs = {1.0, 0.0, -3.5};
  c.scheme = "direct";
  c.tiling = "paper";
  c.seed = 1234567890123ull;
  c.out = "results/run1";
  CHECK(qnl::parse_config(qnl::serialize(c)) == c);

  RunConfig d;
  d.n_half = 800;
  d.kernel_delta = 0.2;
  d.forcing = "singular";
  d.s0 = 0.000625;
  CHECK(qnl::parse_config(qnl::serialize(d)) == d);
}

TEST_CASE("config parser handles comments and rejects malformed input",
          "[config]") {
  const auto c = qnl::parse_config(
      "# full-line comment\n"
      "\n"
      "  domain.x_left = -2   # trailing comment\n"
      "mesh.levels = 10, 20 ,30\n");
  CHECK(c.x_left == -2.0);
  CHECK(c.levels == std::vector<int>{10, 20, 30});

  CHECK_THROWS_AS(qnl::parse_config("nonsense.key = 3\n"), qnl::config_error);
  CHECK_THROWS_AS(qnl::parse_config("domain.x_left\n"), qnl::config_error);
  CHECK_THROWS_AS(qnl::parse_config("domain.x_left = abc\n"), qnl::config_error);
  CHECK_THROWS_AS(qnl::parse_config("mesh.N = 1.5\n"), qnl::config_error);
}

TEST_CASE("config validation enforces the field contracts", "[config]") {
  RunConfig c;
  c.kernel_ratio = 3;
  CHECK_NOTHROW(qnl::validate(c));

  RunConfig both = c;
  both.kernel_delta = 0.2;
  CHECK_THROWS_AS(qnl::validate(both), qnl::config_error);

  RunConfig neither;
  CHECK_THROWS_AS(qnl::validate(neither), qnl::config_error);

  RunConfig bad_kernel = c;
  bad_kernel.kernel_type = "gaussian";
  CHECK_THROWS_AS(qnl::validate(bad_kernel), qnl::config_error);

  RunConfig bad_arr = c;
  bad_arr.arrangement_type = "sandwich";
  CHECK_THROWS_AS(qnl::validate(bad_arr), qnl::config_error);

  RunConfig bad_scheme = c;
  bad_scheme.scheme = "hybrid";
  CHECK_THROWS_AS(qnl::validate(bad_scheme), qnl::config_error);

  RunConfig poly = c;
  poly.forcing = "polynomial";
  CHECK_THROWS_AS(qnl::validate(poly), qnl::config_error);
  poly.coeffs = {2.0};
  CHECK_NOTHROW(qnl::validate(poly));
}

TEST_CASE("physical horizons resolve to whole cell counts", "[config]") {
  RunConfig c;
  c.kernel_delta = 0.25;
  CHECK(qnl::ratio_from(c, 8) == 2);  // h = 1/8

  c.kernel_delta = 0.3;
  CHECK_THROWS_AS(qnl::ratio_from(c, 8), qnl::config_error);

  RunConfig r;
  r.kernel_ratio = 0;
  CHECK_THROWS_AS(qnl::ratio_from(r, 8), qnl::config_error);
}

TEST_CASE("coupling_from assembles a consistent configuration", "[config]") {
  RunConfig c;
  c.kernel_ratio = 3;
  c.arrangement_type = "nonlocal_local";
  c.x_star = 0.0;
  c.scheme = "direct";
  const auto cfg = qnl::coupling_from(c, 50);
  CHECK(cfg.ratio == 3);
  CHECK(cfg.delta() == Catch::Approx(3.0 / 50.0).epsilon(1e-15));
  CHECK(cfg.arrangement.kind == qnl::ArrangementKind::NonlocalLocal);
  CHECK(cfg.scheme == qnl::SchemeKind::Direct);
  CHECK(cfg.mesh.ghost_left == 3);
  CHECK(cfg.mesh.ghost_right == 0);
}

TEST_CASE("checked-in preset configs match the embedded definitions",
          "[presets]") {
  for (const auto& p : qnl::preset_table()) {
    const auto path = std::string(QNL_SOURCE_DIR) + "/configs/" + p.name + ".cfg";
    INFO(path);
    CHECK(qnl::read_file(path) == p.config_text);
  }
}

TEST_CASE("unknown presets and subcommands are rejected with the known list",
          "[presets]") {
  try {
    qnl::find_preset("nope");
    FAIL("expected config_error");
  } catch (const qnl::config_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("table1") != std::string::npos);
    CHECK(msg.find("weights") != std::string::npos);
  }
  CHECK_THROWS_AS(qnl::run_command("frobnicate", RunConfig{}), qnl::config_error);
}

TEST_CASE("weights preset emits a deterministic curve table", "[presets]") {
  const auto res1 = qnl::run_preset("weights");
  REQUIRE(res1.files.count("weights.csv") == 1);
  const auto& csv = res1.files.at("weights.csv");
  CHECK(csv.rfind("x,omega,omega_prime,a\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 402);

  const auto res2 = qnl::run_preset("weights");
  CHECK(res1.files == res2.files);
}

TEST_CASE("convergence command needs a grid ratio, not a physical horizon",
          "[presets]") {
  RunConfig c;
  c.levels = {16, 32};
  c.kernel_delta = 0.25;
  CHECK_THROWS_AS(qnl::cmd_convergence(c), qnl::config_error);
}

TEST_CASE("solve command requires a mesh size", "[presets]") {
  RunConfig c;
  c.kernel_ratio = 2;
  CHECK_THROWS_AS(qnl::cmd_solve(c), qnl::config_error);
}

TEST_CASE("patch-test command reports a passing residual", "[presets]") {
  RunConfig c;
  c.n_half = 16;
  c.kernel_ratio = 3;
  const auto res = qnl::cmd_patch_test(c);
  CHECK(res.check_pass);
  REQUIRE(res.files.count("patch_test.json") == 1);
  const auto j = qnl::ordered_json::parse(res.files.at("patch_test.json"));
  CHECK(j.at("pass").get<bool>());
  CHECK(j.at("max_residual").get<double>() <= j.at("tolerance").get<double>());
}

namespace {

qnl::ConvergenceReport synthetic_report(const qnl::TableTargets& t, double scale) {
  qnl::ConvergenceReport rep;
  const int levels[] = {50, 100, 200, 400, 800};
  for (size_t i = 0; i < 5; ++i) {
    qnl::ConvergenceRow row;
    row.n_half = levels[i];
    row.h = 1.0 / levels[i];
    row.delta = 3.0 * row.h;
    row.err_u = scale * t.u[i];
    row.err_grad = scale * t.grad[i];
    if (i) {
      row.order_u = std::log2(rep.rows.back().err_u / row.err_u);
      row.order_grad = std::log2(rep.rows.back().err_grad / row.err_grad);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace

TEST_CASE("table check gates: primary, fallback, neither", "[presets]") {
  const auto& t = qnl::table1_targets();

  const auto exact = qnl::check_against_table(synthetic_report(t, 1.0), t);
  CHECK(exact.primary);
  CHECK(exact.pass());

  // same first-order shape, wrong constants: only the fallback gate holds
  const auto shifted = qnl::check_against_table(synthetic_report(t, 1.2), t);
  CHECK_FALSE(shifted.primary);
  CHECK(shifted.fallback);
  CHECK(shifted.pass());

  qnl::ConvergenceReport stalled;
  for (int n : {50, 100, 200, 400, 800}) {
    qnl::ConvergenceRow row;
    row.n_half = n;
    row.h = 1.0 / n;
    row.err_u = 1e-2;
    row.err_grad = 1e-2;
    stalled.rows.push_back(row);
  }
  const auto bad = qnl::check_against_table(stalled, t);
  CHECK_FALSE(bad.pass());
  CHECK(bad.note == "neither gate holds");
}
