#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qnl/config.hpp"
#include "qnl/experiments.hpp"
#include "qnl/io.hpp"
#include "qnl/linalg.hpp"
#include "qnl/weights.hpp"

namespace qnl {

using FileMap = std::map<std::string, std::string>;

// Outcome of one CLI command: files to emit plus the --check verdict.
struct CommandResult {
  FileMap files;
  bool check_pass = true;
  std::vector<std::string> notes;
};

namespace detail {

inline std::string curve_csv(const GridFunction& u, const Problem* prob) {
  Csv csv({"x", "u", "u_exact_or_blank", "grad_u"});
  const Mesh& mesh = u.mesh();
  const auto g = gradient(u);
  const bool exact = prob && prob->has_exact();
  for (int i = 0; i <= mesh.last(); ++i) {
    const double x = mesh.node(i);
    csv.row({fmt_sci(x), fmt_sci(u(i)), exact ? fmt_sci(prob->exact(x)) : "",
             fmt_sci(g(i))});
  }
  return csv.str();
}

inline std::string convergence_csv(const ConvergenceReport& rep) {
  Csv csv({"h", "delta", "err_u_Linf", "order_u", "err_grad_Linf", "order_grad"});
  for (size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    csv.row({fmt_sci(r.h), fmt_sci(r.delta), fmt_sci(r.err_u),
             i == 0 ? "" : fmt_sci(r.order_u), fmt_sci(r.err_grad),
             i == 0 ? "" : fmt_sci(r.order_grad)});
  }
  return csv.str();
}

inline int required_n(const RunConfig& c, const char* who) {
  if (!c.n_half) throw config_error(std::string(who) + ": mesh.N required");
  if (*c.n_half < 2) throw config_error(std::string(who) + ": mesh.N must be >= 2");
  return *c.n_half;
}

inline std::vector<int> required_levels(const RunConfig& c, const char* who) {
  if (!c.levels.empty()) return c.levels;
  if (c.n_half) return {*c.n_half};
  throw config_error(std::string(who) + ": mesh.levels (or mesh.N) required");
}

inline int required_ratio(const RunConfig& c, const char* who) {
  if (!c.kernel_ratio)
    throw config_error(std::string(who) +
                       ": refinement varies h, so kernel.ratio is required");
  if (*c.kernel_ratio < 1)
    throw config_error(std::string(who) + ": kernel.ratio must be >= 1");
  return *c.kernel_ratio;
}

inline double required_delta(const RunConfig& c, const char* who) {
  if (c.kernel_delta) return *c.kernel_delta;
  if (c.kernel_ratio && c.n_half)
    return *c.kernel_ratio * (c.x_right - c.x_left) / (2.0 * *c.n_half);
  throw config_error(std::string(who) + ": kernel.delta (or kernel.ratio with mesh.N) required");
}

}  // namespace detail

// Tables the convergence --check mode compares against. The primary gate
// is a 10% match of every entry plus final orders >= 0.95; the fallback
// gate (first-order behavior without the tabulated constants) is a
// least-squares order in [0.9, 1.05] plus per-refinement error halving
// within 15%.
struct TableTargets {
  std::array<double, 5> u;
  std::array<double, 5> grad;
};

inline const TableTargets& table1_targets() {
  static const TableTargets t{
      {1.56e-2, 8.07e-3, 4.10e-3, 2.06e-3, 1.04e-3},
      {1.91e-2, 9.61e-3, 4.82e-3, 2.42e-3, 1.21e-3}};
  return t;
}

inline const TableTargets& table2_targets() {
  static const TableTargets t{
      {1.19e-2, 6.19e-3, 3.14e-3, 1.59e-3, 7.97e-4},
      {1.80e-2, 9.13e-3, 4.59e-3, 2.30e-3, 1.15e-3}};
  return t;
}

struct TableCheck {
  bool primary = false;
  bool fallback = false;
  std::string note;
  bool pass() const { return primary || fallback; }
};

inline TableCheck check_against_table(const ConvergenceReport& rep,
                                      const TableTargets& targets) {
  TableCheck out;
  const auto& rows = rep.rows;
  if (rows.size() != targets.u.size()) {
    out.note = "level count differs from the reference table";
    return out;
  }

  bool within = true;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (std::abs(rows[i].err_u - targets.u[i]) > 0.10 * targets.u[i]) within = false;
    if (std::abs(rows[i].err_grad - targets.grad[i]) > 0.10 * targets.grad[i])
      within = false;
  }
  const bool final_orders =
      rows.back().order_u >= 0.95 && rows.back().order_grad >= 0.95;
  out.primary = within && final_orders;

  bool halving = true;
  for (size_t i = 1; i < rows.size(); ++i) {
    const double ru = rows[i - 1].err_u / rows[i].err_u;
    const double rg = rows[i - 1].err_grad / rows[i].err_grad;
    if (ru < 1.7 || ru > 2.3 || rg < 1.7 || rg > 2.3) halving = false;
  }
  const double lu = rep.lsq_order_u(), lg = rep.lsq_order_grad();
  const bool orders_ok = lu >= 0.9 && lu <= 1.05 && lg >= 0.9 && lg <= 1.05;
  out.fallback = halving && orders_ok;

  out.note = out.primary ? "primary gate (10% match + final orders)"
             : out.fallback
                 ? "fallback gate (order + halving); table constants differ"
                 : "neither gate holds";
  return out;
}

inline CommandResult cmd_solve(const RunConfig& c) {
  const int n = detail::required_n(c, "solve");
  const auto cfg = coupling_from(c, n);
  const auto prob = problem_from(c);
  const auto u = solve_problem(cfg, prob);
  CommandResult out;
  out.files["solution.csv"] = detail::curve_csv(u, &prob);
  return out;
}

inline CommandResult cmd_convergence(const RunConfig& c,
                                     const std::string& table = "") {
  validate(c);
  const auto levels = detail::required_levels(c, "convergence");
  const int r = detail::required_ratio(c, "convergence");
  const auto rep = convergence_study(problem_from(c), kernel_kind_from(c), r,
                                     levels, arrangement_from(c),
                                     scheme_from(c), tiling_from(c));
  CommandResult out;
  out.files["convergence.csv"] = detail::convergence_csv(rep);
  if (table == "table1" || table == "table2") {
    const auto check = check_against_table(
        rep, table == "table1" ? table1_targets() : table2_targets());
    out.check_pass = check.pass();
    out.notes.push_back(table + " check: " + check.note);
  } else if (rep.rows.size() >= 2) {
    const double lu = rep.lsq_order_u();
    out.check_pass = lu >= 0.9 && lu <= 1.05;
    out.notes.push_back("observed order " + fmt_sci(lu) + " vs [0.9, 1.05]");
  }
  return out;
}

inline CommandResult cmd_patch_test(const RunConfig& c) {
  const int n = detail::required_n(c, "patch-test");
  const auto cfg = coupling_from(c, n);
  const double F = 3.0, cc = 7.0;
  const auto res = patch_test(cfg, F, cc);
  ordered_json j;
  j["arrangement"] = cfg.arrangement.name();
  j["kernel"] = cfg.kernel.name();
  j["ratio"] = cfg.ratio;
  j["N"] = n;
  j["F"] = F;
  j["c"] = cc;
  j["max_residual"] = res.max_residual;
  j["tolerance"] = res.tolerance;
  j["pass"] = res.pass;
  CommandResult out;
  out.files["patch_test.json"] = dump_json(j);
  out.check_pass = res.pass;
  out.notes.push_back("patch residual " + fmt_sci(res.max_residual) + " vs " +
                      fmt_sci(res.tolerance));
  return out;
}

inline CommandResult cmd_properties(const RunConfig& c) {
  const int n = detail::required_n(c, "properties");
  const auto cfg = coupling_from(c, n);
  const auto a = assemble(cfg);
  const double defect = symmetry_defect(a);
  const auto pd = positive_definiteness_check(a, 50, c.seed);

  ordered_json j;
  j["arrangement"] = cfg.arrangement.name();
  j["kernel"] = cfg.kernel.name();
  j["ratio"] = cfg.ratio;
  j["N"] = n;
  j["unknowns"] = a.unknowns();
  j["seed"] = c.seed;
  j["symmetry_defect"] = defect;
  bool pass = true;
  for (const auto& e : pd.entries) {
    j[e.check] = e.value;
    pass = pass && e.pass;
  }
  if (a.unknowns() <= 512) {
    const auto inv = inverse_positivity_check(a);
    for (const auto& e : inv.entries) {
      j[e.check] = e.value;
      j[e.check + "_threshold"] = e.threshold;
      pass = pass && e.pass;
    }
  }
  j["pass"] = pass;
  CommandResult out;
  out.files["properties.json"] = dump_json(j);
  out.check_pass = pass;
  out.notes.push_back("symmetry defect " + fmt_sci(defect) +
                      " (diagnostic, not asserted)");
  return out;
}

inline CommandResult cmd_compare_direct(const RunConfig& c) {
  validate(c);
  if (c.arrangement_type != "nonlocal_local")
    throw config_error("compare-direct: arrangement.type must be nonlocal_local");
  const auto levels = detail::required_levels(c, "compare-direct");
  const int r = detail::required_ratio(c, "compare-direct");
  const auto rep = compare_direct_vs_compatible(problem_from(c),
                                                kernel_kind_from(c), r,
                                                c.x_star, levels);
  Csv csv({"h", "delta", "err_u_compatible", "err_grad_compatible",
           "err_u_direct", "err_grad_direct"});
  for (size_t i = 0; i < rep.compatible.rows.size(); ++i) {
    const auto& a = rep.compatible.rows[i];
    const auto& b = rep.direct.rows[i];
    csv.row({fmt_sci(a.h), fmt_sci(a.delta), fmt_sci(a.err_u),
             fmt_sci(a.err_grad), fmt_sci(b.err_u), fmt_sci(b.err_grad)});
  }
  CommandResult out;
  out.files["compare_direct.csv"] = csv.str();

  const double order = rep.compatible.lsq_order_grad();
  bool order_ok = order >= 0.9 && order <= 1.1;
  const ConvergenceRow* first = nullptr;
  const ConvergenceRow* last = nullptr;
  for (const auto& row : rep.direct.rows) {
    if (row.n_half == 100) first = &row;
    if (row.n_half == 800) last = &row;
  }
  bool witness = false;
  if (first && last) witness = last->err_grad >= 0.5 * first->err_grad;
  out.check_pass = order_ok && witness;
  out.notes.push_back("compatible gradient order " + fmt_sci(order));
  if (first && last)
    out.notes.push_back("direct gradient error N=100 " + fmt_sci(first->err_grad) +
                        ", N=800 " + fmt_sci(last->err_grad));
  else
    out.notes.push_back("levels must include N=100 and N=800 for the witness");
  return out;
}

inline CommandResult cmd_boundary_layer(const RunConfig& c) {
  validate(c);
  const int n = detail::required_n(c, "boundary-layer");
  const double delta = detail::required_delta(c, "boundary-layer");
  const auto kind = kernel_kind_from(c);
  const auto base = boundary_layer_study(delta, n, kind);
  const auto prob = Problem::constant_one();

  CommandResult out;
  out.files["boundary_layer_nonlocal.csv"] =
      detail::curve_csv(base.u_nonlocal_coupled, nullptr);
  out.files["boundary_layer_lnl.csv"] = detail::curve_csv(base.u_lnl, nullptr);
  out.files["boundary_layer_local.csv"] = detail::curve_csv(base.u_local, &prob);

  ordered_json j;
  j["kernel"] = make_kernel(kind, delta).name();
  j["delta"] = delta;
  j["h"] = 1.0 / n;
  j["m1"] = base.m1;
  j["m2"] = base.m2;
  const bool removed = base.m1 < base.m2;
  j["m1_lt_m2"] = removed;

  // Horizon halving along the asymptotically compatible path (r fixed,
  // h and delta halve together; interfaces stay put) and, for contrast,
  // at fixed h (r halves). The compatible ratio is the asserted one.
  bool halving_ok = true;
  j["delta_halved"] = 0.5 * delta;
  {
    const auto half = boundary_layer_study(0.5 * delta, 2 * n, kind);
    const double ratio = base.m1 / half.m1;
    j["m1_halved_matched_ratio"] = half.m1;
    j["m1_ratio_matched"] = ratio;
    halving_ok = ratio >= 1.5 && ratio <= 2.5;
    out.notes.push_back("m1 halving ratio (matched r) " + fmt_sci(ratio));
  }
  try {
    const auto half = boundary_layer_study(0.5 * delta, n, kind);
    j["m1_halved_fixed_h"] = half.m1;
    j["m1_ratio_fixed_h"] = base.m1 / half.m1;
  } catch (const config_error&) {
    // delta/2 not a whole number of cells at this h; skip the contrast run
  }
  j["pass"] = removed && halving_ok;
  out.files["boundary_layer_metrics.json"] = dump_json(j);
  out.check_pass = removed && halving_ok;
  out.notes.push_back("m1 " + fmt_sci(base.m1) + ", m2 " + fmt_sci(base.m2));
  return out;
}

inline CommandResult cmd_singular(const RunConfig& c) {
  validate(c);
  const int n = detail::required_n(c, "singular");
  const double delta = detail::required_delta(c, "singular");
  const auto kind = kernel_kind_from(c);
  const auto res = singular_forcing_study(delta, n, c.x_a, c.x_b, kind);

  CommandResult out;
  out.files["singular_nonlocal.csv"] = detail::curve_csv(res.u_nonlocal, nullptr);
  out.files["singular_lnl.csv"] = detail::curve_csv(res.u_lnl, nullptr);
  out.files["singular_local.csv"] = detail::curve_csv(res.u_local, nullptr);

  ordered_json j;
  j["kernel"] = make_kernel(kind, delta).name();
  j["delta"] = delta;
  j["h"] = 1.0 / n;
  j["s0"] = res.s0;
  j["window"] = "[-0.4, 0.4]";
  j["err_lnl_window"] = res.err_lnl_window;
  j["err_local_window"] = res.err_local_window;
  const bool ok = res.err_lnl_window <= res.err_local_window;
  j["pass"] = ok;
  out.files["singular_metrics.json"] = dump_json(j);
  out.check_pass = ok;
  out.notes.push_back("window errors: lnl " + fmt_sci(res.err_lnl_window) +
                      ", local " + fmt_sci(res.err_local_window));
  return out;
}

inline CommandResult cmd_weights(const RunConfig& c) {
  validate(c);
  const double delta = detail::required_delta(c, "weights");
  const auto k = make_kernel(kernel_kind_from(c), delta);
  WeightEvaluator w(k);
  Csv csv({"x", "omega", "omega_prime", "a"});
  const int samples = 400;
  for (int i = 0; i <= samples; ++i) {
    const double x = 2.0 * delta * i / samples;
    const double a = x <= delta ? w.effective_diffusion(x) : 1.0;
    csv.row({fmt_sci(x), fmt_sci(w.omega(x)), fmt_sci(w.omega_prime(x)),
             fmt_sci(a)});
  }
  CommandResult out;
  out.files["weights.csv"] = csv.str();
  return out;
}

inline CommandResult cmd_assemble(const RunConfig& c, bool dump) {
  const int n = detail::required_n(c, "assemble");
  const auto cfg = coupling_from(c, n);
  const auto a = assemble(cfg);
  CommandResult out;
  if (!dump) {
    out.notes.push_back("assembled " + std::to_string(a.unknowns()) +
                        " unknowns, bandwidth " + std::to_string(cfg.ratio));
    return out;
  }
  std::string text;
  text += "# unknowns = " + std::to_string(a.unknowns()) + "\n";
  text += "# h = " + fmt_sci(cfg.mesh.h()) + "\n";
  text += "# delta = " + fmt_sci(cfg.delta()) + "\n";
  for (int k = 0; k < a.rows_count(); ++k) {
    const auto& row = a.row(k);
    text += "i=" + std::to_string(row.node) + " x=" + fmt_sci(cfg.mesh.node(row.node));
    switch (row.regime) {
      case Regime::Nonlocal: text += " regime=nonlocal |"; break;
      case Regime::Transitional: text += " regime=transitional |"; break;
      case Regime::Local: text += " regime=local |"; break;
    }
    for (const auto& [node, coef] : row.terms)
      text += " " + std::to_string(node) + ":" + fmt_sci(coef);
    text += "\n";
  }
  out.files["matrix.txt"] = text;
  return out;
}

// Checked-in experiment presets. config_text is the single source of
// truth; the files under configs/ must match byte for byte.
struct Preset {
  std::string name;
  std::string subcommand;
  std::string config_text;
};

inline const std::vector<Preset>& preset_table() {
  static const std::vector<Preset> presets = {
      {"table1", "convergence",
       "# Refinement sweep, constant kernel, delta = 3h, quartic forcing.\n"
       "domain.x_left = -1\n"
       "domain.x_right = 1\n"
       "mesh.levels = 50,100,200,400,800\n"
       "kernel.type = constant\n"
       "kernel.ratio = 3\n"
       "arrangement.type = nonlocal_local\n"
       "arrangement.x_star = 0\n"
       "problem.forcing = quartic\n"
       "scheme = compatible\n"
       "tiling = exact\n"
       "seed = 0\n"},
      {"table2", "convergence",
       "# Refinement sweep, inverse-abs kernel, delta = 3h, quartic forcing.\n"
       "domain.x_left = -1\n"
       "domain.x_right = 1\n"
       "mesh.levels = 50,100,200,400,800\n"
       "kernel.type = inverse_abs\n"
       "kernel.ratio = 3\n"
       "arrangement.type = nonlocal_local\n"
       "arrangement.x_star = 0\n"
       "problem.forcing = quartic\n"
       "scheme = compatible\n"
       "tiling = exact\n"
       "seed = 0\n"},
      {"dvsc", "compare-direct",
       "# Direct vs compatible coupling at interface x* = 1/2, where the\n"
       "# exact gradient is nonzero and the direct variant stalls.\n"
       "domain.x_left = -1\n"
       "domain.x_right = 1\n"
       "mesh.levels = 50,100,200,400,800\n"
       "kernel.type = inverse_abs\n"
       "kernel.ratio = 3\n"
       "arrangement.type = nonlocal_local\n"
       "arrangement.x_star = 0.5\n"
       "problem.forcing = quartic\n"
       "seed = 0\n"},
      {"boundary_layer", "boundary-layer",
       "# Volumetric-constraint boundary layer and its removal by the\n"
       "# local-nonlocal-local arrangement; f = 1.\n"
       "domain.x_left = -1\n"
       "domain.x_right = 1\n"
       "mesh.N = 800\n"
       "kernel.type = constant\n"
       "kernel.delta = 0.2\n"
       "arrangement.type = local_nonlocal_local\n"
       "arrangement.x_a = -0.5\n"
       "arrangement.x_b = 0.5\n"
       "problem.forcing = constant\n"
       "seed = 0\n"},
      {"singular", "singular",
       "# Near-grid singular forcing; the coupled arrangement tracks the\n"
       "# fully nonlocal solution in the center window.\n"
       "domain.x_left = -1\n"
       "domain.x_right = 1\n"
       "mesh.N = 800\n"
       "kernel.type = constant\n"
       "kernel.delta = 0.2\n"
       "arrangement.type = local_nonlocal_local\n"
       "arrangement.x_a = -0.5\n"
       "arrangement.x_b = 0.5\n"
       "problem.forcing = singular\n"
       "seed = 0\n"},
      {"weights", "weights",
       "# Weight function and effective diffusion curves.\n"
       "kernel.type = constant\n"
       "kernel.delta = 0.2\n"},
  };
  return presets;
}

inline const Preset& find_preset(const std::string& name) {
  for (const auto& p : preset_table())
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : preset_table()) known += " " + p.name;
  throw config_error("unknown preset '" + name + "'; available:" + known);
}

inline CommandResult run_command(const std::string& subcommand,
                                 const RunConfig& c,
                                 const std::string& preset_name = "") {
  if (subcommand == "solve") return cmd_solve(c);
  if (subcommand == "convergence") return cmd_convergence(c, preset_name);
  if (subcommand == "patch-test") return cmd_patch_test(c);
  if (subcommand == "properties") return cmd_properties(c);
  if (subcommand == "compare-direct") return cmd_compare_direct(c);
  if (subcommand == "boundary-layer") return cmd_boundary_layer(c);
  if (subcommand == "singular") return cmd_singular(c);
  if (subcommand == "weights") return cmd_weights(c);
  if (subcommand == "assemble") return cmd_assemble(c, true);
  throw config_error("unknown subcommand '" + subcommand + "'");
}

inline CommandResult run_preset(const std::string& name) {
  const auto& p = find_preset(name);
  return run_command(p.subcommand, parse_config(p.config_text), p.name);
}

}  // namespace qnl
