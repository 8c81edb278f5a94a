#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qnl/arrangement.hpp"
#include "qnl/errors.hpp"
#include "qnl/kernel.hpp"
#include "qnl/problems.hpp"

namespace qnl {

// Flat key=value run description. '#' starts a comment, blank lines are
// ignored, keys are dotted. serialize() followed by parse_config() gives
// back an identical value.
struct RunConfig {
  double x_left = -1.0;
  double x_right = 1.0;
  std::optional<int> n_half;
  std::vector<int> levels;
  std::string kernel_type = "constant";
  std::optional<double> kernel_delta;
  std::optional<int> kernel_ratio;
  std::string arrangement_type = "nonlocal_local";
  double x_star = 0.0;
  double x_a = -0.5;
  double x_b = 0.5;
  std::string forcing = "quartic";
  double s0 = 0.0;
  std::vector<double> coeffs;
  std::string scheme = "compatible";
  std::string tiling = "exact";
  std::uint64_t seed = 0;
  std::string out;

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw config_error("");
    return d;
  } catch (...) {
    throw config_error("config: bad numeric value for " + key + ": '" + v + "'");
  }
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const long long n = std::stoll(v, &pos);
    if (pos != v.size()) throw config_error("");
    return n;
  } catch (...) {
    throw config_error("config: bad integer value for " + key + ": '" + v + "'");
  }
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(v);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) +
                         ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));

    if (key == "domain.x_left") c.x_left = detail::parse_double(key, val);
    else if (key == "domain.x_right") c.x_right = detail::parse_double(key, val);
    else if (key == "mesh.N") c.n_half = static_cast<int>(detail::parse_int(key, val));
    else if (key == "mesh.levels") {
      c.levels.clear();
      for (const auto& s : detail::split_list(val))
        c.levels.push_back(static_cast<int>(detail::parse_int(key, s)));
    } else if (key == "kernel.type") c.kernel_type = val;
    else if (key == "kernel.delta") c.kernel_delta = detail::parse_double(key, val);
    else if (key == "kernel.ratio") c.kernel_ratio = static_cast<int>(detail::parse_int(key, val));
    else if (key == "arrangement.type") c.arrangement_type = val;
    else if (key == "arrangement.x_star") c.x_star = detail::parse_double(key, val);
    else if (key == "arrangement.x_a") c.x_a = detail::parse_double(key, val);
    else if (key == "arrangement.x_b") c.x_b = detail::parse_double(key, val);
    else if (key == "problem.forcing") c.forcing = val;
    else if (key == "problem.s0") c.s0 = detail::parse_double(key, val);
    else if (key == "problem.coeffs") {
      c.coeffs.clear();
      for (const auto& s : detail::split_list(val))
        c.coeffs.push_back(detail::parse_double(key, s));
    } else if (key == "scheme") c.scheme = val;
    else if (key == "tiling") c.tiling = val;
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(detail::parse_int(key, val));
    else if (key == "out") c.out = val;
    else throw config_error("config: unknown key '" + key + "'");
  }
  return c;
}

inline std::string serialize(const RunConfig& c) {
  std::ostringstream os;
  os << "domain.x_left = " << detail::fmt_g17(c.x_left) << "\n";
  os << "domain.x_right = " << detail::fmt_g17(c.x_right) << "\n";
  if (c.n_half) os << "mesh.N = " << *c.n_half << "\n";
  if (!c.levels.empty()) {
    os << "mesh.levels = ";
    for (size_t i = 0; i < c.levels.size(); ++i)
      os << (i ? "," : "") << c.levels[i];
    os << "\n";
  }
  os << "kernel.type = " << c.kernel_type << "\n";
  if (c.kernel_delta) os << "kernel.delta = " << detail::fmt_g17(*c.kernel_delta) << "\n";
  if (c.kernel_ratio) os << "kernel.ratio = " << *c.kernel_ratio << "\n";
  os << "arrangement.type = " << c.arrangement_type << "\n";
  os << "arrangement.x_star = " << detail::fmt_g17(c.x_star) << "\n";
  os << "arrangement.x_a = " << detail::fmt_g17(c.x_a) << "\n";
  os << "arrangement.x_b = " << detail::fmt_g17(c.x_b) << "\n";
  os << "problem.forcing = " << c.forcing << "\n";
  os << "problem.s0 = " << detail::fmt_g17(c.s0) << "\n";
  if (!c.coeffs.empty()) {
    os << "problem.coeffs = ";
    for (size_t i = 0; i < c.coeffs.size(); ++i)
      os << (i ? "," : "") << detail::fmt_g17(c.coeffs[i]);
    os << "\n";
  }
  os << "scheme = " << c.scheme << "\n";
  os << "tiling = " << c.tiling << "\n";
  os << "seed = " << c.seed << "\n";
  if (!c.out.empty()) os << "out = " << c.out << "\n";
  return os.str();
}

inline void validate(const RunConfig& c) {
  if (!(c.x_left < c.x_right))
    throw config_error("config: domain.x_left must be below domain.x_right");
  if (c.kernel_delta.has_value() == c.kernel_ratio.has_value())
    throw config_error("config: exactly one of kernel.delta / kernel.ratio required");
  if (c.kernel_type != "constant" && c.kernel_type != "inverse_abs")
    throw config_error("config: unknown kernel.type '" + c.kernel_type + "'");
  if (c.arrangement_type != "pure_nonlocal" && c.arrangement_type != "pure_local" &&
      c.arrangement_type != "nonlocal_local" &&
      c.arrangement_type != "local_nonlocal_local")
    throw config_error("config: unknown arrangement.type '" + c.arrangement_type + "'");
  if (c.forcing != "quartic" && c.forcing != "constant" && c.forcing != "singular" &&
      c.forcing != "polynomial")
    throw config_error("config: unknown problem.forcing '" + c.forcing + "'");
  if (c.scheme != "compatible" && c.scheme != "direct")
    throw config_error("config: scheme must be 'compatible' or 'direct'");
  if (c.tiling != "exact" && c.tiling != "paper")
    throw config_error("config: tiling must be 'exact' or 'paper'");
  if (c.forcing == "polynomial" && c.coeffs.empty())
    throw config_error("config: problem.forcing = polynomial needs problem.coeffs");
}

inline KernelKind kernel_kind_from(const RunConfig& c) {
  return c.kernel_type == "constant" ? KernelKind::Constant : KernelKind::InverseAbs;
}

inline Arrangement arrangement_from(const RunConfig& c) {
  if (c.arrangement_type == "pure_nonlocal") return Arrangement::pure_nonlocal();
  if (c.arrangement_type == "pure_local") return Arrangement::pure_local();
  if (c.arrangement_type == "nonlocal_local")
    return Arrangement::nonlocal_local(c.x_star);
  return Arrangement::local_nonlocal_local(c.x_a, c.x_b);
}

inline Problem problem_from(const RunConfig& c) {
  if (c.forcing == "quartic") return Problem::quartic();
  if (c.forcing == "constant") return Problem::constant_one();
  if (c.forcing == "singular") return Problem::singular(c.s0);
  return Problem::polynomial(c.coeffs);
}

inline SchemeKind scheme_from(const RunConfig& c) {
  return c.scheme == "compatible" ? SchemeKind::Compatible : SchemeKind::Direct;
}

inline TilingRule tiling_from(const RunConfig& c) {
  return c.tiling == "exact" ? TilingRule::Exact : TilingRule::Paper;
}

// Resolve the horizon/grid ratio for a particular N. A delta given in
// physical units must land on a whole number of cells.
inline int ratio_from(const RunConfig& c, int n_half) {
  if (c.kernel_ratio) {
    if (*c.kernel_ratio < 1) throw config_error("config: kernel.ratio must be >= 1");
    return *c.kernel_ratio;
  }
  const double h = (c.x_right - c.x_left) / (2.0 * n_half);
  const double rr = *c.kernel_delta / h;
  const int r = static_cast<int>(std::lround(rr));
  if (r < 1 || std::abs(rr - r) > 1e-9 * std::max(1.0, rr))
    throw config_error("config: kernel.delta = " + detail::fmt_g17(*c.kernel_delta) +
                       " is not a whole number of cells at N = " +
                       std::to_string(n_half));
  return r;
}

inline CouplingConfig coupling_from(const RunConfig& c, int n_half) {
  validate(c);
  const auto arr = arrangement_from(c);
  const int r = ratio_from(c, n_half);
  Mesh mesh = make_mesh(c.x_left, c.x_right, n_half, arr, r);
  return CouplingConfig{mesh, arr, make_kernel(kernel_kind_from(c), r * mesh.h()),
                        r, scheme_from(c), tiling_from(c)};
}

}  // namespace qnl
