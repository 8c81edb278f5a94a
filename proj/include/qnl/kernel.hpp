#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "qnl/errors.hpp"
#include "qnl/quadrature.hpp"
#include "qnl/report.hpp"

namespace qnl {

enum class KernelKind { Constant, InverseAbs, Custom };

// Radial kernel gamma_delta with compact support [-delta, delta],
// normalized so the full second moment equals 1 (condition (K), d = 1).
// Partial moments M_p(a,b) = integral_a^b s^p gamma_delta(s) ds are the
// quantity everything downstream consumes; built-ins use closed forms,
// custom kernels fall back to adaptive quadrature.
class Kernel {
 public:
  static Kernel constant(double delta) {
    return Kernel(KernelKind::Constant, delta, nullptr);
  }

  static Kernel inverse_abs(double delta) {
    return Kernel(KernelKind::InverseAbs, delta, nullptr);
  }

  static Kernel custom(double delta, std::function<double(double)> gamma) {
    return Kernel(KernelKind::Custom, delta, std::move(gamma));
  }

  KernelKind kind() const { return kind_; }
  double delta() const { return delta_; }

  // Pointwise gamma_delta(s); zero outside the support. The inverse-abs
  // profile has no value at s = 0 (all scheme uses go through moments).
  double value(double s) const {
    const double r = std::abs(s);
    if (r > delta_) return 0.0;
    switch (kind_) {
      case KernelKind::Constant:
        return 1.5 / (delta_ * delta_ * delta_);
      case KernelKind::InverseAbs:
        if (r == 0.0)
          throw argument_error("inverse_abs kernel has no value at s = 0");
        return 1.0 / (delta_ * delta_ * r);
      case KernelKind::Custom:
        return gamma_(r);
    }
    return 0.0;
  }

  // M_order(a, b) over [a, b] clipped to [0, delta].
  double moment(int order, double a, double b) const {
    if (order < 0 || order > 2)
      throw argument_error("moment: order must be 0, 1 or 2");
    if (a > b) throw argument_error("moment: requires a <= b");
    if (a < 0.0) throw argument_error("moment: requires a >= 0");
    a = std::min(a, delta_);
    b = std::min(b, delta_);
    if (a == b) return 0.0;
    if (kind_ == KernelKind::InverseAbs && order == 0 && a == 0.0)
      throw argument_error(
          "zeroth moment of inverse_abs kernel diverges at the origin");
    switch (kind_) {
      case KernelKind::Constant: {
        const double d3 = delta_ * delta_ * delta_;
        if (order == 2) return (b * b * b - a * a * a) / (2.0 * d3);
        if (order == 1) return 3.0 * (b * b - a * a) / (4.0 * d3);
        return 1.5 * (b - a) / d3;
      }
      case KernelKind::InverseAbs: {
        const double d2 = delta_ * delta_;
        if (order == 2) return (b * b - a * a) / (2.0 * d2);
        if (order == 1) return (b - a) / d2;
        return std::log(b / a) / d2;
      }
      case KernelKind::Custom: {
        return integrate(
            [&](double s) {
              double w = 1.0;
              for (int p = 0; p < order; ++p) w *= s;
              return w * gamma_(s);
            },
            a, b, 1e-12);
      }
    }
    return 0.0;
  }

  double second_moment_total() const { return 2.0 * moment(2, 0.0, delta_); }

  std::string name() const {
    switch (kind_) {
      case KernelKind::Constant: return "constant";
      case KernelKind::InverseAbs: return "inverse_abs";
      case KernelKind::Custom: return "custom";
    }
    return "?";
  }

 private:
  Kernel(KernelKind kind, double delta, std::function<double(double)> gamma)
      : kind_(kind), delta_(delta), gamma_(std::move(gamma)) {
    if (!(delta_ > 0.0)) throw argument_error("kernel requires delta > 0");
  }

  KernelKind kind_;
  double delta_;
  std::function<double(double)> gamma_;
};

inline Kernel make_kernel(KernelKind kind, double delta) {
  switch (kind) {
    case KernelKind::Constant: return Kernel::constant(delta);
    case KernelKind::InverseAbs: return Kernel::inverse_abs(delta);
    default: throw argument_error("custom kernels need an explicit profile");
  }
}

// Condition (K) checks: normalization, nonnegativity, monotonicity on a
// deterministic sample of (0, delta), compact support. Failures are
// report entries, never exceptions. The monotonicity sample starts at
// delta*1e-6 so the (integrable) inverse-abs singularity is admissible.
inline Report validate_kernel(const Kernel& k, double tolerance) {
  Report rep;
  const double m2 = k.second_moment_total();
  rep.add("normalization", std::abs(m2 - 1.0), tolerance,
          std::abs(m2 - 1.0) <= tolerance);

  const int n = 512;
  const double lo = k.delta() * 1e-6;
  const double hi = k.delta() * (1.0 - 1e-12);
  double min_val = 0.0;
  double worst_increase = 0.0;
  double prev = k.value(lo);
  min_val = prev;
  for (int i = 1; i < n; ++i) {
    const double s = lo + (hi - lo) * i / (n - 1.0);
    const double v = k.value(s);
    min_val = std::min(min_val, v);
    worst_increase = std::max(worst_increase, v - prev);
    prev = v;
  }
  rep.add("nonnegativity", min_val, 0.0, min_val >= 0.0);
  rep.add("monotone_nonincreasing", worst_increase, tolerance,
          worst_increase <= tolerance);

  double outside = std::max(std::abs(k.value(k.delta() * 1.0000001)),
                            std::abs(k.value(k.delta() * 2.0)));
  rep.add("compact_support", outside, 0.0, outside == 0.0);
  return rep;
}

}  // namespace qnl
