#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qnl/errors.hpp"

namespace qnl {

enum class ForcingKind { Quartic, Constant, Singular, Polynomial };

// Benchmark problems: a forcing term plus, where available, the exact
// solution of the LOCAL limit problem -u'' = f with zero boundary values
// (the convergence studies measure distance to the local solution).
class Problem {
 public:
  static Problem quartic() {
    Problem p;
    p.kind_ = ForcingKind::Quartic;
    return p;
  }

  static Problem constant_one() {
    Problem p;
    p.kind_ = ForcingKind::Constant;
    return p;
  }

  static Problem singular(double s0) {
    Problem p;
    p.kind_ = ForcingKind::Singular;
    p.s0_ = s0;
    return p;
  }

  // f(x) = sum_k coeffs[k] x^k, no exact solution attached.
  static Problem polynomial(std::vector<double> coeffs) {
    Problem p;
    p.kind_ = ForcingKind::Polynomial;
    p.f_coeffs_ = std::move(coeffs);
    return p;
  }

  // Manufactured from a polynomial solution u (given in ascending
  // coefficients): f = -u''. The caller is responsible for u vanishing at
  // the domain endpoints.
  static Problem manufactured_poly(std::vector<double> u_coeffs) {
    Problem p;
    p.kind_ = ForcingKind::Polynomial;
    p.u_coeffs_ = std::move(u_coeffs);
    const auto& u = p.u_coeffs_;
    if (u.size() >= 3) {
      p.f_coeffs_.resize(u.size() - 2);
      for (size_t k = 2; k < u.size(); ++k)
        p.f_coeffs_[k - 2] = -static_cast<double>(k * (k - 1)) * u[k];
    } else {
      p.f_coeffs_ = {0.0};
    }
    p.has_exact_poly_ = true;
    return p;
  }

  ForcingKind kind() const { return kind_; }
  double s0() const { return s0_; }
  const std::vector<double>& coefficients() const { return f_coeffs_; }

  double forcing(double x) const {
    switch (kind_) {
      case ForcingKind::Quartic: return -12.0 * x * x + 4.0;
      case ForcingKind::Constant: return 1.0;
      case ForcingKind::Singular: {
        const double d = std::abs(x - s0_);
        if (d == 0.0)
          throw argument_error("singular forcing evaluated at its pole");
        return (1.0 - x * x) * (1.0 + x * x) / d;
      }
      case ForcingKind::Polynomial: return eval_poly(f_coeffs_, x);
    }
    return 0.0;
  }

  bool has_exact() const {
    return kind_ == ForcingKind::Quartic || kind_ == ForcingKind::Constant ||
           has_exact_poly_;
  }

  double exact(double x) const {
    switch (kind_) {
      case ForcingKind::Quartic: {
        const double t = 1.0 - x * x;
        return t * t;
      }
      case ForcingKind::Constant: return 0.5 * (1.0 - x * x);
      case ForcingKind::Polynomial:
        if (has_exact_poly_) return eval_poly(u_coeffs_, x);
        break;
      default: break;
    }
    throw argument_error("problem has no exact local solution");
  }

  double exact_grad(double x) const {
    switch (kind_) {
      case ForcingKind::Quartic: return 4.0 * x * x * x - 4.0 * x;
      case ForcingKind::Constant: return -x;
      case ForcingKind::Polynomial:
        if (has_exact_poly_) {
          double s = 0.0;
          for (size_t k = 1; k < u_coeffs_.size(); ++k)
            s += static_cast<double>(k) * u_coeffs_[k] * std::pow(x, double(k - 1));
          return s;
        }
        break;
      default: break;
    }
    throw argument_error("problem has no exact local solution");
  }

  std::string name() const {
    switch (kind_) {
      case ForcingKind::Quartic: return "quartic";
      case ForcingKind::Constant: return "constant";
      case ForcingKind::Singular: return "singular";
      case ForcingKind::Polynomial: return "polynomial";
    }
    return "?";
  }

 private:
  static double eval_poly(const std::vector<double>& c, double x) {
    double s = 0.0;
    for (size_t k = c.size(); k-- > 0;) s = s * x + c[k];
    return s;
  }

  ForcingKind kind_ = ForcingKind::Quartic;
  double s0_ = 0.0;
  std::vector<double> f_coeffs_;
  std::vector<double> u_coeffs_;
  bool has_exact_poly_ = false;
};

}  // namespace qnl
