#pragma once

#include <algorithm>
#include <cmath>

#include "qnl/errors.hpp"
#include "qnl/kernel.hpp"

namespace qnl {

// QNL local-energy weight omega_delta, its derivative, and the effective
// interfacial diffusion a(x). All three are moment expressions:
//   omega(x)  = 2 M2(0, min(x,delta)) + 2x M1(min(x,delta), delta)
//   omega'(x) = 2 M1(min(x,delta), delta)
//   a(x)      = 1 - M2(x, delta) + 2x M1(x, delta)
// so custom kernels work unchanged; the closed forms for the two
// built-ins serve as test oracles only.
class WeightEvaluator {
 public:
  explicit WeightEvaluator(Kernel kernel) : k_(std::move(kernel)) {}

  const Kernel& kernel() const { return k_; }

  double omega(double x) const {
    if (x < 0.0) throw argument_error("omega: requires x >= 0");
    const double xc = std::min(x, k_.delta());
    return 2.0 * k_.moment(2, 0.0, xc) + 2.0 * x * k_.moment(1, xc, k_.delta());
  }

  double omega_prime(double x) const {
    if (x < 0.0) throw argument_error("omega_prime: requires x >= 0");
    const double xc = std::min(x, k_.delta());
    return 2.0 * k_.moment(1, xc, k_.delta());
  }

  // Defined on [0, delta] only, per the transitional-band expansion.
  double effective_diffusion(double x) const {
    if (x < 0.0 || x > k_.delta())
      throw argument_error("effective_diffusion: requires 0 <= x <= delta");
    return 1.0 - k_.moment(2, x, k_.delta()) +
           2.0 * x * k_.moment(1, x, k_.delta());
  }

 private:
  Kernel k_;
};

}  // namespace qnl
