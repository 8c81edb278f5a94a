#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qnl {

// Deterministic random source. Doubles are derived from raw engine words
// with a fixed bit recipe instead of std::uniform_real_distribution, whose
// output differs across standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Box-Muller; deterministic given the engine stream.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(), u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    const double m = std::sqrt(-2.0 * std::log(u1));
    spare_ = m * std::sin(6.283185307179586 * u2);
    have_spare_ = true;
    return m * std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qnl
