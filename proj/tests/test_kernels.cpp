#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "qnl/kernel.hpp"
#include "qnl/quadrature.hpp"

using qnl::Kernel;
using qnl::KernelKind;

TEST_CASE("closed-form moments match quadrature", "[kernel]") {
  const double delta = 0.37;
  const auto cases = {
      std::pair{Kernel::constant(delta),
                std::function<double(double)>([=](double s) {
                  return oracle::gamma_constant(delta, s);
                })},
      std::pair{Kernel::inverse_abs(delta),
                std::function<double(double)>([=](double s) {
                  return oracle::gamma_inverse_abs(delta, s);
                })},
  };
  for (const auto& [k, gamma] : cases) {
    for (int p : {0, 1, 2}) {
      for (auto [a, b] : {std::pair{0.1, 0.3}, {0.05, delta}, {0.2, 0.25}}) {
        const double got = k.moment(p, a, b);
        const double want = oracle::moment(gamma, p, a, b);
        INFO(k.name() << " p=" << p << " [" << a << "," << b << "]");
        CHECK(got == Catch::Approx(want).margin(1e-12));
      }
    }
  }
}

TEST_CASE("moment bounds clip to the support", "[kernel]") {
  const double delta = 0.2;
  const auto k = Kernel::constant(delta);
  CHECK(k.moment(2, 0.0, 2.0 * delta) ==
        Catch::Approx(k.moment(2, 0.0, delta)).epsilon(1e-15));
  CHECK(k.moment(1, delta, 5.0) == 0.0);
  CHECK(k.moment(1, 0.05, 0.05) == 0.0);  // empty interval
  CHECK_THROWS_AS(k.moment(2, -0.1, 0.1), qnl::argument_error);
  CHECK_THROWS_AS(k.moment(2, 0.15, 0.1), qnl::argument_error);
  CHECK_THROWS_AS(k.moment(3, 0.0, 0.1), qnl::argument_error);
}

TEST_CASE("moment is additive over adjacent intervals", "[kernel]") {
  const double delta = 0.31;
  for (auto k : {Kernel::constant(delta), Kernel::inverse_abs(delta)}) {
    for (int p : {0, 1, 2}) {
      const double a = 0.02, b = 0.17, c = 0.29;
      const double whole = k.moment(p, a, c);
      const double split = k.moment(p, a, b) + k.moment(p, b, c);
      INFO(k.name() << " p=" << p);
      CHECK(whole == Catch::Approx(split).epsilon(1e-12));
    }
  }
}

TEST_CASE("tabulated moment values", "[kernel]") {
  // delta-independent second moment of the half support
  for (double delta : {0.1, 0.5, 2.0})
    CHECK(Kernel::constant(delta).moment(2, 0.0, delta) ==
          Catch::Approx(0.5).epsilon(1e-15));
  const double h = 0.05, delta = 2.0 * h;
  CHECK(Kernel::constant(delta).moment(2, h, 2.0 * h) ==
        Catch::Approx(7.0 / 16.0).epsilon(1e-14));
  CHECK(Kernel::inverse_abs(delta).moment(1, 0.0, delta) ==
        Catch::Approx(1.0 / delta).epsilon(1e-14));
}

TEST_CASE("second moment normalization", "[kernel]") {
  for (double delta : {0.05, 0.2, 1.0, 3.7}) {
    CHECK(std::abs(Kernel::constant(delta).second_moment_total() - 1.0) <= 1e-12);
    CHECK(std::abs(Kernel::inverse_abs(delta).second_moment_total() - 1.0) <= 1e-12);
  }
}

TEST_CASE("custom kernel goes through quadrature", "[kernel]") {
  const double delta = 0.2;
  // Re-declared constant profile; moments must agree with the closed form.
  const auto k = Kernel::custom(
      delta, [=](double s) { return oracle::gamma_constant(delta, s); });
  const auto ref = Kernel::constant(delta);
  CHECK(std::abs(k.second_moment_total() - 1.0) <= 1e-8);
  for (int p : {0, 1, 2})
    CHECK(k.moment(p, 0.05, 0.17) ==
          Catch::Approx(ref.moment(p, 0.05, 0.17)).epsilon(1e-8));
}

TEST_CASE("degenerate custom kernels fail validation, not construction", "[kernel]") {
  const auto zero = Kernel::custom(0.2, [](double) { return 0.0; });
  CHECK(zero.second_moment_total() == 0.0);
  CHECK_FALSE(qnl::validate_kernel(zero, 1e-8).all_pass());

  const double delta = 0.2;
  const auto doubled = Kernel::custom(
      delta, [=](double) { return 3.0 / (delta * delta * delta); });
  const auto rep = qnl::validate_kernel(doubled, 1e-8);
  CHECK_FALSE(rep.all_pass());
  for (const auto& e : rep.entries)
    if (e.check == "normalization") {
      CHECK_FALSE(e.pass);
      CHECK(e.value == Catch::Approx(1.0).epsilon(1e-7));  // |2 - 1|
    }
}

TEST_CASE("inverse-abs singularities are guarded", "[kernel]") {
  const auto k = Kernel::inverse_abs(0.2);
  CHECK_THROWS_AS(k.value(0.0), qnl::argument_error);
  CHECK_THROWS_AS(k.moment(0, 0.0, 0.1), qnl::argument_error);
  CHECK(k.moment(1, 0.0, 0.1) > 0.0);  // integrable
  CHECK(k.moment(2, 0.0, 0.2) == Catch::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("kernel values and support", "[kernel]") {
  const double delta = 0.4;
  const auto kc = Kernel::constant(delta);
  CHECK(kc.value(0.1) == Catch::Approx(3.0 / (2.0 * delta * delta * delta)));
  CHECK(kc.value(delta * 1.01) == 0.0);
  const auto ki = Kernel::inverse_abs(delta);
  CHECK(ki.value(0.1) == Catch::Approx(1.0 / (delta * delta * 0.1)));
  CHECK(ki.value(-0.1) == Catch::Approx(ki.value(0.1)));  // even in s
  CHECK(ki.value(delta * 2.0) == 0.0);
}

TEST_CASE("validate_kernel passes the built-ins", "[kernel]") {
  for (auto k : {Kernel::constant(0.2), Kernel::inverse_abs(0.2)}) {
    const auto rep = qnl::validate_kernel(k, 1e-12);
    INFO(k.name());
    CHECK(rep.all_pass());
  }
}

TEST_CASE("validate_kernel flags violations as entries", "[kernel]") {
  const double delta = 0.2;
  // Increasing profile with the right second moment: fails monotonicity only.
  const auto k = Kernel::custom(delta, [=](double s) {
    return 2.5 * s * s / std::pow(delta, 5) * (s < delta ? 1.0 : 0.0);
  });
  const auto rep = qnl::validate_kernel(k, 1e-8);
  CHECK_FALSE(rep.all_pass());
  bool norm_ok = false, mono_bad = false;
  for (const auto& e : rep.entries) {
    if (e.check == "normalization") norm_ok = e.pass;
    if (e.check == "monotone_nonincreasing") mono_bad = !e.pass;
  }
  CHECK(norm_ok);
  CHECK(mono_bad);
}

TEST_CASE("adaptive quadrature handles kinks and tight tolerances", "[kernel]") {
  const double got = qnl::integrate([](double x) { return std::abs(x - 0.3); },
                                    0.0, 1.0, 1e-13);
  CHECK(got == Catch::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-12));
  const double poly = qnl::integrate([](double x) { return x * x * x; }, -1.0,
                                     2.0, 1e-13);
  CHECK(poly == Catch::Approx(15.0 / 4.0).epsilon(1e-12));
}
