#include <doctest.h>

#include <cmath>
#include <random>

#include "hillwave/error.hpp"
#include "hillwave/profile.hpp"

using namespace hillwave;

TEST_SUITE("profile") {
  TEST_CASE("constant profile has zero potential") {
    const PeriodicProfile p = presets::minkowski();
    CHECK(p.is_constant());
    CHECK(p.R(0.37).value == 1.0);
    CHECK(p.potential_q(2, 0.37) == 0.0);
    CHECK(p.log_derivative(0.2) == 0.0);
  }

  TEST_CASE("non-positive profiles are rejected") {
    CHECK_THROWS_AS(PeriodicProfile::make(1.0, {1.5}), Error);
    try {
      (void)PeriodicProfile::make(1.0, {0.0, 1.2});
      FAIL("expected NonPositiveProfile");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonPositiveProfile);
    }
    CHECK_THROWS_AS(PeriodicProfile::make(-1.0, {}), Error);
    // r0 > sum |r_k| is sufficient but not necessary.
    const PeriodicProfile p = PeriodicProfile::make(1.0, {0.6, 0.5});
    CHECK_FALSE(p.sufficient_positivity());
    CHECK(p.min_sampled() > 0.0);
  }

  TEST_CASE("periodicity and R'(0) = 0") {
    const PeriodicProfile p = PeriodicProfile::make(1.0, {0.3, -0.1, 0.05});
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
      const double t = u(rng);
      CHECK(p.R(t + 1.0).value == doctest::Approx(p.R(t).value).epsilon(1e-13));
      CHECK(p.R(t + 1.0).d1 == doctest::Approx(p.R(t).d1).epsilon(1e-12));
    }
    CHECK(std::abs(p.R(0.0).d1) < 1e-15);
    CHECK(std::abs(p.R(3.0).d1) < 1e-12);
  }

  TEST_CASE("jets match direct cosine evaluation and finite differences") {
    const std::vector<double> c{0.3, -0.1, 0.05};
    const PeriodicProfile p = PeriodicProfile::make(1.2, c);
    const double w = 2.0 * M_PI;
    for (double t : {0.0, 0.13, 0.5, 0.77, 2.41}) {
      double r = 1.2;
      double r1 = 0.0;
      double r2 = 0.0;
      for (std::size_t k = 1; k <= c.size(); ++k) {
        r += c[k - 1] * std::cos(w * k * t);
        r1 -= c[k - 1] * w * k * std::sin(w * k * t);
        r2 -= c[k - 1] * w * w * k * k * std::cos(w * k * t);
      }
      const Jet j = p.R(t);
      CHECK(j.value == doctest::Approx(r).epsilon(1e-13));
      CHECK(j.d1 == doctest::Approx(r1).epsilon(1e-11));
      CHECK(j.d2 == doctest::Approx(r2).epsilon(1e-11));
      const double h = 1e-5;
      const Jet a = p.alpha(t);
      CHECK(a.value == doctest::Approx(1.0 / (r * r)).epsilon(1e-13));
      CHECK(a.d1 == doctest::Approx((p.alpha(t + h).value - p.alpha(t - h).value) / (2 * h)).epsilon(1e-7));
      CHECK(a.d2 == doctest::Approx((p.alpha(t + h).d1 - p.alpha(t - h).d1) / (2 * h)).epsilon(1e-7));
    }
  }

  TEST_CASE("potential q equals minus the R-form bracket of the w-equation") {
    const PeriodicProfile p = presets::cosine(0.3);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n : {1, 2, 3}) {
      for (int i = 0; i < 20; ++i) {
        const double t = u(rng);
        const Jet r = p.R(t);
        const double dn = n;
        const double bracket = -(dn / 2) * r.d2 / r.value + (dn / 2) * (1 - dn / 2) * std::pow(r.d1 / r.value, 2);
        CHECK(p.potential_q(n, t) == doctest::Approx(-bracket).epsilon(1e-11));
      }
    }
    CHECK_THROWS_AS((void)p.potential_q(0, 0.1), Error);
  }
}
