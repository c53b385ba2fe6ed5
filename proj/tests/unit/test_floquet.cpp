#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "hillwave/error.hpp"
#include "hillwave/floquet.hpp"

using namespace hillwave;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

}  // namespace

TEST_SUITE("floquet") {
  TEST_CASE("flat profile: trace is 2 cos sqrt(lambda)") {
    const PeriodicProfile p = presets::minkowski();
    for (double lambda : {0.5, 3.0, 9.87, 40.0, 97.0}) {
      const Monodromy m = monodromy(p, 2, lambda);
      CHECK(m.trace() == doctest::Approx(2 * std::cos(std::sqrt(lambda))).epsilon(0).scale(1).epsilon(1e-10));
      CHECK(std::abs(m.det() - 1.0) < 1e-11);
    }
  }

  TEST_CASE("n = 1 is conformally flat: trace = 2 cos(sqrt(lambda) int 1/R)") {
    // With tau = int dt / R the one-dimensional equation becomes v_tautau = v_xx.
    const PeriodicProfile p = presets::cosine(0.3);
    const double T = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double t) { return 1.0 / p.R(t).value; }, 0.0, 1.0, 10, 1e-15);
    for (double lambda : {2.0, 9.0, 25.0, 60.0}) {
      CHECK(std::abs(monodromy(p, 1, lambda).trace() - 2 * std::cos(std::sqrt(lambda) * T)) < 1e-9);
    }
    ScanOptions opt;
    opt.steps = 200;
    CHECK(scan_trace(p, 1, opt).intervals.empty());
  }

  TEST_CASE("multipliers near the stability edge agree with extended precision") {
    using big = boost::multiprecision::cpp_bin_float_50;
    const double tr = 2.0006;
    const Multipliers mu = multipliers(tr);
    REQUIRE(mu.unstable);
    const big t = tr;
    const big ref = (t + sqrt(t * t - 4)) / 2;
    CHECK(std::abs(mu.mu0.real() - ref.convert_to<double>()) < 1e-15);
    CHECK(mu.mu0.real() * mu.mu0_inv.real() == doctest::Approx(1.0).epsilon(1e-15));
    const Multipliers neg = multipliers(-3.0);
    CHECK(neg.mu0.real() < -1.0);
    const Multipliers st = multipliers(1.0);
    CHECK_FALSE(st.unstable);
    CHECK(std::abs(std::abs(st.mu0) - 1.0) < 1e-15);
  }

  TEST_CASE("scan finds the first tongue of the fixture with correct edges") {
    const PeriodicProfile p = presets::cosine(0.3);
    ScanOptions opt;
    opt.lambda_max = 20.0;
    opt.steps = 200;
    const ScanResult r = scan_trace(p, 2, opt);
    REQUIRE(!r.intervals.empty());
    const InstabilityInterval& iv = r.intervals.front();
    CHECK(iv.lambda_lo == doctest::Approx(6.52598).epsilon(1e-5));
    CHECK(iv.lambda_hi == doctest::Approx(12.06393).epsilon(1e-5));
    CHECK_FALSE(iv.open_lo);
    CHECK_FALSE(iv.open_hi);
    const double d = 1e-6;
    CHECK(std::abs(monodromy(p, 2, iv.lambda_lo - d).trace()) < 2.0);
    CHECK(std::abs(monodromy(p, 2, iv.lambda_lo + d).trace()) > 2.0);
    CHECK(std::abs(monodromy(p, 2, iv.lambda_hi + d).trace()) < 2.0);
    CHECK(std::abs(monodromy(p, 2, iv.lambda_hi - d).trace()) > 2.0);
    // lambda_star maximises |trace| inside the tongue.
    const double t_star = std::abs(iv.trace_at_star);
    for (double lambda = iv.lambda_lo + 0.01; lambda < iv.lambda_hi; lambda += 0.05) {
      CHECK(std::abs(monodromy(p, 2, lambda).trace()) <= t_star + 1e-9);
    }
    for (const ScanSample& s : r.samples) CHECK(std::abs(s.det_err) < 1e-9);
  }

  TEST_CASE("closed form W, V matches monodromy powers and direct integration") {
    const PeriodicProfile p = presets::cosine(0.3);
    ScanOptions opt;
    opt.lambda_max = 20.0;
    opt.steps = 200;
    const auto ivs = scan_instability(p, 2, opt);
    const Selection sel = select_lambda(p, 2, ivs.front());
    const WV zero = closed_form_wv(sel.monodromy, 0);
    CHECK(zero.V == 1.0);
    CHECK(zero.W == 0.0);
    const WV one = closed_form_wv(sel.monodromy, 1);
    CHECK(one.W == doctest::Approx(sel.monodromy.b21).epsilon(1e-13));
    CHECK(one.V == doctest::Approx(sel.monodromy.b22).epsilon(1e-12));
    for (int m = 1; m <= 8; ++m) {
      const WV cf = closed_form_wv(sel.monodromy, m);
      const Mat2 pw = power(sel.monodromy.matrix(), m);
      CHECK(cf.W == doctest::Approx(pw[1][0]).epsilon(1e-10));
      CHECK(cf.V == doctest::Approx(pw[1][1]).epsilon(1e-10));
      const Mat2 direct = fundamental_matrix(p, 2, sel.lambda, 0.0, m);
      CHECK(cf.W == doctest::Approx(direct[1][0]).epsilon(1e-8));
      CHECK(cf.V == doctest::Approx(direct[1][1]).epsilon(1e-8));
    }
  }

  TEST_CASE("error codes") {
    const PeriodicProfile flat = presets::minkowski();
    CHECK(code_of([&] { (void)scan_instability(flat, 2, ScanOptions{}); }) == ErrorCode::NoInstabilityFound);
    CHECK(code_of([&] { (void)fundamental_matrix(flat, 2, 1.0, 1.0, 0.5); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { (void)monodromy(flat, 0, 1.0); }) == ErrorCode::InvalidArgument);
    Monodromy stable = monodromy(flat, 2, 4.0);
    CHECK(code_of([&] { (void)closed_form_wv(stable, 3); }) == ErrorCode::InvalidArgument);
    Monodromy tangent;
    tangent.b21 = 1.0;  // trace exactly 2: mu0 = 1/mu0 = 1
    CHECK(code_of([&] { (void)closed_form_wv(tangent, 3); }) == ErrorCode::DegenerateMonodromy);
    ScanOptions bad;
    bad.lambda_min = 0.0;
    CHECK(code_of([&] { (void)scan_trace(flat, 2, bad); }) == ErrorCode::InvalidArgument);
  }
}
