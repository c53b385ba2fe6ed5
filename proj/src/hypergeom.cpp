#include "hillwave/hypergeom.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hillwave/error.hpp"

namespace hillwave {

namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

bool is_integer(double x, double eps = 1e-12) { return std::abs(x - std::round(x)) < eps; }

}  // namespace

HypResult gauss_2f1_series(double a, double b, double c, double z, double tol) {
  require(!is_nonpositive_integer(c), "2F1: c must not be a non-positive integer");
  require(z >= 0.0 && z < 1.0, "2F1 series: z must lie in [0, 1)");
  HypResult out;
  double term = 1.0;
  double sum = 1.0;
  if (z == 0.0) {
    out.value = 1.0;
    return out;
  }
  for (long k = 0; k < kHypMaxTerms; ++k) {
    const double dk = static_cast<double>(k);
    const double ratio = (a + dk) * (b + dk) / ((c + dk) * (dk + 1.0)) * z;
    term *= ratio;
    sum += term;
    out.terms = k + 1;
    if (term == 0.0) {
      out.value = sum;  // terminating series
      return out;
    }
    // Once the ratio settles below 1 the geometric tail bounds the remainder.
    const double r = std::abs(ratio);
    if (r < 1.0 && dk > std::abs(a) + std::abs(b) + std::abs(c)) {
      const double bound = std::max(r, z);
      const double tail = std::abs(term) * bound / (1.0 - bound);
      if (tail <= tol * std::abs(sum)) {
        out.value = sum;
        return out;
      }
    }
  }
  fail(ErrorCode::NoConvergence, "2F1 series did not converge within 1e6 terms");
}

HypResult gauss_2f1(double a, double b, double c, double z, double tol) {
  require(!is_nonpositive_integer(c), "2F1: c must not be a non-positive integer");
  require(z >= 0.0 && z <= 1.0, "2F1: z must lie in [0, 1]");
  const double s = c - a - b;
  if (z == 1.0) {
    require(s > 0.0, "2F1 at z = 1 requires c - a - b > 0");
    HypResult out;
    out.value = std::tgamma(c) * std::tgamma(s) / (std::tgamma(c - a) * std::tgamma(c - b));
    out.transformed = true;
    return out;
  }
  if (z <= 0.75) return gauss_2f1_series(a, b, c, z, tol);
  if (is_integer(s)) {
    HypResult out = gauss_2f1_series(a, b, c, z, tol);
    out.near_singular = true;
    return out;
  }
  // Connection formula z -> 1 - z (real parameters, non-integer c - a - b).
  const double w = 1.0 - z;
  const HypResult f1 = gauss_2f1_series(a, b, 1.0 - s, w, tol);
  const HypResult f2 = gauss_2f1_series(c - a, c - b, 1.0 + s, w, tol);
  const double g1 = std::tgamma(c) * std::tgamma(s) / (std::tgamma(c - a) * std::tgamma(c - b));
  const double g2 = std::tgamma(c) * std::tgamma(-s) / (std::tgamma(a) * std::tgamma(b));
  HypResult out;
  out.value = g1 * f1.value + std::pow(w, s) * g2 * f2.value;
  out.terms = f1.terms + f2.terms;
  out.transformed = true;
  return out;
}

double geodesic_u1_of_v(double l, double C, double C1, int sign, double v) {
  require(l > 0.0, "geodesic_u1_of_v: l must be positive");
  require(C != 0.0, "geodesic_u1_of_v: C must be non-zero");
  require(sign == 1 || sign == -1, "geodesic_u1_of_v: sign must be +-1");
  require(v > 0.0, "geodesic_u1_of_v: v must be positive");
  const double z = C * C * std::pow(v, l);
  if (z > 1.0) {
    fail(ErrorCode::DomainExit, "geodesic_u1_of_v: C^2 v^l = " + std::to_string(z) + " exceeds 1");
  }
  const double F = gauss_2f1((2.0 + l) / (2.0 * l), 0.5, 1.5 + 1.0 / l, z).value;
  return C1 + sign * (2.0 / (2.0 + l)) * C * std::pow(v, (2.0 + l) / 2.0) * F;
}

double arclength_phi(double l, double C, double v) {
  require(l > 0.0 && l < 2.0, "arclength relation requires l in (0, 2)");
  require(v > 0.0, "arclength relation requires v > 0");
  const double C2 = C * C;
  const double z = C2 * std::pow(v, l);
  if (z > 1.0) {
    fail(ErrorCode::DomainExit, "arclength relation: C^2 v^l = " + std::to_string(z) + " exceeds 1");
  }
  const double a = 1.0;
  const double b = 1.0 + 1.0 / l;
  const double c = 1.5 + 1.0 / l;
  const double lead = 2.0 / (2.0 - l);
  const double tail_coeff = 2.0 / (2.0 + l) * C2 * std::pow(v, (2.0 + l) / 2.0);
  if (z == 1.0) {
    // sqrt(1 - z) F(a, b; c; z) -> Gamma(c) Gamma(a + b - c) / (Gamma(a) Gamma(b)), a + b - c = 1/2.
    const double limit = std::tgamma(c) * std::sqrt(std::numbers::pi) / (std::tgamma(a) * std::tgamma(b));
    return lead * tail_coeff * limit;
  }
  const double F = gauss_2f1(a, b, c, z).value;
  return lead * std::sqrt(1.0 - z) * (std::pow(v, 1.0 - l / 2.0) + tail_coeff * F);
}

double arclength_phi_derivative(double l, double C, double v) {
  const double z = C * C * std::pow(v, l);
  require(z < 1.0, "arclength derivative is singular at the turning point");
  return std::pow(v, -l / 2.0) / std::sqrt(1.0 - z);
}

ArcLength arclength_relation(double l, double C, double v, double v0) {
  ArcLength out;
  if (v == v0) {
    arclength_phi(l, C, v);  // domain checks
    out.s = 0.0;
  } else {
    out.s = arclength_phi(l, C, v) - arclength_phi(l, C, v0);
  }
  const double C2 = C * C;
  out.at_turning_point = C2 * std::pow(v, l) == 1.0 || C2 * std::pow(v0, l) == 1.0;
  return out;
}

}  // namespace hillwave
