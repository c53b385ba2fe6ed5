#pragma once

namespace hillwave {

/// Result of a Gauss 2F1 evaluation plus how it was obtained.
struct HypResult {
  double value = 0.0;
  long terms = 0;
  bool transformed = false;    // evaluated through z -> 1 - z
  bool near_singular = false;  // z > 0.75 with integer c - a - b: plain series used
};

inline constexpr double kHypTol = 1e-16;
inline constexpr long kHypMaxTerms = 1'000'000;

/// 2F1(a, b; c; z) for real parameters and z in [0, 1]. z = 1 is accepted
/// only when c - a - b > 0 (Gauss summation).
HypResult gauss_2f1(double a, double b, double c, double z, double tol = kHypTol);

/// Plain power series, no transformation (z in [0, 1)).
HypResult gauss_2f1_series(double a, double b, double c, double z, double tol = kHypTol);

/// u1 on the hypergeometric geodesic branch through (C1, 0):
/// u1 = C1 + sign (2/(2+l)) C v^{(2+l)/2} F((2+l)/(2l), 1/2; 3/2 + 1/l; C^2 v^l).
double geodesic_u1_of_v(double l, double C, double C1, int sign, double v);

/// Phi(v) of the implicit arclength relation (l in (0, 2)); finite at the
/// turning point C^2 v^l = 1.
double arclength_phi(double l, double C, double v);

/// Derivative dPhi/dv = v^{-l/2} / sqrt(1 - C^2 v^l).
double arclength_phi_derivative(double l, double C, double v);

struct ArcLength {
  double s = 0.0;
  bool at_turning_point = false;  // v or v0 sits on C^2 v^l = 1
};

/// s = Phi(v) - Phi(v0).
ArcLength arclength_relation(double l, double C, double v, double v0);

}  // namespace hillwave
