#pragma once

#include <vector>

namespace hillwave {

/// Point of the half-plane target H^2_l; u2 > 0.
struct TargetPoint {
  double u1 = 0.0;
  double u2 = 1.0;
};

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

/// Metric (u2)^{-l} I.
Sym2 metric_at(TargetPoint p, double l);

/// Gamma^1_{BC} and Gamma^2_{BC} as symmetric matrices in (B, C).
struct Christoffels {
  Sym2 first;
  Sym2 second;
};
Christoffels christoffels_at(TargetPoint p, double l);

/// Gaussian curvature K_l = -(l/2) u2^{l-2}.
double curvature_at(TargetPoint p, double l);

/// Unit-speed geodesic of H^2_l: first integral du1/ds = C u2^l, branch sign
/// of du2/ds at the start. C1 is the u1-intercept of the hypergeometric form
/// of the current branch (used by the closed forms and compositions).
struct GeodesicSpec {
  double l = 2.0;
  double C = 0.0;
  double C1 = 0.0;
  int sign = 1;
  TargetPoint start;
};

/// Builds a spec through `start`, deriving C1 from the hypergeometric form
/// when C != 0 (C1 = start.u1 otherwise). Throws DomainExit if C^2 u2^l > 1.
GeodesicSpec make_geodesic(double l, double C, int sign, TargetPoint start);

struct Velocity {
  double du1 = 0.0;
  double du2 = 0.0;
};

/// Right-hand side of the first-order geodesic system at p on branch `sign`.
Velocity geodesic_rhs(TargetPoint p, int sign, const GeodesicSpec& spec);

struct PathNode {
  double s = 0.0;
  TargetPoint point;
  int sign = 1;
  double speed_err = 0.0;           // h(gamma', gamma') - 1
  double first_integral_err = 0.0;  // du1/ds - C u2^l
};

struct GeodesicPath {
  std::vector<PathNode> nodes;
  std::vector<double> turning_points;  // arclengths where du2/ds changes sign
  bool exited = false;                 // u2 reached the boundary floor
  double exit_s = 0.0;
};

struct GeodesicOptions {
  double tol = 1e-12;
  double output_step = 0.05;  // spacing of the regular output nodes
  double u2_floor = 1e-8;
};

/// Adaptive integration of the geodesic from spec.start over [0, s_max].
GeodesicPath integrate_geodesic(const GeodesicSpec& spec, double s_max, const GeodesicOptions& opt = {});

/// Closed forms: C = 0 (any l), and l = 2 half-circles.
/// Throws UnsupportedFamily otherwise.
TargetPoint closed_form_geodesic(const GeodesicSpec& spec, double s);

/// Circle centre d for an l = 2, C != 0 geodesic through spec.start.
double half_circle_center(const GeodesicSpec& spec);

}  // namespace hillwave
