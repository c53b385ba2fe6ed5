#include "hillwave/geometry.hpp"

#include <cmath>
#include <string>

#include "hillwave/error.hpp"
#include "hillwave/hypergeom.hpp"
#include "hillwave/ode.hpp"

namespace hillwave {

namespace {

void check_point(TargetPoint p) {
  if (!(p.u2 > 0.0)) fail(ErrorCode::DomainExit, "point outside the target: u2 = " + std::to_string(p.u2));
}

// State (u1, u2, c) with c = (du2/ds) u2^{-l/2}; then C^2 u2^l + c^2 = 1 on
// unit-speed geodesics and the system is smooth through turning points.
struct GeodesicField {
  double l;
  double C;
  void operator()(const ode::State<3>& x, ode::State<3>& dx, double) const {
    const double u2 = x[1];
    dx[0] = C * std::pow(u2, l);
    dx[1] = std::pow(u2, 0.5 * l) * x[2];
    dx[2] = -0.5 * l * C * C * std::pow(u2, 1.5 * l - 1.0);
  }
};

PathNode make_node(const GeodesicSpec& spec, double s, const ode::State<3>& x, int sign) {
  PathNode node;
  node.s = s;
  node.point = {x[0], x[1]};
  node.sign = sign;
  const double ul = std::pow(x[1], spec.l);
  const double du1 = spec.C * ul;
  const double du2 = std::pow(x[1], 0.5 * spec.l) * x[2];
  node.speed_err = (du1 * du1 + du2 * du2) / ul - 1.0;
  node.first_integral_err = 0.0;  // du1/ds is C u2^l by construction of the field
  return node;
}

}  // namespace

Sym2 metric_at(TargetPoint p, double l) {
  check_point(p);
  const double f = std::pow(p.u2, -l);
  return {f, 0.0, f};
}

Christoffels christoffels_at(TargetPoint p, double l) {
  check_point(p);
  const double k = -l / (2.0 * p.u2);
  Christoffels g;
  g.first = {0.0, k, 0.0};
  g.second = {-k, 0.0, k};
  return g;
}

double curvature_at(TargetPoint p, double l) {
  check_point(p);
  if (l == 0.0) return 0.0;
  if (l == 2.0) return -1.0;
  return -0.5 * l * std::pow(p.u2, l - 2.0);
}

GeodesicSpec make_geodesic(double l, double C, int sign, TargetPoint start) {
  check_point(start);
  require(sign == 1 || sign == -1, "geodesic sign must be +-1");
  const double z = C * C * std::pow(start.u2, l);
  if (z > 1.0) fail(ErrorCode::DomainExit, "geodesic constraint C^2 u2^l <= 1 violated at the start");
  GeodesicSpec spec{l, C, start.u1, sign, start};
  if (C != 0.0 && l > 0.0) {
    spec.C1 = start.u1 - (geodesic_u1_of_v(l, C, 0.0, sign, start.u2));
  }
  return spec;
}

Velocity geodesic_rhs(TargetPoint p, int sign, const GeodesicSpec& spec) {
  check_point(p);
  const double ul = std::pow(p.u2, spec.l);
  const double radicand = ul - spec.C * spec.C * ul * ul;
  require(radicand >= -1e-14 * ul, "geodesic_rhs: constraint C^2 u2^l <= 1 violated");
  return {spec.C * ul, sign * std::sqrt(std::max(radicand, 0.0))};
}

GeodesicPath integrate_geodesic(const GeodesicSpec& spec, double s_max, const GeodesicOptions& opt) {
  require(opt.tol > 0.0, "integrate_geodesic: tol must be positive");
  require(s_max > 0.0, "integrate_geodesic: s_max must be positive");
  require(opt.output_step > 0.0, "integrate_geodesic: output_step must be positive");
  check_point(spec.start);
  const double z0 = spec.C * spec.C * std::pow(spec.start.u2, spec.l);
  if (z0 > 1.0) fail(ErrorCode::DomainExit, "geodesic constraint violated at the start");

  const GeodesicField field{spec.l, spec.C};
  ode::Options oopt;
  oopt.tol = opt.tol;
  oopt.initial_step = std::min(1e-3, opt.output_step);
  oopt.max_step = opt.output_step;
  ode::AdaptiveIntegrator<3> integ(oopt);

  ode::State<3> x{spec.start.u1, spec.start.u2, spec.sign * std::sqrt(std::max(0.0, 1.0 - z0))};
  int sign = spec.sign;
  // From the apex of a branch only descent is possible.
  if (x[2] == 0.0 && spec.C != 0.0) sign = -1;

  GeodesicPath path;
  double s = 0.0;
  path.nodes.push_back(make_node(spec, s, x, sign));
  long out_index = 1;
  double next_out = opt.output_step;

  while (s < s_max) {
    const double s_prev = s;
    const ode::State<3> x_prev = x;
    const double limit = std::min(s_max, next_out);
    integ.step(field, x, s, limit);

    const bool turned = (x_prev[2] > 0.0 && x[2] <= 0.0) || (x_prev[2] < 0.0 && x[2] >= 0.0);
    const bool exit = !(x[1] > opt.u2_floor);
    if (turned || exit) {
      // Bisect the event inside the accepted step with fixed RK steps from its start.
      auto event = [&](const ode::State<3>& y) { return turned ? y[2] * x_prev[2] : y[1] - opt.u2_floor; };
      double lo = 0.0;
      double hi = s - s_prev;
      ode::State<3> y_hi = x;
      for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const ode::State<3> y = integ.single_step(field, x_prev, s_prev, mid);
        if (event(y) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
          y_hi = y;
        }
      }
      const double s_event = s_prev + hi;
      if (turned) {
        sign = -sign;
        path.turning_points.push_back(s_event);
        PathNode node = make_node(spec, s_event, y_hi, sign);
        if (node.s > path.nodes.back().s) path.nodes.push_back(node);
      }
      if (exit) {
        path.exited = true;
        path.exit_s = s_event;
        PathNode node = make_node(spec, s_event, y_hi, sign);
        if (node.s > path.nodes.back().s) path.nodes.push_back(node);
        break;
      }
    }
    if (s >= limit && limit == next_out) {
      path.nodes.push_back(make_node(spec, s, x, sign));
      next_out = static_cast<double>(++out_index) * opt.output_step;
    } else if (s >= s_max) {
      path.nodes.push_back(make_node(spec, s, x, sign));
    }
  }
  return path;
}

double half_circle_center(const GeodesicSpec& spec) {
  require(spec.l == 2.0 && spec.C != 0.0, "half_circle_center requires l = 2 and C != 0");
  // u1 = d + tanh(s + s0)/C, u2 = sech(s + s0)/|C|, s0 from the start point.
  const double ratio = 1.0 / (std::abs(spec.C) * spec.start.u2);
  const double s0 = -spec.sign * std::acosh(std::max(1.0, ratio));
  return spec.start.u1 - std::tanh(s0) / spec.C;
}

TargetPoint closed_form_geodesic(const GeodesicSpec& spec, double s) {
  check_point(spec.start);
  const double l = spec.l;
  if (spec.C == 0.0) {
    if (l == 2.0) return {spec.start.u1, spec.start.u2 * std::exp(spec.sign * s)};
    const double e = (2.0 - l) / 2.0;
    const double base = std::pow(spec.start.u2, e) + spec.sign * e * s;
    if (!(base > 0.0)) fail(ErrorCode::DomainExit, "vertical geodesic reached u2 = 0");
    return {spec.start.u1, std::pow(base, 1.0 / e)};
  }
  if (l == 2.0) {
    const double ratio = 1.0 / (std::abs(spec.C) * spec.start.u2);
    const double s0 = -spec.sign * std::acosh(std::max(1.0, ratio));
    const double d = spec.start.u1 - std::tanh(s0) / spec.C;
    const double arg = s + s0;
    return {d + std::tanh(arg) / spec.C, 1.0 / (std::abs(spec.C) * std::cosh(arg))};
  }
  fail(ErrorCode::UnsupportedFamily,
       "no closed form for l = " + std::to_string(l) + " with C != 0; use the arclength relation");
}

}  // namespace hillwave
