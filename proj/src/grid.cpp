#include "hillwave/grid.hpp"

#include <cmath>
#include <numbers>

#include "hillwave/error.hpp"

namespace hillwave {

namespace {

// Neighbour index along one axis with the grid's boundary rule.
int neighbour(const Grid& g, int i) noexcept {
  const int n = g.points;
  if (g.periodic) return ((i % n) + n) % n;
  if (i < 0) return -i - 1;  // cell-centred mirror (also the r = 0 reflection)
  if (i >= n) return 2 * n - i - 1;
  return i;
}

template <class Op>
Field along_axis(const Grid& g, const Field& f, int axis, Op op) {
  require(f.size() == g.size(), "field size does not match grid");
  require(axis == 0 || (axis == 1 && g.kind == GridKind::Plane), "invalid derivative axis");
  Field out(f.size());
  const int n = g.points;
  if (g.kind != GridKind::Plane) {
    for (int i = 0; i < n; ++i) {
      out[i] = op(f[neighbour(g, i - 1)], f[i], f[neighbour(g, i + 1)]);
    }
    return out;
  }
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t k = static_cast<std::size_t>(iy) * n + ix;
      std::size_t km;
      std::size_t kp;
      if (axis == 0) {
        km = static_cast<std::size_t>(iy) * n + neighbour(g, ix - 1);
        kp = static_cast<std::size_t>(iy) * n + neighbour(g, ix + 1);
      } else {
        km = static_cast<std::size_t>(neighbour(g, iy - 1)) * n + ix;
        kp = static_cast<std::size_t>(neighbour(g, iy + 1)) * n + ix;
      }
      out[k] = op(f[km], f[k], f[kp]);
    }
  }
  return out;
}

}  // namespace

double Grid::radius(std::size_t index) const noexcept {
  double x = 0.0;
  double y = 0.0;
  position(index, x, y);
  return std::hypot(x, y);
}

double Grid::weight(std::size_t index) const noexcept {
  switch (kind) {
    case GridKind::Line: return h;
    case GridKind::Plane: return h * h;
    case GridKind::Radial: return 2.0 * std::numbers::pi * coord(static_cast<int>(index)) * h;
  }
  return h;
}

void Grid::position(std::size_t index, double& x, double& y) const noexcept {
  if (kind == GridKind::Plane) {
    x = coord(static_cast<int>(index % points));
    y = coord(static_cast<int>(index / points));
  } else {
    x = coord(static_cast<int>(index));
    y = 0.0;
  }
}

Grid line_grid(double half_extent, int points, bool periodic) {
  require(half_extent > 0.0 && points >= 4, "line grid needs a positive extent and >= 4 points");
  Grid g;
  g.kind = GridKind::Line;
  g.points = points;
  g.h = 2.0 * half_extent / points;
  g.periodic = periodic;
  g.x0 = periodic ? -half_extent : -half_extent + 0.5 * g.h;
  return g;
}

Grid plane_grid(double half_extent, int points) {
  require(half_extent > 0.0 && points >= 4, "plane grid needs a positive extent and >= 4 points");
  Grid g;
  g.kind = GridKind::Plane;
  g.points = points;
  g.h = 2.0 * half_extent / points;
  g.periodic = true;
  g.x0 = -half_extent;
  return g;
}

Grid radial_grid(double radius, int points) {
  require(radius > 0.0 && points >= 4, "radial grid needs a positive radius and >= 4 points");
  Grid g;
  g.kind = GridKind::Radial;
  g.points = points;
  g.h = radius / points;
  g.periodic = false;
  g.x0 = 0.5 * g.h;
  return g;
}

Field derivative(const Grid& g, const Field& f, int axis) {
  const double inv = 0.5 / g.h;
  return along_axis(g, f, axis, [inv](double m, double, double p) { return (p - m) * inv; });
}

Field second_derivative(const Grid& g, const Field& f, int axis) {
  const double inv = 1.0 / (g.h * g.h);
  return along_axis(g, f, axis, [inv](double m, double c, double p) { return (p - 2.0 * c + m) * inv; });
}

Field laplacian(const Grid& g, const Field& f) {
  Field out = second_derivative(g, f, 0);
  if (g.kind == GridKind::Plane) {
    const Field yy = second_derivative(g, f, 1);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += yy[k];
  } else if (g.kind == GridKind::Radial) {
    const Field fr = derivative(g, f, 0);
    for (int i = 0; i < g.points; ++i) out[i] += fr[i] / g.coord(i);
  }
  return out;
}

Field gradient_dot(const Grid& g, const Field& a, const Field& b) {
  Field ax = derivative(g, a, 0);
  const Field bx = &a == &b ? ax : derivative(g, b, 0);
  for (std::size_t k = 0; k < ax.size(); ++k) ax[k] *= bx[k];
  if (g.kind == GridKind::Plane) {
    const Field ay = derivative(g, a, 1);
    const Field by = &a == &b ? ay : derivative(g, b, 1);
    for (std::size_t k = 0; k < ax.size(); ++k) ax[k] += ay[k] * by[k];
  }
  return ax;
}

double integrate(const Grid& g, const Field& f) {
  require(f.size() == g.size(), "field size does not match grid");
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * g.weight(k);
  return s;
}

bool in_boundary_margin(const Grid& g, std::size_t index, int margin) noexcept {
  if (g.periodic) return false;
  return static_cast<int>(index) >= g.points - margin || (g.kind == GridKind::Line && static_cast<int>(index) < margin);
}

}  // namespace hillwave
