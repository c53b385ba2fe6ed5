#pragma once

#include <cstddef>
#include <vector>

namespace hillwave {

using Field = std::vector<double>;

/// Uniform spatial grids.
///
///  - Line: n = 1, nodes x_i = x0 + i h. Periodic grids (spectral boxes) put
///    x0 = -L/2; bounded grids are cell-centred with mirror ghosts.
///  - Plane: n = 2 periodic tensor grid, index = iy * points + ix.
///  - Radial: n = 2 spherically symmetric profile, r_i = (i + 1/2) h, even
///    reflection at r = 0 and mirror ghost at the outer edge.
enum class GridKind { Line, Plane, Radial };

struct Grid {
  GridKind kind = GridKind::Line;
  int points = 0;  // per axis
  double h = 0.0;
  double x0 = 0.0;  // first node coordinate (per axis)
  bool periodic = false;

  int dimension() const noexcept { return kind == GridKind::Line ? 1 : 2; }
  std::size_t size() const noexcept {
    return kind == GridKind::Plane ? static_cast<std::size_t>(points) * points : static_cast<std::size_t>(points);
  }
  double coord(int i) const noexcept { return x0 + i * h; }
  /// Box length of a periodic grid.
  double length() const noexcept { return points * h; }
  /// Distance of node `index` from the origin (|x|, |(x, y)| or r).
  double radius(std::size_t index) const noexcept;
  /// Midpoint-rule quadrature weight of node `index`.
  double weight(std::size_t index) const noexcept;
  /// Coordinates of node `index` (y = 0 for one-dimensional kinds).
  void position(std::size_t index, double& x, double& y) const noexcept;
};

Grid line_grid(double half_extent, int points, bool periodic);
Grid plane_grid(double half_extent, int points);
Grid radial_grid(double radius, int points);

/// Centred first derivative along `axis` (0 = x / r, 1 = y; Plane only).
Field derivative(const Grid& g, const Field& f, int axis);
/// Centred second derivative along `axis`.
Field second_derivative(const Grid& g, const Field& f, int axis);
/// Flat Laplacian, including the (n-1)/r d/dr term on radial grids.
Field laplacian(const Grid& g, const Field& f);
/// grad a . grad b (pointwise), from centred differences.
Field gradient_dot(const Grid& g, const Field& a, const Field& b);

/// Sum of f * weight over the grid.
double integrate(const Grid& g, const Field& f);

/// Nodes whose stencils touch the non-periodic outer boundary are excluded
/// from residual norms; this returns whether index lies inside that margin.
bool in_boundary_margin(const Grid& g, std::size_t index, int margin) noexcept;

}  // namespace hillwave
