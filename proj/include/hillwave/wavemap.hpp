#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "hillwave/grid.hpp"
#include "hillwave/profile.hpp"

namespace hillwave {

/// Snapshot of a map into H^2_l with its first time derivatives.
struct WaveMapState {
  Grid grid;
  Field u1, u2, u1_t, u2_t;
  double time = 0.0;
};

/// First node at which u2 dropped to the floor (or below); the image left
/// the target there.
struct ExitInfo {
  std::size_t index = 0;
  double x = 0.0;
  double y = 0.0;
  double u2 = 0.0;
  double time = 0.0;
};

std::optional<ExitInfo> find_exit(const WaveMapState& s, double u2_floor = 0.0);

// Geodesic families that turn scalar waves into wave maps.

/// u1 = C1, u2 = [C2^{(2-l)/2} + sign ((2-l)/2) phi]^{2/(2-l)}, l != 2.
struct VerticalLine {
  double l = 1.0;
  double C1 = 0.0;
  double C2 = 1.0;
  int sign = 1;
};
/// u1 = C1, u2 = e^phi (l = 2).
struct VerticalExp {
  double C1 = 0.0;
};
/// u1 = d + tanh(phi)/C, u2 = sech(phi)/C (l = 2, C > 0).
struct HalfCircle {
  double C = 1.0;
  double d = 0.0;
};
/// Hypergeometric branch: v solves Phi(v) - Phi(v0) = sign phi and
/// u1 = C1 + sign (2/(2+l)) C v^{(2+l)/2} F(...), l in (0, 2), C != 0.
struct HypergeometricBranch {
  double l = 1.0;
  double C = 0.5;
  double C1 = 0.0;
  int sign = 1;
  double v0 = 1.0;
};

using GeodesicFamily = std::variant<VerticalLine, VerticalExp, HalfCircle, HypergeometricBranch>;

double family_l(const GeodesicFamily& family) noexcept;

enum class ExitPolicy { Throw, Report };

struct Composition {
  WaveMapState state;
  std::optional<ExitInfo> exit;
};

/// Pointwise u(x, t) = gamma(phi(x, t)), with u_t = gamma'(phi) phi_t.
/// Nodes outside the family's domain get u2 = 0 and are reported (or throw
/// DomainExit under ExitPolicy::Throw).
Composition compose_wavemap(const GeodesicFamily& family, const Grid& grid, const Field& phi, const Field& phi_t,
                            double time, ExitPolicy policy = ExitPolicy::Throw);

struct Residual {
  double res1 = 0.0;
  double res2 = 0.0;
};

/// Max-norm residual of the flat-space wave map system at the middle state,
/// centred differences in time (uniform step) and space.
Residual wme_residual(const WaveMapState& prev, const WaveMapState& cur, const WaveMapState& next,
                      const PeriodicProfile& p, double l, int boundary_margin = 2);

/// Same for the l = 2 system in (u, v = ln u2).
Residual star_residual(const WaveMapState& prev, const WaveMapState& cur, const WaveMapState& next,
                       const PeriodicProfile& p, int boundary_margin = 2);

/// Residual of the stationary elliptic system.
Residual stationary_residual(const Grid& grid, const Field& u1, const Field& u2, double l, int boundary_margin = 2);

/// Weighted Sobolev-type smallness integral: sum over multi-indices with at
/// most one time derivative and 1 <= |gamma| <= G.
double smallness_integral(const WaveMapState& s, double l, int G);

struct NonlinearOptions {
  double u2_floor = 1e-8;
  int record_every = 0;  // 0: keep only initial and final states
  /// Called after every step with the new state.
  std::function<void(const WaveMapState&)> on_step;
};

struct Trajectory {
  std::vector<WaveMapState> snapshots;
  std::optional<ExitInfo> exit;
  long steps = 0;
};

/// Method of lines with centred differences and classical RK4 in time.
/// Requires dt <= 0.5 h min R (CflViolation otherwise); Line or Radial grids.
Trajectory direct_evolve_nonlinear(const WaveMapState& initial, const PeriodicProfile& p, double l, double T,
                                   double dt, const NonlinearOptions& opt = {});

}  // namespace hillwave
