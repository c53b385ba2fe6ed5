#include "hillwave/wavemap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "hillwave/error.hpp"
#include "hillwave/hypergeom.hpp"

namespace hillwave {

namespace {

void check_sizes(const WaveMapState& s) {
  const std::size_t n = s.grid.size();
  require(s.u1.size() == n && s.u2.size() == n && s.u1_t.size() == n && s.u2_t.size() == n,
          "wave map fields do not match the grid");
}

ExitInfo exit_at(const Grid& g, std::size_t k, double u2, double time) {
  ExitInfo e;
  e.index = k;
  g.position(k, e.x, e.y);
  e.u2 = u2;
  e.time = time;
  return e;
}

// Phi extended by continuity to v = 0.
double phi_or_zero(double l, double C, double v) { return v > 0.0 ? arclength_phi(l, C, v) : 0.0; }

struct Point {
  double u1, u2, u1_t, u2_t;
  bool inside;
};

Point compose_point(const GeodesicFamily& family, double phi, double phi_t) {
  return std::visit(
      [&](const auto& f) -> Point {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, VerticalLine>) {
          const double e = 0.5 * (2.0 - f.l);
          const double base = std::pow(f.C2, e) + f.sign * e * phi;
          if (!(base > 0.0)) return {f.C1, 0.0, 0.0, 0.0, false};
          const double u2 = std::pow(base, 1.0 / e);
          return {f.C1, u2, 0.0, f.sign * u2 / base * phi_t, true};
        } else if constexpr (std::is_same_v<F, VerticalExp>) {
          const double u2 = std::exp(phi);
          return {f.C1, u2, 0.0, u2 * phi_t, u2 > 0.0};
        } else if constexpr (std::is_same_v<F, HalfCircle>) {
          const double th = std::tanh(phi);
          const double sh = 1.0 / std::cosh(phi);
          const double u2 = sh / f.C;
          return {f.d + th / f.C, u2, sh * sh / f.C * phi_t, -sh * th / f.C * phi_t, u2 > 0.0};
        } else {
          const double vstar = std::pow(std::abs(f.C), -2.0 / f.l);
          const double target = arclength_phi(f.l, f.C, f.v0) + f.sign * phi;
          const double top = arclength_phi(f.l, f.C, vstar);
          if (!(target > 0.0) || target > top) return {f.C1, 0.0, 0.0, 0.0, false};
          double v = vstar;
          if (target < top) {
            auto g = [&](double x) { return phi_or_zero(f.l, f.C, x) - target; };
            boost::uintmax_t iters = 200;
            const auto r = boost::math::tools::toms748_solve(g, 0.0, vstar, -target, top - target,
                                                             boost::math::tools::eps_tolerance<double>(52), iters);
            v = 0.5 * (r.first + r.second);
          }
          const double z = f.C * f.C * std::pow(v, f.l);
          const double dv = f.sign * std::pow(v, 0.5 * f.l) * std::sqrt(std::max(0.0, 1.0 - z));
          const double u1 = geodesic_u1_of_v(f.l, f.C, f.C1, f.sign, v);
          return {u1, v, f.C * std::pow(v, f.l) * phi_t, dv * phi_t, true};
        }
      },
      family);
}

struct Coefficients {
  double damping;  // n R'/R
  double inv_R2;
};

Coefficients coefficients(const PeriodicProfile& p, int n, double t) {
  const Jet r = p.R(t);
  return {n * r.d1 / r.value, 1.0 / (r.value * r.value)};
}

struct TimeDifferences {
  Field u1_t, u2_t, u1_tt, u2_tt;
};

TimeDifferences time_differences(const WaveMapState& prev, const WaveMapState& cur, const WaveMapState& next) {
  check_sizes(prev);
  check_sizes(cur);
  check_sizes(next);
  require(prev.u1.size() == cur.u1.size() && next.u1.size() == cur.u1.size(), "states live on different grids");
  const double dt_a = cur.time - prev.time;
  const double dt_b = next.time - cur.time;
  require(dt_a > 0.0 && std::abs(dt_a - dt_b) <= 1e-9 * dt_a, "residual needs a uniform time step");
  const double dt = 0.5 * (dt_a + dt_b);
  const std::size_t n = cur.u1.size();
  TimeDifferences d{Field(n), Field(n), Field(n), Field(n)};
  for (std::size_t k = 0; k < n; ++k) {
    d.u1_t[k] = (next.u1[k] - prev.u1[k]) / (2.0 * dt);
    d.u2_t[k] = (next.u2[k] - prev.u2[k]) / (2.0 * dt);
    d.u1_tt[k] = (next.u1[k] - 2.0 * cur.u1[k] + prev.u1[k]) / (dt * dt);
    d.u2_tt[k] = (next.u2[k] - 2.0 * cur.u2[k] + prev.u2[k]) / (dt * dt);
  }
  return d;
}

// u_tt for the full system at one state (used by the evolver).
void wave_map_acceleration(const Grid& g, const Coefficients& c, double l, const Field& u1, const Field& u2,
                           const Field& u1_t, const Field& u2_t, Field& a1, Field& a2) {
  const Field lap1 = laplacian(g, u1);
  const Field lap2 = laplacian(g, u2);
  const Field g12 = gradient_dot(g, u1, u2);
  const Field g11 = gradient_dot(g, u1, u1);
  const Field g22 = gradient_dot(g, u2, u2);
  const std::size_t n = u1.size();
  a1.resize(n);
  a2.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double q = l / u2[k];
    a1[k] = -c.damping * u1_t[k] + c.inv_R2 * lap1[k] + q * u1_t[k] * u2_t[k] - c.inv_R2 * q * g12[k];
    a2[k] = -c.damping * u2_t[k] + c.inv_R2 * lap2[k] - 0.5 * q * (u1_t[k] * u1_t[k] - u2_t[k] * u2_t[k]) +
            c.inv_R2 * 0.5 * q * (g11[k] - g22[k]);
  }
}

double max_abs_interior(const Grid& g, const Field& f, int margin) {
  double m = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (in_boundary_margin(g, k, margin)) continue;
    m = std::max(m, std::abs(f[k]));
  }
  return m;
}

// Repeated centred differences: d^order/dx^order along one axis.
Field repeated_derivative(const Grid& g, Field f, int axis, int order) {
  for (int i = 0; i < order; ++i) f = derivative(g, f, axis);
  return f;
}

// Sum over spatial multi-indices of total order k of the squared derivative,
// integrated. Radial grids are limited to k <= 2.
double spatial_order_integral(const Grid& g, const Field& f, const Field& weight, int k) {
  Field integrand(f.size(), 0.0);
  if (k == 0) {
    for (std::size_t i = 0; i < f.size(); ++i) integrand[i] = f[i] * f[i];
  } else if (g.kind == GridKind::Line) {
    const Field d = repeated_derivative(g, f, 0, k);
    for (std::size_t i = 0; i < f.size(); ++i) integrand[i] = d[i] * d[i];
  } else if (g.kind == GridKind::Plane) {
    for (int a = 0; a <= k; ++a) {
      const Field d = repeated_derivative(g, repeated_derivative(g, f, 0, a), 1, k - a);
      for (std::size_t i = 0; i < f.size(); ++i) integrand[i] += d[i] * d[i];
    }
  } else {
    if (k > 2) fail(ErrorCode::UnsupportedOrder, "radial smallness integral supports G <= 2 only");
    const Field fr = derivative(g, f, 0);
    if (k == 1) {
      for (std::size_t i = 0; i < f.size(); ++i) integrand[i] = fr[i] * fr[i];
    } else {
      // Angular mean of f_11^2 + f_12^2 + f_22^2 for a radial f.
      const Field frr = second_derivative(g, f, 0);
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = frr[i];
        const double b = fr[i] / g.coord(static_cast<int>(i));
        integrand[i] = 0.875 * (a * a + b * b) + 0.25 * a * b;
      }
    }
  }
  for (std::size_t i = 0; i < f.size(); ++i) integrand[i] *= weight[i];
  return integrate(g, integrand);
}

}  // namespace

std::optional<ExitInfo> find_exit(const WaveMapState& s, double u2_floor) {
  for (std::size_t k = 0; k < s.u2.size(); ++k) {
    if (!(s.u2[k] > u2_floor)) return exit_at(s.grid, k, s.u2[k], s.time);
  }
  return std::nullopt;
}

double family_l(const GeodesicFamily& family) noexcept {
  return std::visit(
      [](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, VerticalLine> || std::is_same_v<F, HypergeometricBranch>) {
          return f.l;
        } else {
          return 2.0;
        }
      },
      family);
}

Composition compose_wavemap(const GeodesicFamily& family, const Grid& grid, const Field& phi, const Field& phi_t,
                            double time, ExitPolicy policy) {
  require(phi.size() == grid.size() && phi_t.size() == grid.size(), "scalar field does not match the grid");
  std::visit(
      [](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, VerticalLine>) {
          require(f.l != 2.0 && f.C2 > 0.0 && (f.sign == 1 || f.sign == -1), "VerticalLine needs l != 2, C2 > 0");
        } else if constexpr (std::is_same_v<F, HalfCircle>) {
          require(f.C > 0.0, "HalfCircle needs C > 0");
        } else if constexpr (std::is_same_v<F, HypergeometricBranch>) {
          require(f.l > 0.0 && f.l < 2.0 && f.C != 0.0 && f.v0 > 0.0 && (f.sign == 1 || f.sign == -1),
                  "HypergeometricBranch needs l in (0,2), C != 0, v0 > 0");
        }
      },
      family);

  Composition out;
  WaveMapState& s = out.state;
  s.grid = grid;
  s.time = time;
  const std::size_t n = grid.size();
  s.u1.resize(n);
  s.u2.resize(n);
  s.u1_t.resize(n);
  s.u2_t.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Point pt = compose_point(family, phi[k], phi_t[k]);
    s.u1[k] = pt.u1;
    s.u2[k] = pt.u2;
    s.u1_t[k] = pt.u1_t;
    s.u2_t[k] = pt.u2_t;
    if (!pt.inside && !out.exit) out.exit = exit_at(grid, k, pt.u2, time);
  }
  if (out.exit && policy == ExitPolicy::Throw) {
    fail(ErrorCode::DomainExit, "composition leaves the target at node " + std::to_string(out.exit->index));
  }
  return out;
}

Residual wme_residual(const WaveMapState& prev, const WaveMapState& cur, const WaveMapState& next,
                      const PeriodicProfile& p, double l, int boundary_margin) {
  const TimeDifferences d = time_differences(prev, cur, next);
  const Grid& g = cur.grid;
  for (double u : cur.u2) require(u > 0.0, "wme_residual needs u2 > 0");
  const Coefficients c = coefficients(p, g.dimension(), cur.time);
  Field a1;
  Field a2;
  wave_map_acceleration(g, c, l, cur.u1, cur.u2, d.u1_t, d.u2_t, a1, a2);
  Field r1(a1.size());
  Field r2(a2.size());
  for (std::size_t k = 0; k < a1.size(); ++k) {
    r1[k] = d.u1_tt[k] - a1[k];
    r2[k] = d.u2_tt[k] - a2[k];
  }
  return {max_abs_interior(g, r1, boundary_margin), max_abs_interior(g, r2, boundary_margin)};
}

Residual star_residual(const WaveMapState& prev, const WaveMapState& cur, const WaveMapState& next,
                       const PeriodicProfile& p, int boundary_margin) {
  auto to_log = [](const WaveMapState& s) {
    WaveMapState o = s;
    for (double& u : o.u2) {
      require(u > 0.0, "star_residual needs u2 > 0");
      u = std::log(u);
    }
    return o;
  };
  const WaveMapState a = to_log(prev);
  const WaveMapState b = to_log(cur);
  const WaveMapState e = to_log(next);
  const TimeDifferences d = time_differences(a, b, e);
  const Grid& g = b.grid;
  const Coefficients c = coefficients(p, g.dimension(), b.time);
  const Field& u = b.u1;
  const Field& v = b.u2;
  const Field lap_u = laplacian(g, u);
  const Field lap_v = laplacian(g, v);
  const Field guv = gradient_dot(g, u, v);
  const Field guu = gradient_dot(g, u, u);
  Field r1(u.size());
  Field r2(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    r1[k] = d.u1_tt[k] + c.damping * d.u1_t[k] - c.inv_R2 * lap_u[k] - 2.0 * d.u1_t[k] * d.u2_t[k] +
            2.0 * c.inv_R2 * guv[k];
    r2[k] = d.u2_tt[k] + c.damping * d.u2_t[k] - c.inv_R2 * lap_v[k] +
            std::exp(-2.0 * v[k]) * (d.u1_t[k] * d.u1_t[k] - c.inv_R2 * guu[k]);
  }
  return {max_abs_interior(g, r1, boundary_margin), max_abs_interior(g, r2, boundary_margin)};
}

Residual stationary_residual(const Grid& grid, const Field& u1, const Field& u2, double l, int boundary_margin) {
  require(u1.size() == grid.size() && u2.size() == grid.size(), "fields do not match the grid");
  for (double u : u2) require(u > 0.0, "stationary_residual needs u2 > 0");
  const Field lap1 = laplacian(grid, u1);
  const Field lap2 = laplacian(grid, u2);
  const Field g12 = gradient_dot(grid, u1, u2);
  const Field g11 = gradient_dot(grid, u1, u1);
  const Field g22 = gradient_dot(grid, u2, u2);
  Field r1(u1.size());
  Field r2(u1.size());
  for (std::size_t k = 0; k < u1.size(); ++k) {
    r1[k] = lap1[k] - l / u2[k] * g12[k];
    r2[k] = lap2[k] + l / (2.0 * u2[k]) * (g11[k] - g22[k]);
  }
  return {max_abs_interior(grid, r1, boundary_margin), max_abs_interior(grid, r2, boundary_margin)};
}

double smallness_integral(const WaveMapState& s, double l, int G) {
  check_sizes(s);
  require(G >= 1, "smallness integral needs G >= 1");
  const Grid& g = s.grid;
  Field weight(s.u2.size());
  for (std::size_t k = 0; k < weight.size(); ++k) {
    require(s.u2[k] > 0.0, "smallness integral needs u2 > 0");
    weight[k] = std::pow(s.u2[k], -l);
  }
  double total = 0.0;
  // gamma_0 = 0: purely spatial, orders 1..G; gamma_0 = 1: u_t with spatial orders 0..G-1.
  for (int k = 1; k <= G; ++k) {
    total += spatial_order_integral(g, s.u1, weight, k) + spatial_order_integral(g, s.u2, weight, k);
  }
  for (int k = 0; k <= G - 1; ++k) {
    total += spatial_order_integral(g, s.u1_t, weight, k) + spatial_order_integral(g, s.u2_t, weight, k);
  }
  return total;
}

Trajectory direct_evolve_nonlinear(const WaveMapState& initial, const PeriodicProfile& p, double l, double T,
                                   double dt, const NonlinearOptions& opt) {
  check_sizes(initial);
  require(T >= 0.0 && dt > 0.0, "direct evolver needs T >= 0 and dt > 0");
  const Grid& g = initial.grid;
  const double cfl = 0.5 * g.h * p.min_sampled();
  if (dt > cfl) {
    fail(ErrorCode::CflViolation, "dt = " + std::to_string(dt) + " exceeds 0.5 h min R = " + std::to_string(cfl));
  }
  const int n = g.dimension();
  const std::size_t size = g.size();

  Trajectory traj;
  traj.snapshots.push_back(initial);
  if (auto e = find_exit(initial, opt.u2_floor)) {
    traj.exit = e;
    return traj;
  }

  WaveMapState s = initial;
  const long steps = static_cast<long>(std::ceil(T / dt - 1e-12));
  const double h = steps > 0 ? T / steps : 0.0;

  struct Stage {
    Field d_u1, d_u2, d_u1t, d_u2t;
  };
  auto rates = [&](double t, const Field& u1, const Field& u2, const Field& v1, const Field& v2) {
    Stage st;
    st.d_u1 = v1;
    st.d_u2 = v2;
    wave_map_acceleration(g, coefficients(p, n, t), l, u1, u2, v1, v2, st.d_u1t, st.d_u2t);
    return st;
  };
  auto shifted = [size](const Field& base, const Field& slope, double f) {
    Field out(size);
    for (std::size_t k = 0; k < size; ++k) out[k] = base[k] + f * slope[k];
    return out;
  };

  for (long step = 1; step <= steps; ++step) {
    const double t = s.time;
    const Stage k1 = rates(t, s.u1, s.u2, s.u1_t, s.u2_t);
    const Stage k2 = rates(t + 0.5 * h, shifted(s.u1, k1.d_u1, 0.5 * h), shifted(s.u2, k1.d_u2, 0.5 * h),
                           shifted(s.u1_t, k1.d_u1t, 0.5 * h), shifted(s.u2_t, k1.d_u2t, 0.5 * h));
    const Stage k3 = rates(t + 0.5 * h, shifted(s.u1, k2.d_u1, 0.5 * h), shifted(s.u2, k2.d_u2, 0.5 * h),
                           shifted(s.u1_t, k2.d_u1t, 0.5 * h), shifted(s.u2_t, k2.d_u2t, 0.5 * h));
    const Stage k4 = rates(t + h, shifted(s.u1, k3.d_u1, h), shifted(s.u2, k3.d_u2, h),
                           shifted(s.u1_t, k3.d_u1t, h), shifted(s.u2_t, k3.d_u2t, h));
    const double w = h / 6.0;
    for (std::size_t k = 0; k < size; ++k) {
      s.u1[k] += w * (k1.d_u1[k] + 2.0 * k2.d_u1[k] + 2.0 * k3.d_u1[k] + k4.d_u1[k]);
      s.u2[k] += w * (k1.d_u2[k] + 2.0 * k2.d_u2[k] + 2.0 * k3.d_u2[k] + k4.d_u2[k]);
      s.u1_t[k] += w * (k1.d_u1t[k] + 2.0 * k2.d_u1t[k] + 2.0 * k3.d_u1t[k] + k4.d_u1t[k]);
      s.u2_t[k] += w * (k1.d_u2t[k] + 2.0 * k2.d_u2t[k] + 2.0 * k3.d_u2t[k] + k4.d_u2t[k]);
    }
    s.time = (step == steps) ? initial.time + T : initial.time + step * h;
    traj.steps = step;
    if (opt.on_step) opt.on_step(s);
    if (auto e = find_exit(s, opt.u2_floor)) {
      traj.exit = e;
      traj.snapshots.push_back(s);
      return traj;
    }
    if (opt.record_every > 0 && step % opt.record_every == 0 && step != steps) traj.snapshots.push_back(s);
  }
  if (steps > 0) traj.snapshots.push_back(s);
  return traj;
}

}  // namespace hillwave
