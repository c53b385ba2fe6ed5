#include "hillwave/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

#include <fftw3.h>

#include "hillwave/error.hpp"
#include "hillwave/ode.hpp"

namespace hillwave {

namespace {

using cplx = std::complex<double>;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void check_spectral_grid(const Grid& g) {
  require(g.periodic && (g.kind == GridKind::Line || g.kind == GridKind::Plane),
          "spectral evolution needs a periodic Line or Plane grid");
  require(g.points % 2 == 0, "spectral grid needs an even point count");
}

std::size_t spectrum_size(const Grid& g) {
  const std::size_t half = static_cast<std::size_t>(g.points / 2 + 1);
  return g.kind == GridKind::Line ? half : half * static_cast<std::size_t>(g.points);
}

// Integer |k|^2 of each half-spectrum coefficient, and its multiplicity in
// the full spectrum (for energy sums).
void spectrum_keys(const Grid& g, std::vector<long>& key, std::vector<double>& mult) {
  const int n = g.points;
  const int half = n / 2 + 1;
  key.resize(spectrum_size(g));
  mult.resize(key.size());
  auto m_of = [n](int ix) { return (ix == 0 || ix == n / 2) ? 1.0 : 2.0; };
  if (g.kind == GridKind::Line) {
    for (int ix = 0; ix < half; ++ix) {
      key[ix] = static_cast<long>(ix) * ix;
      mult[ix] = m_of(ix);
    }
    return;
  }
  for (int iy = 0; iy < n; ++iy) {
    const long ky = iy <= n / 2 ? iy : iy - n;
    for (int ix = 0; ix < half; ++ix) {
      const std::size_t k = static_cast<std::size_t>(iy) * half + ix;
      key[k] = static_cast<long>(ix) * ix + ky * ky;
      mult[k] = m_of(ix);
    }
  }
}

std::vector<cplx> forward(const Grid& g, const Field& f) {
  require(f.size() == g.size(), "field size does not match grid");
  std::vector<double> in(f);
  std::vector<cplx> out(spectrum_size(g));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    auto* o = reinterpret_cast<fftw_complex*>(out.data());
    plan = g.kind == GridKind::Line ? fftw_plan_dft_r2c_1d(g.points, in.data(), o, FFTW_ESTIMATE)
                                    : fftw_plan_dft_r2c_2d(g.points, g.points, in.data(), o, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

Field inverse(const Grid& g, std::vector<cplx> spec) {
  Field out(g.size());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    auto* in = reinterpret_cast<fftw_complex*>(spec.data());
    plan = g.kind == GridKind::Line ? fftw_plan_dft_c2r_1d(g.points, in, out.data(), FFTW_ESTIMATE)
                                    : fftw_plan_dft_c2r_2d(g.points, g.points, in, out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double scale = 1.0 / static_cast<double>(g.size());
  for (double& x : out) x *= scale;
  return out;
}

// Propagators X(t_k, t0) acting on (f_t, f) for one mode.
std::vector<Mat2> mode_propagators(const PeriodicProfile& p, int n, double lambda, Gauge gauge, double t0,
                                   std::span<const double> times, double tol) {
  auto rhs = [&p, n, lambda, gauge](const ode::State<4>& x, ode::State<4>& dx, double t) {
    double a = 0.0;  // coefficient of f_t
    double b;        // coefficient of f
    if (gauge == Gauge::W) {
      b = -lambda * p.alpha(t).value + p.potential_q(n, t);
    } else {
      const Jet r = p.R(t);
      a = -n * r.d1 / r.value;
      b = -lambda / (r.value * r.value);
    }
    dx[0] = a * x[0] + b * x[1];
    dx[1] = x[0];
    dx[2] = a * x[2] + b * x[3];
    dx[3] = x[2];
  };
  ode::Options opt;
  opt.tol = tol;
  opt.initial_step = 1e-3;
  ode::AdaptiveIntegrator<4> integ(opt);
  ode::State<4> x{1.0, 0.0, 0.0, 1.0};
  double t = t0;
  std::vector<Mat2> out(times.size());
  integ.integrate_to(rhs, x, t, times, [&out](std::size_t i, const ode::State<4>& y) {
    out[i] = {{{y[0], y[2]}, {y[1], y[3]}}};
  });
  return out;
}

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(threads > 0 ? threads : 1, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

WaveState liouville_to_w(const WaveState& s, const PeriodicProfile& p) {
  require(s.gauge == Gauge::V, "liouville_to_w expects v-gauge data");
  const double h = 0.5 * s.grid.dimension();
  const Jet r = p.R(s.time);
  const double f = std::pow(r.value, h);
  const double g = h * std::pow(r.value, h - 1.0) * r.d1;
  WaveState o = s;
  o.gauge = Gauge::W;
  for (std::size_t k = 0; k < s.v.size(); ++k) {
    o.v[k] = f * s.v[k];
    o.v_t[k] = f * s.v_t[k] + g * s.v[k];
  }
  return o;
}

WaveState liouville_to_v(const WaveState& s, const PeriodicProfile& p) {
  require(s.gauge == Gauge::W, "liouville_to_v expects w-gauge data");
  const double h = 0.5 * s.grid.dimension();
  const Jet r = p.R(s.time);
  const double f = std::pow(r.value, -h);
  const double d = h * r.d1 / r.value;
  WaveState o = s;
  o.gauge = Gauge::V;
  for (std::size_t k = 0; k < s.v.size(); ++k) {
    o.v[k] = f * s.v[k];
    o.v_t[k] = f * (s.v_t[k] - d * s.v[k]);
  }
  return o;
}

std::vector<WaveState> evolve_linear(const WaveState& s, const PeriodicProfile& p, std::span<const double> times,
                                     const EvolveOptions& opt) {
  check_spectral_grid(s.grid);
  require(s.v.size() == s.grid.size() && s.v_t.size() == s.grid.size(), "wave state does not match its grid");
  require(opt.tol > 0.0, "evolve_linear: tol must be positive");
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(times[i] >= s.time && (i == 0 || times[i] >= times[i - 1]), "output times must be non-decreasing");
  }
  const int n = s.grid.dimension();
  std::vector<long> key;
  std::vector<double> mult;
  spectrum_keys(s.grid, key, mult);

  std::map<long, std::size_t> slot;
  for (long k : key) slot.emplace(k, 0);
  std::vector<long> distinct;
  distinct.reserve(slot.size());
  for (auto& [k, idx] : slot) {
    idx = distinct.size();
    distinct.push_back(k);
  }
  const double dk = 2.0 * std::numbers::pi / s.grid.length();
  std::vector<std::vector<Mat2>> props(distinct.size());
  parallel_for(distinct.size(), opt.threads, [&](std::size_t i) {
    const double lambda = dk * dk * static_cast<double>(distinct[i]);
    props[i] = mode_propagators(p, n, lambda, s.gauge, s.time, times, opt.tol);
  });

  const std::vector<cplx> f0 = forward(s.grid, s.v);
  const std::vector<cplx> f1 = forward(s.grid, s.v_t);
  std::vector<WaveState> out;
  out.reserve(times.size());
  std::vector<cplx> a(f0.size());
  std::vector<cplx> b(f0.size());
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    for (std::size_t k = 0; k < f0.size(); ++k) {
      const Mat2& m = props[slot[key[k]]][ti];
      b[k] = m[0][0] * f1[k] + m[0][1] * f0[k];
      a[k] = m[1][0] * f1[k] + m[1][1] * f0[k];
    }
    WaveState w;
    w.grid = s.grid;
    w.gauge = s.gauge;
    w.time = times[ti];
    w.v = inverse(s.grid, a);
    w.v_t = inverse(s.grid, b);
    out.push_back(std::move(w));
  }
  return out;
}

double lq_norm(const Field& f, const Grid& g, double q) {
  require(f.size() == g.size(), "field size does not match grid");
  require(q >= 2.0, "lq_norm needs q >= 2");
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : f) m = std::max(m, std::abs(x));
    return m;
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) sum += std::pow(std::abs(f[k]), q) * g.weight(k);
  return std::pow(sum, 1.0 / q);
}

LogFit fit_log_rate(std::span<const int> m, std::span<const double> y, int lo, int hi) {
  require(m.size() == y.size(), "fit_log_rate: size mismatch");
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < lo || m[i] > hi || !(y[i] > 0.0)) continue;
    const double x = m[i];
    const double ly = std::log(y[i]);
    sx += x;
    sy += ly;
    sxx += x * x;
    sxy += x * ly;
    ++count;
  }
  require(count >= 2, "fit_log_rate needs at least two positive points in the window");
  const double det = count * sxx - sx * sx;
  LogFit fit;
  fit.rate = (count * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.rate * sx) / count;
  fit.points = count;
  return fit;
}

Grid spectral_box(int n, double support, double T, const PeriodicProfile& p, double k_star, double margin,
                  double ppw) {
  require(n == 1 || n == 2, "spectral_box supports n = 1 or 2");
  require(support > 0.0 && T >= 0.0 && k_star > 0.0 && margin >= 0.0 && ppw >= 4.0, "spectral_box: invalid extent");
  const double half = support + T / p.min_sampled() + margin;
  const double dx = 2.0 * std::numbers::pi / (k_star * ppw);
  int points = static_cast<int>(std::ceil(2.0 * half / dx));
  points = ((points + 31) / 32) * 32;
  return n == 1 ? line_grid(half, points, true) : plane_grid(half, points);
}

Field resonant_bump(const Grid& g, double width, double k_star, double amplitude, double cx, double cy) {
  require(width > 0.0, "bump width must be positive");
  Field f(g.size(), 0.0);
  for (std::size_t k = 0; k < f.size(); ++k) {
    double x = 0.0;
    double y = 0.0;
    g.position(k, x, y);
    const double r = g.kind == GridKind::Radial ? g.radius(k) : std::hypot(x - cx, y - cy);
    const double s = r / width;
    if (s >= 1.0) continue;
    f[k] = amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s)) * std::cos(k_star * r);
  }
  return f;
}

ResonantEnergy resonant_energy(const PeriodicProfile& p, const Grid& grid, const Field& phi,
                               const std::vector<InstabilityInterval>& intervals, double support_threshold,
                               double tol) {
  check_spectral_grid(grid);
  std::vector<long> key;
  std::vector<double> mult;
  spectrum_keys(grid, key, mult);
  const std::vector<cplx> ph = forward(grid, phi);
  const double dk = 2.0 * std::numbers::pi / grid.length();
  double total = 0.0;
  double resonant = 0.0;
  double peak = 0.0;
  for (const cplx& c : ph) peak = std::max(peak, std::norm(c));
  std::map<long, bool> supported;
  for (std::size_t k = 0; k < ph.size(); ++k) {
    const double e = mult[k] * std::norm(ph[k]);
    total += e;
    const double lambda = dk * dk * static_cast<double>(key[k]);
    const bool in = std::any_of(intervals.begin(), intervals.end(), [lambda](const InstabilityInterval& iv) {
      return lambda > iv.lambda_lo && lambda < iv.lambda_hi;
    });
    if (!in) continue;
    resonant += e;
    if (std::norm(ph[k]) >= support_threshold * peak) supported[key[k]] = true;
  }
  ResonantEnergy out;
  out.share = total > 0.0 ? resonant / total : 0.0;
  for (const auto& entry : supported) {
    const double lambda = dk * dk * static_cast<double>(entry.first);
    const double g = growth_exponent(monodromy(p, grid.dimension(), lambda, tol));
    if (g > out.mu0_ref) {
      out.mu0_ref = g;
      out.lambda_ref = lambda;
    }
  }
  return out;
}

Field sample_x_axis(const Grid& g, const Field& f, std::span<const double> xs) {
  check_spectral_grid(g);
  require(f.size() == g.size(), "field size does not match grid");
  const int n = g.points;
  Field row(n);
  if (g.kind == GridKind::Line) {
    row = f;
  } else {
    const std::size_t iy = static_cast<std::size_t>(n / 2);  // the node row y = 0
    std::copy(f.begin() + iy * n, f.begin() + (iy + 1) * n, row.begin());
  }
  const Grid line = line_grid(0.5 * g.length(), n, true);
  const std::vector<cplx> c = forward(line, row);
  const double L = g.length();
  Field out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double theta = 2.0 * std::numbers::pi * (xs[i] - g.x0) / L;
    double sum = c[0].real();
    for (int k = 1; k < n / 2; ++k) sum += 2.0 * (c[k] * std::polar(1.0, k * theta)).real();
    sum += c[n / 2].real() * std::cos(0.5 * n * theta);
    out[i] = sum / n;
  }
  return out;
}

GrowthReport growth_at_integers(const PeriodicProfile& p, const Grid& grid, const Field& phi,
                                const GrowthOptions& opt) {
  check_spectral_grid(grid);
  require(phi.size() == grid.size(), "phi does not match the grid");
  require(opt.m_max >= 1 && opt.fit_min >= 0 && opt.fit_min < opt.m_max, "growth: invalid m window");
  GrowthReport rep;
  rep.q = opt.q;
  rep.fit_lo = opt.fit_min;
  rep.fit_hi = opt.fit_max > 0 ? opt.fit_max : opt.m_max;
  require(rep.fit_hi <= opt.m_max && rep.fit_lo < rep.fit_hi, "growth: invalid fit window");
  rep.intervals = scan_trace(p, grid.dimension(), opt.scan).intervals;

  const ResonantEnergy re = resonant_energy(p, grid, phi, rep.intervals, opt.support_threshold, opt.evolve.tol);
  rep.resonant_energy = re.share;
  rep.mu0_ref = re.mu0_ref;
  rep.lambda_ref = re.lambda_ref;
  if (rep.resonant_energy < opt.energy_threshold && opt.require_resonant_energy) {
    fail(ErrorCode::NoResonantEnergy, "initial data carry a resonant energy share of " +
                                          std::to_string(rep.resonant_energy) + " (threshold " +
                                          std::to_string(opt.energy_threshold) + ")");
  }

  WaveState s;
  s.grid = grid;
  s.gauge = opt.gauge;
  s.v = opt.loading == Loading::Displacement ? phi : Field(grid.size(), 0.0);
  s.v_t = opt.loading == Loading::Velocity ? phi : Field(grid.size(), 0.0);
  std::vector<double> times;
  for (int m = 1; m <= opt.m_max; ++m) times.push_back(m);
  const std::vector<WaveState> states = evolve_linear(s, p, times, opt.evolve);

  auto record = [&](int m, const Field& f) {
    rep.times.push_back(m);
    rep.norms.push_back(lq_norm(f, grid, opt.q));
    rep.l2.push_back(lq_norm(f, grid, 2.0));
    rep.linf.push_back(lq_norm(f, grid, std::numeric_limits<double>::infinity()));
  };
  record(0, s.v);
  for (std::size_t i = 0; i < states.size(); ++i) record(static_cast<int>(times[i]), states[i].v);

  const LogFit fq = fit_log_rate(rep.times, rep.norms, rep.fit_lo, rep.fit_hi);
  rep.delta_hat = fq.rate;
  rep.intercept = fq.intercept;
  rep.delta_hat_l2 = fit_log_rate(rep.times, rep.l2, rep.fit_lo, rep.fit_hi).rate;
  rep.delta_hat_linf = fit_log_rate(rep.times, rep.linf, rep.fit_lo, rep.fit_hi).rate;
  return rep;
}

}  // namespace hillwave
