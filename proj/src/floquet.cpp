#include "hillwave/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "hillwave/error.hpp"
#include "hillwave/ode.hpp"

namespace hillwave {

Mat2 operator*(const Mat2& a, const Mat2& b) noexcept {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

Mat2 identity2() noexcept { return {{{1.0, 0.0}, {0.0, 1.0}}}; }

Mat2 power(const Mat2& a, int m) noexcept {
  Mat2 result = identity2();
  Mat2 base = a;
  while (m > 0) {
    if (m & 1) result = result * base;
    base = base * base;
    m >>= 1;
  }
  return result;
}

Mat2 fundamental_matrix(const PeriodicProfile& p, int n, double lambda, double t0, double t1, double tol) {
  require(tol > 0.0, "fundamental_matrix: tol must be positive");
  require(n >= 1, "fundamental_matrix: n must be >= 1");
  require(t1 >= t0, "fundamental_matrix: t1 must not precede t0");
  // Columns of X packed as (x11, x21, x12, x22); each column obeys
  // d/dt (w_t, w) = ((-lambda alpha + q) w, w_t).
  auto rhs = [&p, n, lambda](const ode::State<4>& x, ode::State<4>& dx, double t) {
    const double k = -lambda * p.alpha(t).value + p.potential_q(n, t);
    dx[0] = k * x[1];
    dx[1] = x[0];
    dx[2] = k * x[3];
    dx[3] = x[2];
  };
  ode::Options opt;
  opt.tol = tol;
  opt.initial_step = 1e-3;
  const ode::State<4> x = ode::integrate(rhs, ode::State<4>{1.0, 0.0, 0.0, 1.0}, t0, t1, opt);
  return {{{x[0], x[2]}, {x[1], x[3]}}};
}

Monodromy monodromy(const PeriodicProfile& p, int n, double lambda, double tol) {
  const Mat2 x = fundamental_matrix(p, n, lambda, 0.0, 1.0, tol);
  Monodromy m;
  m.lambda = lambda;
  m.b11 = x[0][0];
  m.b12 = x[0][1];
  m.b21 = x[1][0];
  m.b22 = x[1][1];
  m.integrator_tol = tol;
  return m;
}

Multipliers multipliers(double trace) noexcept {
  Multipliers out;
  const double disc = (std::abs(trace) - 2.0) * (std::abs(trace) + 2.0);
  if (disc >= 0.0) {
    // Larger root in modulus without cancellation; the other is its inverse.
    const double big = 0.5 * (std::abs(trace) + std::sqrt(disc));
    const double mu = std::copysign(big, trace);
    out.mu0 = mu;
    out.mu0_inv = 1.0 / mu;
    out.unstable = disc > 0.0;
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    out.mu0 = {0.5 * trace, im};
    out.mu0_inv = {0.5 * trace, -im};
  }
  return out;
}

double growth_exponent(const Monodromy& m) noexcept {
  const Multipliers mu = multipliers(m);
  return mu.unstable ? std::log(std::abs(mu.mu0.real())) : 0.0;
}

namespace {

ScanSample sample_at(const PeriodicProfile& p, int n, double lambda, const ScanOptions& opt) {
  const Monodromy m = monodromy(p, n, lambda, opt.tol);
  ScanSample s;
  s.lambda = lambda;
  s.trace = m.trace();
  s.det_err = m.det() - 1.0;
  s.unstable = std::abs(s.trace) - 2.0 > opt.instability_margin;
  const Multipliers mu = multipliers(s.trace);
  s.mu0 = mu.unstable ? mu.mu0.real() : 1.0;
  return s;
}

// Bisect between a stable and an unstable lambda until the bracket is below edge_tol.
double bisect_edge(const PeriodicProfile& p, int n, double stable, double unstable, const ScanOptions& opt) {
  while (std::abs(unstable - stable) > opt.edge_tol) {
    const double mid = 0.5 * (stable + unstable);
    if (sample_at(p, n, mid, opt).unstable) {
      unstable = mid;
    } else {
      stable = mid;
    }
  }
  return 0.5 * (stable + unstable);
}

}  // namespace

ScanResult scan_trace(const PeriodicProfile& p, int n, const ScanOptions& opt) {
  require(opt.lambda_min > 0.0 && opt.lambda_max > opt.lambda_min, "scan: lambda range must lie in (0, inf)");
  require(opt.steps >= 2, "scan: steps must be >= 2");
  require(opt.edge_tol > 0.0, "scan: edge_tol must be positive");

  ScanResult out;
  out.samples.reserve(static_cast<std::size_t>(opt.steps));
  const double dl = (opt.lambda_max - opt.lambda_min) / (opt.steps - 1);
  for (int i = 0; i < opt.steps; ++i) {
    const double lambda = (i == opt.steps - 1) ? opt.lambda_max : opt.lambda_min + i * dl;
    out.samples.push_back(sample_at(p, n, lambda, opt));
  }

  const auto& s = out.samples;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!s[i].unstable) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < s.size() && s[j + 1].unstable) ++j;

    InstabilityInterval iv;
    iv.edge_tol = opt.edge_tol;
    if (i == 0) {
      iv.lambda_lo = s[0].lambda;
      iv.open_lo = true;
    } else {
      iv.lambda_lo = bisect_edge(p, n, s[i - 1].lambda, s[i].lambda, opt);
    }
    if (j + 1 == s.size()) {
      iv.lambda_hi = s[j].lambda;
      iv.open_hi = true;
    } else {
      iv.lambda_hi = bisect_edge(p, n, s[j + 1].lambda, s[j].lambda, opt);
    }
    std::size_t best = i;
    for (std::size_t k = i; k <= j; ++k) {
      if (std::abs(s[k].trace) > std::abs(s[best].trace)) best = k;
    }
    iv.lambda_star = s[best].lambda;
    iv.trace_at_star = s[best].trace;
    {
      // Polish the grid argmax of |trace| inside the neighbouring cells.
      const double a = std::max(iv.lambda_lo, s[best].lambda - dl);
      const double b = std::min(iv.lambda_hi, s[best].lambda + dl);
      if (b > a) {
        boost::uintmax_t iters = 100;
        const auto r = boost::math::tools::brent_find_minima(
            [&](double lambda) { return -std::abs(sample_at(p, n, lambda, opt).trace); }, a, b, 40, iters);
        if (-r.second > std::abs(iv.trace_at_star)) {
          iv.lambda_star = r.first;
          iv.trace_at_star = sample_at(p, n, r.first, opt).trace;
        }
      }
    }
    // A single unstable grid point may sit exactly on a clamped edge.
    if (iv.lambda_star <= iv.lambda_lo || iv.lambda_star >= iv.lambda_hi) {
      iv.lambda_star = 0.5 * (iv.lambda_lo + iv.lambda_hi);
      iv.trace_at_star = sample_at(p, n, iv.lambda_star, opt).trace;
    }
    out.intervals.push_back(iv);
    i = j + 1;
  }
  return out;
}

std::vector<InstabilityInterval> scan_instability(const PeriodicProfile& p, int n, const ScanOptions& opt) {
  ScanResult r = scan_trace(p, n, opt);
  if (r.intervals.empty()) {
    fail(ErrorCode::NoInstabilityFound,
         "no instability interval found in [" + std::to_string(opt.lambda_min) + ", " +
             std::to_string(opt.lambda_max) + "]; widen the range or change the profile");
  }
  return std::move(r.intervals);
}

Selection select_lambda(const PeriodicProfile& p, int n, const InstabilityInterval& interval,
                        const SelectionThresholds& thresholds, double tol) {
  require(interval.lambda_lo < interval.lambda_star && interval.lambda_star < interval.lambda_hi,
          "select_lambda: interval must contain lambda_star strictly inside");
  require(thresholds.subgrid >= 2, "select_lambda: subgrid must have at least two points");

  const int count = thresholds.subgrid;
  std::vector<double> candidates;
  candidates.reserve(static_cast<std::size_t>(count) + 1);
  candidates.push_back(interval.lambda_star);
  // Interior subgrid, visited in order of distance from lambda_star.
  const double width = interval.lambda_hi - interval.lambda_lo;
  for (int k = 1; k <= count; ++k) {
    candidates.push_back(interval.lambda_lo + width * k / (count + 1));
  }
  std::stable_sort(candidates.begin() + 1, candidates.end(), [&](double a, double b) {
    return std::abs(a - interval.lambda_star) < std::abs(b - interval.lambda_star);
  });

  for (double lambda : candidates) {
    const Monodromy m = monodromy(p, n, lambda, tol);
    const Multipliers mu = multipliers(m);
    if (!mu.unstable) continue;
    const double inv = mu.mu0_inv.real();
    if (std::abs(m.b21) > thresholds.b21_min && std::abs(m.b22 - inv) > thresholds.b22_gap_min) {
      return {lambda, m, mu};
    }
  }
  fail(ErrorCode::SelectionFailed, "no subgrid point satisfies the b21 / b22 thresholds");
}

WV closed_form_wv(const Monodromy& m, int periods) {
  require(periods >= 0, "closed_form_wv: periods must be >= 0");
  require(std::abs(m.trace()) >= 2.0, "closed_form_wv: monodromy must be unstable");
  const Multipliers mu = multipliers(m);
  const double mu0 = mu.mu0.real();
  const double inv = mu.mu0_inv.real();
  const double gap = mu0 - inv;
  if (std::abs(gap) < 1e-12) fail(ErrorCode::DegenerateMonodromy, "mu0 - 1/mu0 vanishes");
  require(m.b21 != 0.0, "closed_form_wv: b21 must be non-zero");
  require(m.b22 != inv, "closed_form_wv: b22 must differ from 1/mu0");

  const double up = std::pow(mu0, periods);
  const double down = std::pow(inv, periods);
  // b21 b12 / (mu0 - b11) equals mu0 - b22 on the characteristic equation; the
  // latter keeps V(0) = gap / gap = 1 exact.
  WV out;
  out.W = m.b21 * (up - down) / gap;
  out.V = (up * (m.b22 - inv) + down * (mu0 - m.b22)) / gap;
  return out;
}

}  // namespace hillwave
