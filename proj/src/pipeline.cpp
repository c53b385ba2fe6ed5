#include "hillwave/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hillwave/error.hpp"

namespace hillwave {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double center_offset(const RunConfig& cfg) { return std::hypot(cfg.phi1.center[0], cfg.phi1.center[1]); }

EvolveOptions evolve_options(const RunConfig& cfg) {
  EvolveOptions eo;
  eo.tol = cfg.ode_tol;
  eo.threads = cfg.threads;
  return eo;
}

// Scalar data with the constant part removed: v(0) = 0, v_t(0) = phi1.
WaveState perturbation(const InitialData& d) {
  WaveState s = d.scalar;
  std::fill(s.v.begin(), s.v.end(), 0.0);
  return s;
}

double log_u2_const(const RunConfig& cfg) { return cfg.l < 2.0 ? 0.0 : std::log(cfg.u2_const); }

struct Margin {
  double value = std::numeric_limits<double>::infinity();
  std::size_t index = 0;
};

// min_x (alpha/mu) v + beta.
Margin exit_margin(const Plan& plan, const Field& v) {
  Margin m;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double r = plan.alpha / plan.mu * v[k] + plan.beta;
    if (r < m.value) {
      m.value = r;
      m.index = k;
    }
  }
  return m;
}

double u2_from_scalar(const RunConfig& cfg, const Plan& plan, double v) {
  if (cfg.l < 2.0) {
    const double r = plan.alpha / plan.mu * v + plan.beta;
    return r > 0.0 ? std::pow(r, plan.mu) : 0.0;
  }
  return std::exp(log_u2_const(cfg) + v);
}

PeriodRow period_row(const RunConfig& cfg, const Plan& plan, const Grid& g, int m, const Field& v) {
  PeriodRow row;
  row.m = m;
  row.l2 = lq_norm(v, g, 2.0);
  row.linf = lq_norm(v, g, std::numeric_limits<double>::infinity());
  row.min_u2 = std::numeric_limits<double>::infinity();
  row.max_u2 = -std::numeric_limits<double>::infinity();
  for (double x : v) {
    const double u2 = u2_from_scalar(cfg, plan, x);
    row.min_u2 = std::min(row.min_u2, u2);
    row.max_u2 = std::max(row.max_u2, u2);
  }
  row.exit_margin = cfg.l < 2.0 ? exit_margin(plan, v).value : kNaN;
  return row;
}

}  // namespace

PeriodicProfile make_profile(const RunConfig& cfg) { return PeriodicProfile::make(cfg.profile_mean, cfg.profile_cos); }

double mu_of(double l) noexcept { return l < 2.0 ? 2.0 / (2.0 - l) : 0.0; }

std::string to_string(BlowupMode mode) {
  switch (mode) {
    case BlowupMode::ExitBelowTwo: return "exit_l_lt_2";
    case BlowupMode::LogGrowthTwo: return "log_growth_l_eq_2";
    case BlowupMode::NoneWithinHorizon: return "none_within_horizon";
  }
  return "none_within_horizon";
}

Plan make_plan(const RunConfig& cfg) {
  Plan plan;
  plan.profile = make_profile(cfg);
  plan.mu = mu_of(cfg.l);
  plan.beta = cfg.l < 2.0 ? std::pow(cfg.u2_const, 1.0 / plan.mu) : 0.0;

  ScanOptions so = cfg.scan;
  so.tol = cfg.ode_tol;
  plan.intervals = scan_trace(plan.profile, cfg.n, so).intervals;
  for (const auto& iv : plan.intervals) {
    if (iv.open_lo || iv.open_hi) continue;
    if (!plan.interval || std::abs(iv.trace_at_star) > std::abs(plan.interval->trace_at_star)) plan.interval = iv;
  }
  if (!plan.interval) {
    plan.diagnostic = plan.intervals.empty()
                          ? "no instability interval in the scanned lambda range"
                          : "instability intervals are cut by the scan range; widen lambda_min/lambda_max";
  } else {
    try {
      plan.selection = select_lambda(plan.profile, cfg.n, *plan.interval, cfg.selection, cfg.ode_tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SelectionFailed) throw;
      plan.diagnostic = e.what();
    }
  }

  if (cfg.phi1.k_star > 0.0) {
    plan.k_star = cfg.phi1.k_star;
  } else if (plan.selection) {
    plan.k_star = std::sqrt(plan.selection->lambda);
  } else {
    plan.k_star = 1.0;
  }

  if (cfg.l < 2.0) {
    if (cfg.alpha) {
      plan.alpha = *cfg.alpha;
    } else if (plan.selection && cfg.phi1.amplitude > 0.0) {
      // Predicted max |v(m)| ~ |W_m(lambda)| eps max|bump|, max|bump| = 1.
      const double W = closed_form_wv(plan.selection->monodromy, cfg.target_period).W;
      require(std::abs(W) > 0.0, "alpha tuning: W vanishes at the target period");
      plan.alpha = -plan.mu * plan.beta / (2.0 * std::abs(W) * cfg.phi1.amplitude);
      plan.alpha_tuned = true;
    } else {
      plan.alpha = -plan.mu * plan.beta;
    }
  }
  return plan;
}

InitialData build_initial_data(const RunConfig& cfg, const Plan& plan, const Grid& grid) {
  const Field phi1 =
      resonant_bump(grid, cfg.phi1.width, plan.k_star, cfg.phi1.amplitude, cfg.phi1.center[0], cfg.phi1.center[1]);
  const std::size_t size = grid.size();
  InitialData d;
  WaveMapState& m = d.map;
  m.grid = grid;
  m.time = 0.0;
  m.u1.assign(size, cfg.u1_const);
  m.u2.assign(size, cfg.u2_const);
  m.u1_t.assign(size, 0.0);
  m.u2_t.resize(size);
  // phi0 = 0, so (alpha/mu) phi0 + beta = beta.
  const double scale = cfg.l < 2.0 ? plan.alpha * std::pow(plan.beta, plan.mu - 1.0) : cfg.u2_const;
  for (std::size_t k = 0; k < size; ++k) m.u2_t[k] = scale * phi1[k];

  WaveState& s = d.scalar;
  s.grid = grid;
  s.gauge = Gauge::V;
  s.time = 0.0;
  s.v.assign(size, log_u2_const(cfg));
  s.v_t = phi1;
  return d;
}

Grid demo_grid(const RunConfig& cfg, const Plan& plan, double T) {
  return spectral_box(cfg.n, cfg.phi1.width + center_offset(cfg), T, plan.profile, plan.k_star, cfg.box_margin,
                      cfg.points_per_wavelength);
}

Grid smallness_grid(const RunConfig& cfg, const Plan& plan) {
  const double h = 2.0 * std::numbers::pi / (plan.k_star * cfg.smallness_points_per_wavelength);
  const double extent = cfg.phi1.width + cfg.box_margin;
  if (cfg.n == 2 && center_offset(cfg) == 0.0) {
    return radial_grid(extent, static_cast<int>(std::ceil(extent / h)));
  }
  if (cfg.n == 1) {
    const double half = extent + center_offset(cfg);
    return line_grid(half, static_cast<int>(std::ceil(2.0 * half / h)), false);
  }
  return demo_grid(cfg, plan, 0.0);
}

BlowupReport run_demo(const RunConfig& cfg) {
  validate(cfg);
  BlowupReport rep;
  rep.epsilon = cfg.phi1.amplitude;
  const Plan plan = make_plan(cfg);
  rep.interval = plan.interval;
  rep.k_star = plan.k_star;
  rep.alpha = plan.alpha;
  rep.beta = plan.beta;
  rep.mu = plan.mu;
  if (plan.selection) {
    rep.lambda_used = plan.selection->lambda;
    rep.mu0_used = std::abs(plan.selection->multipliers.mu0.real());
    rep.ln_mu0_used = growth_exponent(plan.selection->monodromy);
  }

  {
    const Grid sg = smallness_grid(cfg, plan);
    try {
      rep.smallness = smallness_integral(build_initial_data(cfg, plan, sg).map, cfg.l, cfg.G);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnsupportedOrder) throw;
      rep.smallness = smallness_integral(build_initial_data(cfg, plan, demo_grid(cfg, plan, 0.0)).map, cfg.l, cfg.G);
    }
  }
  if (!plan.selection) {
    rep.diagnostic = plan.diagnostic;
    return rep;
  }

  const Grid grid = demo_grid(cfg, plan, cfg.m_max);
  rep.grid_points = grid.points;
  rep.grid_length = grid.length();
  const InitialData data = build_initial_data(cfg, plan, grid);

  GrowthReport& gr = rep.growth;
  gr.q = std::numeric_limits<double>::infinity();
  gr.intervals = plan.intervals;
  gr.fit_lo = cfg.fit_min;
  gr.fit_hi = cfg.fit_max > 0 ? cfg.fit_max : cfg.m_max;
  {
    const ResonantEnergy re =
        resonant_energy(plan.profile, grid, data.scalar.v_t, plan.intervals, cfg.support_threshold, cfg.ode_tol);
    gr.resonant_energy = re.share;
    gr.mu0_ref = re.mu0_ref;
    gr.lambda_ref = re.lambda_ref;
    if (re.share < cfg.energy_threshold) {
      rep.diagnostic = "phi1 carries too little spectral energy on the instability intervals";
      return rep;
    }
  }

  const EvolveOptions eo = evolve_options(cfg);
  const bool below_two = cfg.l < 2.0;
  WaveState cur = perturbation(data);
  std::vector<double> sup{0.0};
  std::vector<double> inf{0.0};
  rep.periods.push_back(period_row(cfg, plan, grid, 0, cur.v));
  bool exited = false;

  for (int m = 1; m <= cfg.m_max; ++m) {
    std::vector<double> times;
    const bool watch = below_two && !exited;
    if (watch) {
      for (int j = 1; j < cfg.exit_subsamples; ++j) times.push_back((m - 1) + static_cast<double>(j) / cfg.exit_subsamples);
    }
    times.push_back(m);
    std::vector<WaveState> states = evolve_linear(cur, plan.profile, times, eo);

    if (watch) {
      const WaveState* before = &cur;
      for (const WaveState& s : states) {
        if (exit_margin(plan, s.v).value > 0.0) {
          before = &s;
          continue;
        }
        // Bisect the sign change of the margin on (before.time, s.time].
        WaveState a = *before;
        WaveState b = s;
        while (b.time - a.time > cfg.exit_tol) {
          const double mid = 0.5 * (a.time + b.time);
          if (!(mid > a.time && mid < b.time)) break;
          const std::vector<double> t_mid{mid};
          WaveState probe = evolve_linear(a, plan.profile, t_mid, eo).front();
          if (exit_margin(plan, probe.v).value > 0.0) {
            a = std::move(probe);
          } else {
            b = std::move(probe);
          }
        }
        const Margin mg = exit_margin(plan, b.v);
        double x = 0.0;
        double y = 0.0;
        grid.position(mg.index, x, y);
        rep.t_bp = b.time;
        rep.x_bp = std::array<double, 2>{x, y};
        rep.exit_period = m;
        rep.exit_value = mg.value;
        exited = true;
        break;
      }
    }
    cur = std::move(states.back());
    rep.periods.push_back(period_row(cfg, plan, grid, m, cur.v));
    const auto [lo, hi] = std::minmax_element(cur.v.begin(), cur.v.end());
    sup.push_back(*hi);
    inf.push_back(*lo);
  }

  for (const PeriodRow& row : rep.periods) {
    gr.times.push_back(row.m);
    gr.l2.push_back(row.l2);
    gr.linf.push_back(row.linf);
    gr.norms.push_back(row.linf);
  }
  const LogFit fit = fit_log_rate(gr.times, gr.linf, gr.fit_lo, gr.fit_hi);
  gr.delta_hat = fit.rate;
  gr.intercept = fit.intercept;
  gr.delta_hat_linf = fit.rate;
  gr.delta_hat_l2 = fit_log_rate(gr.times, gr.l2, gr.fit_lo, gr.fit_hi).rate;

  if (below_two) {
    if (exited) {
      rep.mode = BlowupMode::ExitBelowTwo;
    } else {
      rep.diagnostic = "no exit up to m_max";
    }
    return rep;
  }

  Dichotomy dc;
  dc.m_lo = gr.fit_lo;
  dc.m_hi = gr.fit_hi;
  dc.delta_hat = fit.rate;
  dc.intercept = fit.intercept;
  dc.c0 = std::numeric_limits<double>::infinity();
  for (int m = dc.m_lo; m <= dc.m_hi; ++m) {
    const double y = std::max(sup[m], -inf[m]);
    dc.c0 = std::min(dc.c0, y * std::exp(-dc.delta_hat * m));
  }
  for (int m = dc.m_lo; m <= dc.m_hi; ++m) {
    const double bound = dc.c0 * std::exp(dc.delta_hat * m);
    const bool s = sup[m] >= bound;
    const bool i = -inf[m] >= bound;
    dc.m.push_back(m);
    dc.sup.push_back(sup[m]);
    dc.inf.push_back(inf[m]);
    dc.branch.push_back(s && i ? "both" : (s ? "sup" : "inf"));
  }
  rep.dichotomy = dc;
  if (dc.delta_hat > 0.0) {
    rep.mode = BlowupMode::LogGrowthTwo;
  } else {
    rep.diagnostic = "no exponential growth of ln u2 in the fit window";
  }
  return rep;
}

CrossValReport cross_validate(const RunConfig& cfg) {
  validate(cfg);
  require(cfg.n == 1 || (cfg.n == 2 && center_offset(cfg) == 0.0),
          "cross-validation needs n = 1, or n = 2 with a centred (radial) bump");
  const Plan plan = make_plan(cfg);
  CrossValReport rep;
  rep.T = cfg.crossval.T;
  rep.alpha = plan.alpha;

  const Grid sg = demo_grid(cfg, plan, rep.T);
  const InitialData ref = build_initial_data(cfg, plan, sg);
  const std::vector<double> t_end{rep.T};
  const Field v_T = evolve_linear(perturbation(ref), plan.profile, t_end, evolve_options(cfg)).front().v;

  const double extent = cfg.phi1.width + center_offset(cfg) + rep.T / plan.profile.min_sampled() + cfg.box_margin;
  const double h0 = cfg.crossval.h;
  const int base = static_cast<int>(std::ceil(extent / h0));
  NonlinearOptions no;
  no.u2_floor = cfg.u2_floor;
  for (int level = 0; level < cfg.crossval.levels; ++level) {
    const int refine = 1 << level;
    const Grid fd = cfg.n == 2 ? radial_grid(base * h0, base * refine) : line_grid(base * h0, 2 * base * refine, false);
    const InitialData d = build_initial_data(cfg, plan, fd);
    const double dt = cfg.crossval.cfl * fd.h * plan.profile.min_sampled();
    const Trajectory tr = direct_evolve_nonlinear(d.map, plan.profile, cfg.l, rep.T, dt, no);
    rep.h.push_back(fd.h);
    if (tr.exit) {
      rep.exited = true;
      rep.discrepancy.push_back(kNaN);
      rep.u1_drift.push_back(kNaN);
      continue;
    }
    const WaveMapState& fin = tr.snapshots.back();
    std::vector<double> xs(fd.size());
    for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = fd.coord(static_cast<int>(k));
    const Field v = sample_x_axis(sg, v_T, xs);
    double num = 0.0;
    double den = 0.0;
    double drift = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      const double u2_ref = u2_from_scalar(cfg, plan, v[k]);
      num = std::max(num, std::abs(fin.u2[k] - u2_ref));
      den = std::max(den, std::abs(u2_ref - cfg.u2_const));
      drift = std::max(drift, std::abs(fin.u1[k] - cfg.u1_const));
    }
    rep.discrepancy.push_back(den > 0.0 ? num / den : num);
    rep.u1_drift.push_back(drift);
  }
  for (std::size_t k = 0; k + 1 < rep.discrepancy.size(); ++k) {
    rep.ratios.push_back(rep.discrepancy[k] / rep.discrepancy[k + 1]);
  }
  return rep;
}

}  // namespace hillwave
