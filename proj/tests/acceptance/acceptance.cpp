// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance <path-to-hillwave-cli> <configs-dir>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "hillwave/error.hpp"
#include "hillwave/floquet.hpp"
#include "hillwave/geometry.hpp"
#include "hillwave/hypergeom.hpp"
#include "hillwave/pipeline.hpp"
#include "hillwave/spectral.hpp"
#include "hillwave/wavemap.hpp"

namespace fs = std::filesystem;
using namespace hillwave;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string g(double x) { return fmt::format("{:.6g}", x); }

// 1. det X(1,0) = 1 for random profiles, dimensions and lambdas.
Outcome wronskian() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mean = 0.8 + 0.7 * unit(rng);
    const int harmonics = 1 + static_cast<int>(unit(rng) * 3);
    std::vector<double> c(harmonics);
    double budget = 0.6 * mean;
    for (double& x : c) {
      x = (2 * unit(rng) - 1) * budget / harmonics;
    }
    const PeriodicProfile p = PeriodicProfile::make(mean, c);
    const int n = 1 + static_cast<int>(unit(rng) * 3);
    const double lambda = 1.0 + 99.0 * unit(rng);
    worst = std::max(worst, std::abs(monodromy(p, n, lambda, 1e-11).det() - 1.0));
  }
  const double t = seconds_since(t0);
  return {worst < 1e-9 && t < 30.0, fmt::format("max |det-1| = {} over 200 triples in {} s", g(worst), g(t))};
}

// 2. R = 1: trace = 2 cos sqrt(lambda) and no intervals on [1, 100].
Outcome constant_oracle() {
  const PeriodicProfile p = presets::minkowski();
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double lambda = 1.0 + 99.0 * i / 199.0;
    worst = std::max(worst, std::abs(monodromy(p, 2, lambda).trace() - 2.0 * std::cos(std::sqrt(lambda))));
  }
  ScanOptions opt;
  const std::size_t found = scan_trace(p, 2, opt).intervals.size();
  return {worst < 1e-10 && found == 0, fmt::format("max trace error {}, intervals on [1,100]: {}", g(worst), found)};
}

// 3. Closed-form W(m), V(m) against direct multi-period integration.
Outcome closed_forms(const RunConfig& fixture) {
  const Plan plan = make_plan(fixture);
  if (!plan.selection) return {false, "no lambda selected: " + plan.diagnostic};
  const Selection& s = *plan.selection;
  double worst = 0.0;
  for (int m = 1; m <= 10; ++m) {
    const WV cf = closed_form_wv(s.monodromy, m);
    const Mat2 x = fundamental_matrix(plan.profile, fixture.n, s.lambda, 0.0, m, 1e-13);
    worst = std::max({worst, std::abs(cf.W - x[1][0]) / std::abs(x[1][0]), std::abs(cf.V - x[1][1]) / std::abs(x[1][1])});
  }
  const WV one = closed_form_wv(s.monodromy, 1);
  const WV zero = closed_form_wv(s.monodromy, 0);
  const double w1 = std::abs(one.W - s.monodromy.b21);
  const double v0 = std::abs(zero.V - 1.0);
  return {worst < 1e-7 && w1 < 1e-11 && v0 < 1e-12,
          fmt::format("lambda = {}, max rel err m=1..10 = {}, |W(1)-b21| = {}, |V(0)-1| = {}", g(s.lambda), g(worst),
                      g(w1), g(v0))};
}

// 4. Curvature against the Brioschi formula (F = 0) applied to finite differences of the metric.
Outcome curvature() {
  const bool exact = curvature_at({0.3, 0.7}, 2.0) == -1.0 && curvature_at({-2.0, 5.0}, 2.0) == -1.0 &&
                     curvature_at({0.3, 0.7}, 0.0) == 0.0 && curvature_at({-2.0, 5.0}, 0.0) == 0.0;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u1(-2.0, 2.0);
  std::uniform_real_distribution<double> u2(0.3, 3.0);
  const double h = 1e-3;
  double worst = 0.0;
  for (double l : {0.5, 1.0, 2.0}) {
    for (int i = 0; i < 20; ++i) {
      const TargetPoint p{u1(rng), u2(rng)};
      auto E = [l](double a, double b) { return metric_at({a, b}, l).xx; };
      auto G = [l](double a, double b) { return metric_at({a, b}, l).yy; };
      auto root = [&](double a, double b) { return std::sqrt(E(a, b) * G(a, b)); };
      // K = -1/(2 sqrt(EG)) [ d/du (G_u / sqrt(EG)) + d/dv (E_v / sqrt(EG)) ]
      auto gu = [&](double a, double b) { return (G(a + h, b) - G(a - h, b)) / (2 * h) / root(a, b); };
      auto ev = [&](double a, double b) { return (E(a, b + h) - E(a, b - h)) / (2 * h) / root(a, b); };
      const double bracket = (gu(p.u1 + h, p.u2) - gu(p.u1 - h, p.u2)) / (2 * h) +
                             (ev(p.u1, p.u2 + h) - ev(p.u1, p.u2 - h)) / (2 * h);
      const double fd = -bracket / (2 * root(p.u1, p.u2));
      worst = std::max(worst, std::abs(fd - curvature_at(p, l)));
    }
  }
  return {exact && worst < 1e-4,
          fmt::format("K2 = -1 and K0 = 0 exact: {}, max |K - K_fd| = {} (60 points)", exact ? "yes" : "no", g(worst))};
}

// 5. Half circles, unit speed, and the l = 1 hypergeometric form against arcsin.
Outcome geodesics() {
  double circle = 0.0;
  double speed = 0.0;
  for (double C : {0.5, 1.0, 2.0}) {
    for (int sign : {1, -1}) {
      const GeodesicSpec spec = make_geodesic(2.0, C, sign, {0.2, 0.4 / C});
      const double d = half_circle_center(spec);
      const GeodesicPath path = integrate_geodesic(spec, 6.0);
      for (const PathNode& n : path.nodes) {
        circle = std::max(circle, std::abs(std::hypot(n.point.u1 - d, n.point.u2) - 1.0 / C));
        speed = std::max(speed, std::abs(n.speed_err));
      }
    }
  }
  const double C = 1.3;
  const double C1 = 0.2;
  const double vmax = 1.0 / (C * C);
  double hyp = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double v = vmax * i / 51.0;
    const double cs = C * std::sqrt(v);
    const double ref = C1 + (std::asin(cs) - cs * std::sqrt(1.0 - cs * cs)) / (C * C);
    hyp = std::max(hyp, std::abs(geodesic_u1_of_v(1.0, C, C1, 1, v) - ref));
  }
  return {circle < 1e-8 && speed < 1e-9 && hyp < 1e-10,
          fmt::format("circle err {}, speed err {}, l=1 hypergeometric vs arcsin {}", g(circle), g(speed), g(hyp))};
}

// 6. Residual of composed wave maps at O(h^2).
struct Sample {
  Field phi, phi_t;
};
using Scalar = std::function<Sample(const Grid&, double)>;

double composed_residual(const GeodesicFamily& fam, const Grid& grid, const Scalar& phi, const PeriodicProfile& p,
                         double t, double dt) {
  auto at = [&](double s) {
    const Sample v = phi(grid, s);
    return compose_wavemap(fam, grid, v.phi, v.phi_t, s).state;
  };
  const Residual r = wme_residual(at(t - dt), at(t), at(t + dt), p, family_l(fam));
  return std::max(r.res1, r.res2);
}

Outcome wave_map_residual() {
  const std::vector<std::pair<std::string, GeodesicFamily>> families{
      {"vertical_line", VerticalLine{1.0, 0.0, 1.0, 1}},
      {"vertical_exp", VerticalExp{0.0}},
      {"half_circle", HalfCircle{1.0, 0.0}},
      {"hypergeometric", HypergeometricBranch{1.0, 0.5, 0.0, 1, 1.0}}};
  const PeriodicProfile flat = presets::minkowski();
  // Travelling pulse on the flat background.
  const Scalar pulse = [](const Grid& grid, double t) {
    Sample s{Field(grid.size()), Field(grid.size())};
    for (int i = 0; i < grid.points; ++i) {
      const double z = grid.coord(i) + t;
      s.phi[i] = 0.3 * std::exp(-z * z);
      s.phi_t[i] = -2.0 * z * s.phi[i];
    }
    return s;
  };
  // Solution of the damped equation on R = 1 + 0.3 cos 2 pi t, n = 1, from the spectral evolver.
  const PeriodicProfile p = presets::cosine(0.3);
  const Scalar damped = [&p](const Grid& grid, double t) {
    const Grid box = line_grid(0.5 * grid.length(), grid.points, true);
    WaveState s;
    s.grid = box;
    s.v.resize(box.size());
    s.v_t.assign(box.size(), 0.0);
    for (int i = 0; i < box.points; ++i) s.v[i] = 0.3 * std::exp(-box.coord(i) * box.coord(i));
    const std::vector<double> times{t};
    const WaveState w = evolve_linear(s, p, times).front();
    return Sample{w.v, w.v_t};
  };

  bool ok = true;
  std::string detail;
  // On the flat background dt = h makes centred differences exact on travelling waves, so use dt = h/2.
  auto run = [&](const std::string& name, const GeodesicFamily& fam, const Scalar& phi, const PeriodicProfile& prof,
                 bool periodic, double dt_over_h) {
    std::vector<double> res;
    for (double h : {0.1, 0.05, 0.025}) {
      const int points = static_cast<int>(std::lround(20.0 / h));
      const Grid grid = line_grid(10.0, points, periodic);
      res.push_back(composed_residual(fam, grid, phi, prof, 0.4, dt_over_h * h));
    }
    const double r1 = res[0] / res[1];
    const double r2 = res[1] / res[2];
    const bool pass = r1 >= 3.5 && r1 <= 4.5 && r2 >= 3.5 && r2 <= 4.5;
    ok = ok && pass;
    detail += fmt::format("{}{} {}/{}", detail.empty() ? "" : "; ", name, g(r1), g(r2));
  };
  for (const auto& [name, fam] : families) run(name, fam, pulse, flat, false, 0.5);
  run("vertical_exp(R!=1)", VerticalExp{0.0}, damped, p, true, 1.0);
  run("hypergeometric(R!=1)", HypergeometricBranch{1.0, 0.5, 0.0, 1, 1.0}, damped, p, true, 1.0);
  return {ok, "Richardson ratios " + detail};
}

// 7. Displacement-loaded w-gauge growth at the rate ln mu0(lambda*), and no growth for R = 1.
Outcome resonant_growth(const RunConfig& fixture) {
  const Plan plan = make_plan(fixture);
  if (!plan.interval) return {false, "no instability interval: " + plan.diagnostic};
  const double lambda_star = plan.interval->lambda_star;
  const double ln_mu0 = growth_exponent(monodromy(plan.profile, fixture.n, lambda_star));
  const double k = std::sqrt(lambda_star);
  GrowthOptions opt;
  opt.gauge = Gauge::W;
  opt.loading = Loading::Displacement;
  opt.m_max = 12;
  opt.fit_min = fixture.fit_min;
  opt.scan = fixture.scan;
  const Grid grid = spectral_box(fixture.n, fixture.phi1.width, opt.m_max, plan.profile, k, fixture.box_margin,
                                 fixture.points_per_wavelength);
  const Field phi = resonant_bump(grid, fixture.phi1.width, k);
  const GrowthReport r = growth_at_integers(plan.profile, grid, phi, opt);
  const double rel = std::abs(r.delta_hat - ln_mu0) / ln_mu0;

  GrowthOptions flat_opt = opt;
  flat_opt.require_resonant_energy = false;
  const GrowthReport f = growth_at_integers(presets::minkowski(), grid, phi, flat_opt);
  double ratio = 0.0;
  for (double x : f.l2) ratio = std::max(ratio, x / f.l2.front());
  return {rel < 0.1 && ratio <= 2.0,
          fmt::format("delta_hat = {}, ln mu0(lambda* = {}) = {}, rel err {}; R=1 max ||w(m)||/||w(0)|| = {}",
                      g(r.delta_hat), g(lambda_star), g(ln_mu0), g(rel), g(ratio))};
}

// Independent exit check: evolve the scalar data straight to t and return min (alpha/mu) v + beta.
double exit_margin_at(const RunConfig& cfg, const Plan& plan, double t) {
  const Grid grid = demo_grid(cfg, plan, cfg.m_max);
  InitialData d = build_initial_data(cfg, plan, grid);
  std::fill(d.scalar.v.begin(), d.scalar.v.end(), 0.0);
  const std::vector<double> times{t};
  EvolveOptions eo;
  eo.tol = cfg.ode_tol;
  const Field v = evolve_linear(d.scalar, plan.profile, times, eo).front().v;
  double m = std::numeric_limits<double>::infinity();
  for (double x : v) m = std::min(m, plan.alpha / plan.mu * x + plan.beta);
  return m;
}

// 8. l = 1 demo: exit within 12 periods from small data; halving epsilon delays it.
Outcome blowup_l1(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const BlowupReport a = run_demo(cfg);
  if (a.mode != BlowupMode::ExitBelowTwo || !a.t_bp) return {false, "no exit: " + a.diagnostic};
  RunConfig half = cfg;
  half.alpha = a.alpha;
  half.phi1.amplitude = 0.5 * cfg.phi1.amplitude;
  const BlowupReport b = run_demo(half);
  const double t = seconds_since(t0);
  const bool exit_b = b.mode == BlowupMode::ExitBelowTwo && b.t_bp.has_value();
  const double quarter = b.smallness / a.smallness;

  const Plan plan = make_plan(cfg);
  const double before = exit_margin_at(cfg, plan, *a.t_bp - 1e-4);
  const double at = exit_margin_at(cfg, plan, *a.t_bp);
  const bool independent = before > 0.0 && at <= 1e-9 * plan.beta;

  const bool ok = *a.t_bp <= 12.0 && a.smallness < 1e-2 && exit_b && *b.t_bp > *a.t_bp &&
                  std::abs(quarter - 0.25) < 1e-9 && independent && t < 300.0;
  return {ok, fmt::format("t_bp = {} (smallness {}); eps/2: t_bp = {} (smallness ratio {}); independent margin "
                          "{} -> {}; {} s",
                          g(*a.t_bp), g(a.smallness), exit_b ? g(*b.t_bp) : std::string("none"), g(quarter), g(before),
                          g(at), g(t))};
}

// 9. l = 2 demo: exponential growth of max |ln u2 - ln u2~| and the sup/inf dichotomy on m = 4..10.
Outcome blowup_l2(const RunConfig& cfg) {
  const BlowupReport r = run_demo(cfg);
  if (r.mode != BlowupMode::LogGrowthTwo || !r.dichotomy) return {false, "no growth: " + r.diagnostic};
  const double rel = std::abs(r.growth.delta_hat - r.ln_mu0_used) / r.ln_mu0_used;

  // Recompute the integer-time profile independently of the per-period loop.
  const Plan plan = make_plan(cfg);
  const Grid grid = demo_grid(cfg, plan, cfg.m_max);
  InitialData d = build_initial_data(cfg, plan, grid);
  std::fill(d.scalar.v.begin(), d.scalar.v.end(), 0.0);
  std::vector<double> times;
  for (int m = 4; m <= 10; ++m) times.push_back(m);
  EvolveOptions eo;
  eo.tol = cfg.ode_tol;
  const std::vector<WaveState> states = evolve_linear(d.scalar, plan.profile, times, eo);
  std::vector<double> sup, inf, y;
  for (const WaveState& s : states) {
    const auto [lo, hi] = std::minmax_element(s.v.begin(), s.v.end());
    sup.push_back(*hi);
    inf.push_back(*lo);
    y.push_back(std::max(*hi, -*lo));
  }
  // Least-squares slope of ln y on m = 4..10.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sx += times[i];
    sy += std::log(y[i]);
    sxx += times[i] * times[i];
    sxy += times[i] * std::log(y[i]);
  }
  const double nn = static_cast<double>(y.size());
  const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  const Dichotomy& dc = *r.dichotomy;
  bool dichotomy = dc.c0 > 0.0 && dc.m_lo == 4 && dc.m_hi == 10;
  int sup_count = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double bound = dc.c0 * std::exp(dc.delta_hat * times[i]) * (1 - 1e-9);
    const bool s = sup[i] >= bound;
    const bool n = -inf[i] >= bound;
    dichotomy = dichotomy && (s || n);
    sup_count += s;
  }
  const bool ok = rel < 0.15 && std::abs(slope - r.growth.delta_hat) < 1e-6 && dichotomy;
  return {ok, fmt::format("delta_hat = {}, ln mu0 = {}, rel err {}; independent slope {}; c0 = {}, sup branch at {}/7 "
                          "times, lower bound holds: {}",
                          g(r.growth.delta_hat), g(r.ln_mu0_used), g(rel), g(slope), g(dc.c0), sup_count,
                          dichotomy ? "yes" : "no")};
}

// 10. Direct nonlinear evolution against the linear reduction.
Outcome cross_validation(const RunConfig& l1, const RunConfig& l2) {
  bool ok = true;
  std::string detail;
  for (const RunConfig* c : {&l1, &l2}) {
    const CrossValReport r = cross_validate(*c);
    bool pass = !r.exited && r.ratios.size() >= 2;
    std::string rs;
    for (double x : r.ratios) {
      pass = pass && x >= 3.5 && x <= 4.5;
      rs += (rs.empty() ? "" : "/") + g(x);
    }
    ok = ok && pass;
    detail += fmt::format("{}l = {}: T = {}, discrepancy {} -> {}, ratios {}", detail.empty() ? "" : "; ", c->l, r.T,
                          r.discrepancy.empty() ? std::string("-") : g(r.discrepancy.front()),
                          r.discrepancy.empty() ? std::string("-") : g(r.discrepancy.back()), rs);
  }
  return {ok, detail};
}

// 11. Byte-identical outputs across repeated CLI runs.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli, const fs::path& configs) {
  const fs::path root = fs::current_path() / "acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"scan", "demo_l1.json"},   {"geodesic", "demo_l1.json"}, {"evolve", "demo_l1.json"},
      {"growth", "demo_l1.json"}, {"demo", "demo_l1.json"},     {"demo", "demo_l2.json"},
      {"crossval", "demo_l1.json"}};
  bool ok = true;
  int files = 0;
  std::string bad;
  for (const auto& [cmd, config] : runs) {
    std::vector<fs::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / fmt::format("{}_{}_{}", cmd, fs::path(config).stem().string(), rep);
      const std::string line = fmt::format("\"{}\" {} -c \"{}\" -o \"{}\" > \"{}\" 2>&1", cli, cmd,
                                           (configs / config).string(), dir.string(), (dir.string() + ".log"));
      fs::create_directories(root);
      if (std::system(line.c_str()) != 0) {
        ok = false;
        bad += " " + cmd + "(exit)";
      }
      dirs.push_back(dir);
    }
    std::vector<std::string> names;
    if (fs::exists(dirs[0])) {
      for (const auto& e : fs::directory_iterator(dirs[0])) names.push_back(e.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    if (names.empty()) {
      ok = false;
      bad += " " + cmd + "(no output)";
    }
    for (const std::string& n : names) {
      ++files;
      if (!fs::exists(dirs[1] / n) || slurp(dirs[0] / n) != slurp(dirs[1] / n)) {
        ok = false;
        bad += " " + cmd + "/" + n;
      }
    }
  }
  return {ok, fmt::format("{} files compared across {} subcommand runs{}", files, runs.size(),
                          bad.empty() ? std::string() : ", mismatches:" + bad)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <hillwave-cli> <configs-dir>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path configs = argv[2];
  const RunConfig l1 = load_config((configs / "demo_l1.json").string());
  const RunConfig l2 = load_config((configs / "demo_l2.json").string());

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"wronskian", wronskian},
      {"constant_coefficient_oracle", constant_oracle},
      {"closed_form_wv", [&] { return closed_forms(l1); }},
      {"curvature", curvature},
      {"geodesics", geodesics},
      {"wave_map_residual", wave_map_residual},
      {"resonant_growth", [&] { return resonant_growth(l1); }},
      {"blowup_l1", [&] { return blowup_l1(l1); }},
      {"blowup_l2", [&] { return blowup_l2(l2); }},
      {"cross_validation", [&] { return cross_validation(l1, l2); }},
      {"determinism", [&] { return determinism(cli, configs); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("AC%zu %s %s: %s [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
