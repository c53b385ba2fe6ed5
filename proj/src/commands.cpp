#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <limits>

#include "hillwave/error.hpp"
#include "hillwave/geometry.hpp"
#include "hillwave/pipeline.hpp"
#include "output.hpp"

namespace hillwave {

namespace {

using nlohmann::json;

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

CommandResult cmd_scan(const RunConfig& cfg, const std::string& dir) {
  const PeriodicProfile p = make_profile(cfg);
  ScanOptions so = cfg.scan;
  so.tol = cfg.ode_tol;
  const ScanResult res = scan_trace(p, cfg.n, so);
  CommandResult out;
  out.files = {join(dir, "scan.csv"), join(dir, "intervals.json")};
  io::CsvWriter csv(out.files[0], {"lambda", "trace", "det_err", "unstable", "mu0"});
  for (const auto& s : res.samples) csv.row(s.lambda, s.trace, s.det_err, s.unstable, s.mu0);
  csv.close();
  json ivs = json::array();
  for (const auto& iv : res.intervals) {
    json j = io::to_json(iv);
    j["ln_mu0_star"] = growth_exponent(monodromy(p, cfg.n, iv.lambda_star, cfg.ode_tol));
    ivs.push_back(j);
  }
  io::write_text(out.files[1], json{{"n", cfg.n}, {"intervals", ivs}}.dump(2));
  out.summary = json{{"command", "scan"}, {"intervals", res.intervals.size()}}.dump();
  return out;
}

CommandResult cmd_geodesic(const RunConfig& cfg, const std::string& dir) {
  const auto& g = cfg.geodesic;
  const GeodesicSpec spec = make_geodesic(g.l, g.C, g.sign, TargetPoint{g.u1, g.u2});
  GeodesicOptions opt;
  opt.tol = g.tol;
  opt.output_step = g.step;
  opt.u2_floor = cfg.u2_floor;
  const GeodesicPath path = integrate_geodesic(spec, g.s_max, opt);
  CommandResult out;
  out.files = {join(dir, "geodesic.csv")};
  io::CsvWriter csv(out.files[0], {"s", "u1", "u2", "speed_err"});
  for (const auto& node : path.nodes) csv.row(node.s, node.point.u1, node.point.u2, node.speed_err);
  csv.close();
  json summary{{"command", "geodesic"},
               {"C1", spec.C1},
               {"turning_points", path.turning_points},
               {"exited", path.exited},
               {"exit_s", path.exited ? json(path.exit_s) : json(nullptr)}};
  if (g.l == 2.0 && g.C != 0.0) summary["circle_center"] = half_circle_center(spec);
  out.summary = summary.dump();
  return out;
}

Grid fd_grid(const RunConfig& cfg, double T, double h, const PeriodicProfile& p) {
  const double c = std::hypot(cfg.phi1.center[0], cfg.phi1.center[1]);
  const double extent = cfg.phi1.width + c + T / p.min_sampled() + cfg.box_margin;
  const int points = static_cast<int>(std::ceil(extent / h));
  if (cfg.n == 1) return line_grid(points * h, 2 * points, false);
  if (c == 0.0) return radial_grid(points * h, points);
  return plane_grid(points * h, 2 * points);
}

CommandResult cmd_evolve(const RunConfig& cfg, const std::string& dir) {
  const Plan plan = make_plan(cfg);
  const Grid grid = fd_grid(cfg, cfg.evolve.T, cfg.evolve.h, plan.profile);
  const InitialData d = build_initial_data(cfg, plan, grid);
  const double dt = cfg.evolve.cfl * grid.h * plan.profile.min_sampled();

  CommandResult out;
  out.files = {join(dir, "evolve.csv")};
  io::CsvWriter csv(out.files[0], {"t", "min_u2", "max_u2", "res1", "res2", "smallness"});
  auto emit = [&](const WaveMapState& s, double r1, double r2) {
    const auto [lo, hi] = std::minmax_element(s.u2.begin(), s.u2.end());
    const double small = *lo > 0.0 ? smallness_integral(s, cfg.l, cfg.G) : std::numeric_limits<double>::quiet_NaN();
    csv.row(s.time, *lo, *hi, r1, r2, small);
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  emit(d.map, nan, nan);
  std::deque<WaveMapState> window{d.map};
  NonlinearOptions no;
  no.u2_floor = cfg.u2_floor;
  no.on_step = [&](const WaveMapState& s) {
    window.push_back(s);
    if (window.size() > 3) window.pop_front();
    if (window.size() == 3 && *std::min_element(window[1].u2.begin(), window[1].u2.end()) > 0.0) {
      const Residual r = wme_residual(window[0], window[1], window[2], plan.profile, cfg.l);
      emit(window[1], r.res1, r.res2);
    }
  };
  const Trajectory tr = direct_evolve_nonlinear(d.map, plan.profile, cfg.l, cfg.evolve.T, dt, no);
  if (window.size() >= 2) emit(window.back(), nan, nan);
  csv.close();
  json summary{{"command", "evolve"}, {"steps", tr.steps}, {"dt", dt}, {"h", grid.h}, {"points", grid.points}};
  if (tr.exit) summary["exit"] = {{"t", tr.exit->time}, {"x", tr.exit->x}, {"y", tr.exit->y}, {"u2", tr.exit->u2}};
  out.summary = summary.dump();
  return out;
}

CommandResult cmd_growth(const RunConfig& cfg, const std::string& dir) {
  const Plan plan = make_plan(cfg);
  if (!plan.selection) fail(ErrorCode::NoInstabilityFound, plan.diagnostic);
  const Grid grid = demo_grid(cfg, plan, cfg.m_max);
  const Field phi =
      resonant_bump(grid, cfg.phi1.width, plan.k_star, cfg.phi1.amplitude, cfg.phi1.center[0], cfg.phi1.center[1]);
  GrowthOptions go;
  go.gauge = Gauge::W;
  go.loading = Loading::Velocity;
  go.m_max = cfg.m_max;
  go.fit_min = cfg.fit_min;
  go.fit_max = cfg.fit_max;
  go.scan = cfg.scan;
  go.scan.tol = cfg.ode_tol;
  go.evolve.tol = cfg.ode_tol;
  go.evolve.threads = cfg.threads;
  go.energy_threshold = cfg.energy_threshold;
  go.support_threshold = cfg.support_threshold;
  const GrowthReport rep = growth_at_integers(plan.profile, grid, phi, go);

  CommandResult out;
  out.files = {join(dir, "growth.csv"), join(dir, "growth.json")};
  io::CsvWriter csv(out.files[0], {"m", "l2_norm", "linf_norm", "predicted_mu0_pow_m"});
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    csv.row(rep.times[i], rep.l2[i], rep.linf[i], std::exp(rep.mu0_ref * rep.times[i]));
  }
  csv.close();
  io::write_text(out.files[1], io::to_json(rep).dump(2));
  out.summary =
      json{{"command", "growth"}, {"delta_hat", rep.delta_hat}, {"mu0_ref", rep.mu0_ref}}.dump();
  return out;
}

CommandResult cmd_demo(const RunConfig& cfg, const std::string& dir) {
  const BlowupReport rep = run_demo(cfg);
  CommandResult out;
  out.files = {join(dir, "report.json"), join(dir, "demo_periods.csv")};
  json j = io::to_json(rep);
  j["config"] = json::parse(config_to_json(cfg));
  io::write_text(out.files[0], j.dump(2));
  io::CsvWriter csv(out.files[1], {"m", "l2_norm", "linf_norm", "min_u2", "max_u2", "exit_margin"});
  for (const auto& r : rep.periods) csv.row(r.m, r.l2, r.linf, r.min_u2, r.max_u2, r.exit_margin);
  csv.close();
  out.summary = json{{"command", "demo"},
                     {"mode", to_string(rep.mode)},
                     {"t_bp", rep.t_bp ? json(*rep.t_bp) : json(nullptr)},
                     {"delta_hat", rep.growth.delta_hat},
                     {"ln_mu0_used", rep.ln_mu0_used},
                     {"smallness", rep.smallness}}
                    .dump();
  return out;
}

CommandResult cmd_crossval(const RunConfig& cfg, const std::string& dir) {
  const CrossValReport rep = cross_validate(cfg);
  CommandResult out;
  out.files = {join(dir, "crossval.csv"), join(dir, "crossval.json")};
  io::CsvWriter csv(out.files[0], {"level", "h", "discrepancy", "u1_drift", "ratio"});
  for (std::size_t k = 0; k < rep.h.size(); ++k) {
    const double ratio = k > 0 ? rep.ratios[k - 1] : std::numeric_limits<double>::quiet_NaN();
    csv.row(k, rep.h[k], rep.discrepancy[k], rep.u1_drift[k], ratio);
  }
  csv.close();
  io::write_text(out.files[1], io::to_json(rep).dump(2));
  out.summary = json{{"command", "crossval"}, {"ratios", rep.ratios}, {"exited", rep.exited}}.dump();
  return out;
}

}  // namespace

std::vector<std::string> command_names() { return {"scan", "geodesic", "evolve", "growth", "demo", "crossval"}; }

CommandResult run_command(const std::string& name, const RunConfig& cfg, const std::string& out_dir) {
  validate(cfg);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create output directory '" + out_dir + "': " + ec.message());
  if (name == "scan") return cmd_scan(cfg, out_dir);
  if (name == "geodesic") return cmd_geodesic(cfg, out_dir);
  if (name == "evolve") return cmd_evolve(cfg, out_dir);
  if (name == "growth") return cmd_growth(cfg, out_dir);
  if (name == "demo") return cmd_demo(cfg, out_dir);
  if (name == "crossval") return cmd_crossval(cfg, out_dir);
  fail(ErrorCode::InvalidArgument, "unknown command '" + name + "'");
}

}  // namespace hillwave
