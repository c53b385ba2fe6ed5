#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hillwave/error.hpp"
#include "hillwave/pipeline.hpp"

namespace hillwave {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::Config, what); }

void check(bool ok, const std::string& what) {
  if (!ok) config_error(what);
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  check(j.is_object(), where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : j.items()) {
    check(allowed.count(item.key()) > 0, "unknown key '" + item.key() + "' in " + where);
  }
}

void read(const json& j, const char* key, double& out, const std::string& where) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  check(v.is_number(), where + "." + key + " must be a number");
  out = v.get<double>();
  check(std::isfinite(out), where + "." + key + " must be finite");
}

void read(const json& j, const char* key, int& out, const std::string& where) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  check(v.is_number_integer(), where + "." + key + " must be an integer");
  out = v.get<int>();
}

void read(const json& j, const char* key, std::string& out, const std::string& where) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  check(v.is_string(), where + "." + key + " must be a string");
  out = v.get<std::string>();
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  allow_keys(j, "config",
             {"profile", "n", "l", "G", "phi1", "alpha", "target_period", "u1_const", "u2_const", "m_max", "fit_min",
              "fit_max", "scan", "selection", "ode_tol", "threads", "grid", "resonance", "exit", "crossval", "evolve",
              "geodesic", "output_dir"});
  RunConfig c;
  if (j.contains("profile")) {
    const json& p = j.at("profile");
    allow_keys(p, "profile", {"mean", "cos"});
    read(p, "mean", c.profile_mean, "profile");
    if (p.contains("cos")) {
      check(p.at("cos").is_array(), "profile.cos must be an array of numbers");
      c.profile_cos.clear();
      for (const json& v : p.at("cos")) {
        check(v.is_number() && std::isfinite(v.get<double>()), "profile.cos must be an array of finite numbers");
        c.profile_cos.push_back(v.get<double>());
      }
    }
  }
  read(j, "n", c.n, "config");
  read(j, "l", c.l, "config");
  read(j, "G", c.G, "config");
  if (j.contains("phi1")) {
    const json& p = j.at("phi1");
    allow_keys(p, "phi1", {"width", "amplitude", "center", "k_star"});
    read(p, "width", c.phi1.width, "phi1");
    read(p, "amplitude", c.phi1.amplitude, "phi1");
    read(p, "k_star", c.phi1.k_star, "phi1");
    if (p.contains("center")) {
      const json& v = p.at("center");
      check(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(),
            "phi1.center must be a pair of numbers");
      c.phi1.center = {v[0].get<double>(), v[1].get<double>()};
    }
  }
  if (j.contains("alpha") && !j.at("alpha").is_null()) {
    double a = 0.0;
    read(j, "alpha", a, "config");
    c.alpha = a;
  }
  read(j, "target_period", c.target_period, "config");
  read(j, "u1_const", c.u1_const, "config");
  read(j, "u2_const", c.u2_const, "config");
  read(j, "m_max", c.m_max, "config");
  read(j, "fit_min", c.fit_min, "config");
  read(j, "fit_max", c.fit_max, "config");
  if (j.contains("scan")) {
    const json& s = j.at("scan");
    allow_keys(s, "scan", {"lambda_min", "lambda_max", "steps", "edge_tol", "instability_margin"});
    read(s, "lambda_min", c.scan.lambda_min, "scan");
    read(s, "lambda_max", c.scan.lambda_max, "scan");
    read(s, "steps", c.scan.steps, "scan");
    read(s, "edge_tol", c.scan.edge_tol, "scan");
    read(s, "instability_margin", c.scan.instability_margin, "scan");
  }
  if (j.contains("selection")) {
    const json& s = j.at("selection");
    allow_keys(s, "selection", {"b21_min", "b22_gap_min", "subgrid"});
    read(s, "b21_min", c.selection.b21_min, "selection");
    read(s, "b22_gap_min", c.selection.b22_gap_min, "selection");
    read(s, "subgrid", c.selection.subgrid, "selection");
  }
  read(j, "ode_tol", c.ode_tol, "config");
  read(j, "threads", c.threads, "config");
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    allow_keys(g, "grid", {"margin", "points_per_wavelength", "smallness_points_per_wavelength"});
    read(g, "margin", c.box_margin, "grid");
    read(g, "points_per_wavelength", c.points_per_wavelength, "grid");
    read(g, "smallness_points_per_wavelength", c.smallness_points_per_wavelength, "grid");
  }
  if (j.contains("resonance")) {
    const json& r = j.at("resonance");
    allow_keys(r, "resonance", {"energy_threshold", "support_threshold"});
    read(r, "energy_threshold", c.energy_threshold, "resonance");
    read(r, "support_threshold", c.support_threshold, "resonance");
  }
  if (j.contains("exit")) {
    const json& e = j.at("exit");
    allow_keys(e, "exit", {"subsamples", "tol", "u2_floor"});
    read(e, "subsamples", c.exit_subsamples, "exit");
    read(e, "tol", c.exit_tol, "exit");
    read(e, "u2_floor", c.u2_floor, "exit");
  }
  if (j.contains("crossval")) {
    const json& x = j.at("crossval");
    allow_keys(x, "crossval", {"T", "h", "levels", "cfl"});
    read(x, "T", c.crossval.T, "crossval");
    read(x, "h", c.crossval.h, "crossval");
    read(x, "levels", c.crossval.levels, "crossval");
    read(x, "cfl", c.crossval.cfl, "crossval");
  }
  if (j.contains("evolve")) {
    const json& x = j.at("evolve");
    allow_keys(x, "evolve", {"T", "h", "cfl"});
    read(x, "T", c.evolve.T, "evolve");
    read(x, "h", c.evolve.h, "evolve");
    read(x, "cfl", c.evolve.cfl, "evolve");
  }
  if (j.contains("geodesic")) {
    const json& g = j.at("geodesic");
    allow_keys(g, "geodesic", {"l", "C", "sign", "u1", "u2", "s_max", "step", "tol"});
    read(g, "l", c.geodesic.l, "geodesic");
    read(g, "C", c.geodesic.C, "geodesic");
    read(g, "sign", c.geodesic.sign, "geodesic");
    read(g, "u1", c.geodesic.u1, "geodesic");
    read(g, "u2", c.geodesic.u2, "geodesic");
    read(g, "s_max", c.geodesic.s_max, "geodesic");
    read(g, "step", c.geodesic.step, "geodesic");
    read(g, "tol", c.geodesic.tol, "geodesic");
  }
  read(j, "output_dir", c.output_dir, "config");

  check(c.phi1.amplitude > 0.0, "phi1.amplitude (epsilon) must be positive");
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Config, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& c) {
  try {
    (void)make_profile(c);
  } catch (const Error& e) {
    config_error(std::string("profile: ") + e.what());
  }
  check(c.n == 1 || c.n == 2, "n must be 1 or 2 (spectral grids are one- or two-dimensional)");
  check(c.l >= 0.0 && c.l <= 2.0, "l must lie in [0, 2]");
  check(c.G >= 1, "G must be >= 1");
  check(c.phi1.width > 0.0, "phi1.width must be positive");
  check(c.phi1.amplitude >= 0.0, "phi1.amplitude must be non-negative");
  check(c.phi1.k_star >= 0.0, "phi1.k_star must be non-negative (0 selects sqrt(lambda))");
  check(std::isfinite(c.phi1.center[0]) && std::isfinite(c.phi1.center[1]), "phi1.center must be finite");
  check(!c.alpha || std::isfinite(*c.alpha), "alpha must be finite");
  check(c.target_period >= 1, "target_period must be >= 1");
  check(c.u2_const > 0.0, "u2_const must be positive");
  check(c.m_max >= 2, "m_max must be >= 2");
  const int fit_hi = c.fit_max > 0 ? c.fit_max : c.m_max;
  check(c.fit_min >= 0 && c.fit_min < fit_hi && fit_hi <= c.m_max, "fit window must satisfy 0 <= fit_min < fit_max <= m_max");
  check(c.scan.lambda_min > 0.0 && c.scan.lambda_max > c.scan.lambda_min, "scan range must satisfy 0 < lambda_min < lambda_max");
  check(c.scan.steps >= 2, "scan.steps must be >= 2");
  check(c.scan.edge_tol > 0.0, "scan.edge_tol must be positive");
  check(c.scan.instability_margin >= 0.0, "scan.instability_margin must be non-negative");
  check(c.selection.b21_min >= 0.0 && c.selection.b22_gap_min >= 0.0 && c.selection.subgrid >= 2,
        "selection thresholds must be non-negative and subgrid >= 2");
  check(c.ode_tol > 0.0 && c.ode_tol <= 1e-3, "ode_tol must lie in (0, 1e-3]");
  check(c.threads >= 1, "threads must be >= 1");
  check(c.box_margin >= 0.0, "grid.margin must be non-negative");
  check(c.points_per_wavelength >= 4.0 && c.smallness_points_per_wavelength >= 4.0,
        "grid points per wavelength must be >= 4");
  check(c.energy_threshold >= 0.0 && c.energy_threshold <= 1.0 && c.support_threshold >= 0.0 &&
            c.support_threshold <= 1.0,
        "resonance thresholds must lie in [0, 1]");
  check(c.exit_subsamples >= 1 && c.exit_tol > 0.0 && c.u2_floor >= 0.0,
        "exit: subsamples >= 1, tol > 0, u2_floor >= 0");
  check(c.crossval.T > 0.0 && c.crossval.h > 0.0 && c.crossval.levels >= 1 && c.crossval.cfl > 0.0 &&
            c.crossval.cfl <= 0.5,
        "crossval: T > 0, h > 0, levels >= 1, cfl in (0, 0.5]");
  check(c.evolve.T > 0.0 && c.evolve.h > 0.0 && c.evolve.cfl > 0.0 && c.evolve.cfl <= 0.5,
        "evolve: T > 0, h > 0, cfl in (0, 0.5]");
  check(c.geodesic.l >= 0.0 && c.geodesic.l <= 2.0, "geodesic.l must lie in [0, 2]");
  check(c.geodesic.sign == 1 || c.geodesic.sign == -1, "geodesic.sign must be +1 or -1");
  check(std::isfinite(c.geodesic.C) && c.geodesic.u2 > 0.0 && c.geodesic.s_max > 0.0 && c.geodesic.step > 0.0 &&
            c.geodesic.tol > 0.0,
        "geodesic: u2, s_max, step and tol must be positive");
  check(!c.output_dir.empty(), "output_dir must not be empty");
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["profile"] = {{"mean", c.profile_mean}, {"cos", c.profile_cos}};
  j["n"] = c.n;
  j["l"] = c.l;
  j["G"] = c.G;
  j["phi1"] = {{"width", c.phi1.width},
               {"amplitude", c.phi1.amplitude},
               {"center", {c.phi1.center[0], c.phi1.center[1]}},
               {"k_star", c.phi1.k_star}};
  j["alpha"] = c.alpha ? json(*c.alpha) : json(nullptr);
  j["target_period"] = c.target_period;
  j["u1_const"] = c.u1_const;
  j["u2_const"] = c.u2_const;
  j["m_max"] = c.m_max;
  j["fit_min"] = c.fit_min;
  j["fit_max"] = c.fit_max;
  j["scan"] = {{"lambda_min", c.scan.lambda_min},
               {"lambda_max", c.scan.lambda_max},
               {"steps", c.scan.steps},
               {"edge_tol", c.scan.edge_tol},
               {"instability_margin", c.scan.instability_margin}};
  j["selection"] = {{"b21_min", c.selection.b21_min},
                    {"b22_gap_min", c.selection.b22_gap_min},
                    {"subgrid", c.selection.subgrid}};
  j["ode_tol"] = c.ode_tol;
  j["threads"] = c.threads;
  j["grid"] = {{"margin", c.box_margin},
               {"points_per_wavelength", c.points_per_wavelength},
               {"smallness_points_per_wavelength", c.smallness_points_per_wavelength}};
  j["resonance"] = {{"energy_threshold", c.energy_threshold}, {"support_threshold", c.support_threshold}};
  j["exit"] = {{"subsamples", c.exit_subsamples}, {"tol", c.exit_tol}, {"u2_floor", c.u2_floor}};
  j["crossval"] = {{"T", c.crossval.T}, {"h", c.crossval.h}, {"levels", c.crossval.levels}, {"cfl", c.crossval.cfl}};
  j["evolve"] = {{"T", c.evolve.T}, {"h", c.evolve.h}, {"cfl", c.evolve.cfl}};
  j["geodesic"] = {{"l", c.geodesic.l},   {"C", c.geodesic.C},         {"sign", c.geodesic.sign},
                   {"u1", c.geodesic.u1}, {"u2", c.geodesic.u2},       {"s_max", c.geodesic.s_max},
                   {"step", c.geodesic.step}, {"tol", c.geodesic.tol}};
  j["output_dir"] = c.output_dir;
  return j.dump(2);
}

}  // namespace hillwave
