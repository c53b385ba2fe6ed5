#include "output.hpp"

#include <cmath>

#include "hillwave/error.hpp"

namespace hillwave::io {

namespace {

using nlohmann::json;

// NaN and infinities have no JSON form; they become null.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json nums(const std::vector<double>& xs) {
  json a = json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

}  // namespace

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header) : path_(path), out_(path) {
  if (!out_) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  std::string line;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) line += ',';
    line += header[i];
  }
  out_ << line << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) fail(ErrorCode::Io, "error writing '" + path_ + "'");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << text << '\n';
  out.close();
  if (!out) fail(ErrorCode::Io, "error writing '" + path + "'");
}

json to_json(const InstabilityInterval& iv) {
  return {{"lambda_lo", num(iv.lambda_lo)},       {"lambda_hi", num(iv.lambda_hi)},
          {"lambda_star", num(iv.lambda_star)},   {"trace_at_star", num(iv.trace_at_star)},
          {"edge_tol", num(iv.edge_tol)},         {"open_lo", iv.open_lo},
          {"open_hi", iv.open_hi}};
}

json to_json(const GrowthReport& g) {
  json intervals = json::array();
  for (const auto& iv : g.intervals) intervals.push_back(to_json(iv));
  return {{"times", g.times},
          {"q", std::isinf(g.q) ? json("inf") : json(g.q)},
          {"norms", nums(g.norms)},
          {"l2", nums(g.l2)},
          {"linf", nums(g.linf)},
          {"delta_hat", num(g.delta_hat)},
          {"delta_hat_l2", num(g.delta_hat_l2)},
          {"delta_hat_linf", num(g.delta_hat_linf)},
          {"intercept", num(g.intercept)},
          {"fit_window", {g.fit_lo, g.fit_hi}},
          {"mu0_ref", num(g.mu0_ref)},
          {"lambda_ref", num(g.lambda_ref)},
          {"resonant_energy", num(g.resonant_energy)},
          {"intervals", intervals}};
}

json to_json(const BlowupReport& r) {
  json j;
  j["mode"] = to_string(r.mode);
  j["t_bp"] = r.t_bp ? num(*r.t_bp) : json(nullptr);
  j["x_bp"] = r.x_bp ? json{num((*r.x_bp)[0]), num((*r.x_bp)[1])} : json(nullptr);
  j["exit_period"] = r.exit_period ? json(*r.exit_period) : json(nullptr);
  j["exit_value"] = r.t_bp ? num(r.exit_value) : json(nullptr);
  j["smallness"] = num(r.smallness);
  j["growth"] = to_json(r.growth);
  j["lambda_used"] = num(r.lambda_used);
  j["mu0_used"] = num(r.mu0_used);
  j["ln_mu0_used"] = num(r.ln_mu0_used);
  j["k_star"] = num(r.k_star);
  j["alpha"] = num(r.alpha);
  j["beta"] = num(r.beta);
  j["mu"] = num(r.mu);
  j["epsilon"] = num(r.epsilon);
  j["u1_drift"] = num(r.u1_drift);
  j["interval"] = r.interval ? to_json(*r.interval) : json(nullptr);
  if (r.dichotomy) {
    const Dichotomy& d = *r.dichotomy;
    j["dichotomy"] = {{"window", {d.m_lo, d.m_hi}}, {"delta_hat", num(d.delta_hat)}, {"intercept", num(d.intercept)},
                      {"c0", num(d.c0)},            {"m", d.m},                      {"sup", nums(d.sup)},
                      {"inf", nums(d.inf)},        {"branch", d.branch}};
  } else {
    j["dichotomy"] = nullptr;
  }
  j["grid"] = {{"points", r.grid_points}, {"length", num(r.grid_length)}};
  j["diagnostic"] = r.diagnostic;
  return j;
}

json to_json(const CrossValReport& r) {
  return {{"T", num(r.T)},         {"h", nums(r.h)}, {"discrepancy", nums(r.discrepancy)},
          {"u1_drift", nums(r.u1_drift)}, {"ratios", nums(r.ratios)}, {"exited", r.exited},
          {"alpha", num(r.alpha)}};
}

}  // namespace hillwave::io
