#include "hillwave/hillwave.h"

#include <new>
#include <string>

#include "hillwave/error.hpp"
#include "hillwave/floquet.hpp"
#include "hillwave/geometry.hpp"
#include "hillwave/hypergeom.hpp"
#include "hillwave/pipeline.hpp"
#include "hillwave/profile.hpp"

struct hw_profile {
  hillwave::PeriodicProfile p;
};
struct hw_scan {
  std::vector<hillwave::InstabilityInterval> intervals;
};
struct hw_config {
  hillwave::RunConfig cfg;
};
struct hw_result {
  hillwave::CommandResult r;
};

namespace {

thread_local std::string g_last_error;

template <class F>
hw_status guarded(F&& f) noexcept {
  try {
    f();
    g_last_error.clear();
    return HW_OK;
  } catch (const hillwave::Error& e) {
    g_last_error = e.what();
    return static_cast<hw_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return HW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HW_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return HW_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) hillwave::fail(hillwave::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

}  // namespace

extern "C" {

const char* hw_version(void) { return "0.1.0"; }

const char* hw_status_name(hw_status status) {
  if (status == HW_OK) return "ok";
  if (status == HW_ERR_INTERNAL) return "internal";
  return hillwave::to_string(static_cast<hillwave::ErrorCode>(status));
}

const char* hw_last_error(void) { return g_last_error.c_str(); }

hw_status hw_profile_create(double mean, const double* cos_coeffs, size_t count, hw_profile** out) {
  return guarded([&] {
    need(out, "out");
    if (count > 0) need(cos_coeffs, "cos_coeffs");
    std::vector<double> c(cos_coeffs, cos_coeffs + count);
    *out = new hw_profile{hillwave::PeriodicProfile::make(mean, std::move(c))};
  });
}

void hw_profile_destroy(hw_profile* profile) { delete profile; }

hw_status hw_profile_eval(const hw_profile* profile, double t, double* R, double* dR, double* d2R) {
  return guarded([&] {
    need(profile, "profile");
    const hillwave::Jet j = profile->p.R(t);
    if (R) *R = j.value;
    if (dR) *dR = j.d1;
    if (d2R) *d2R = j.d2;
  });
}

hw_status hw_profile_potential(const hw_profile* profile, int n, double t, double* q) {
  return guarded([&] {
    need(profile, "profile");
    need(q, "q");
    *q = profile->p.potential_q(n, t);
  });
}

hw_status hw_monodromy(const hw_profile* profile, int n, double lambda, double tol, double out[4]) {
  return guarded([&] {
    need(profile, "profile");
    need(out, "out");
    const hillwave::Monodromy m = hillwave::monodromy(profile->p, n, lambda, tol);
    out[0] = m.b11;
    out[1] = m.b12;
    out[2] = m.b21;
    out[3] = m.b22;
  });
}

hw_status hw_closed_form_wv(const double b[4], int m, double* W, double* V) {
  return guarded([&] {
    need(b, "b");
    hillwave::Monodromy mono;
    mono.b11 = b[0];
    mono.b12 = b[1];
    mono.b21 = b[2];
    mono.b22 = b[3];
    const hillwave::WV wv = hillwave::closed_form_wv(mono, m);
    if (W) *W = wv.W;
    if (V) *V = wv.V;
  });
}

hw_status hw_scan_create(const hw_profile* profile, int n, double lambda_min, double lambda_max, int steps,
                         hw_scan** out) {
  return guarded([&] {
    need(profile, "profile");
    need(out, "out");
    hillwave::ScanOptions opt;
    opt.lambda_min = lambda_min;
    opt.lambda_max = lambda_max;
    opt.steps = steps;
    *out = new hw_scan{hillwave::scan_trace(profile->p, n, opt).intervals};
  });
}

size_t hw_scan_interval_count(const hw_scan* scan) { return scan ? scan->intervals.size() : 0; }

hw_status hw_scan_interval(const hw_scan* scan, size_t index, double* lo, double* hi, double* star) {
  return guarded([&] {
    need(scan, "scan");
    hillwave::require(index < scan->intervals.size(), "interval index out of range");
    const auto& iv = scan->intervals[index];
    if (lo) *lo = iv.lambda_lo;
    if (hi) *hi = iv.lambda_hi;
    if (star) *star = iv.lambda_star;
  });
}

void hw_scan_destroy(hw_scan* scan) { delete scan; }

hw_status hw_hyp2f1(double a, double b, double c, double z, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = hillwave::gauss_2f1(a, b, c, z).value;
  });
}

hw_status hw_gaussian_curvature(double l, double u1, double u2, double* K) {
  return guarded([&] {
    need(K, "K");
    *K = hillwave::curvature_at(hillwave::TargetPoint{u1, u2}, l);
  });
}

hw_status hw_config_parse(const char* json, hw_config** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new hw_config{hillwave::parse_config(json)};
  });
}

hw_status hw_config_load(const char* path, hw_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new hw_config{hillwave::load_config(path)};
  });
}

void hw_config_destroy(hw_config* config) { delete config; }

const char* hw_config_output_dir(const hw_config* config) { return config ? config->cfg.output_dir.c_str() : ""; }

size_t hw_command_count(void) { return hillwave::command_names().size(); }

const char* hw_command_name(size_t index) {
  static const std::vector<std::string> names = hillwave::command_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

hw_status hw_run(const hw_config* config, const char* command, const char* out_dir, hw_result** out) {
  return guarded([&] {
    need(config, "config");
    need(command, "command");
    need(out, "out");
    const std::string dir = out_dir ? out_dir : config->cfg.output_dir;
    *out = new hw_result{hillwave::run_command(command, config->cfg, dir)};
  });
}

const char* hw_result_summary(const hw_result* result) { return result ? result->r.summary.c_str() : ""; }

size_t hw_result_file_count(const hw_result* result) { return result ? result->r.files.size() : 0; }

const char* hw_result_file(const hw_result* result, size_t index) {
  return result && index < result->r.files.size() ? result->r.files[index].c_str() : nullptr;
}

void hw_result_destroy(hw_result* result) { delete result; }

}  // extern "C"
