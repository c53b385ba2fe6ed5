// Exercises the C interface only; linked against the shared library.
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "hillwave/hillwave.h"

namespace {

int failures = 0;

void check(bool ok, const char* what, int line) {
  if (!ok) {
    ++failures;
    std::fprintf(stderr, "capi_tests:%d: check failed: %s (last error: %s)\n", line, what, hw_last_error());
  }
}

#define CHECK(x) check((x), #x, __LINE__)

}  // namespace

int main() {
  CHECK(std::strlen(hw_version()) > 0);
  CHECK(std::string(hw_status_name(HW_ERR_CONFIG)) == "Config");
  CHECK(std::string(hw_status_name(HW_OK)) == "ok");

  hw_profile* flat = nullptr;
  CHECK(hw_profile_create(1.0, nullptr, 0, &flat) == HW_OK);
  const double c[1] = {0.3};
  hw_profile* p = nullptr;
  CHECK(hw_profile_create(1.0, c, 1, &p) == HW_OK);
  hw_profile* bad = nullptr;
  const double big[1] = {2.0};
  CHECK(hw_profile_create(1.0, big, 1, &bad) == HW_ERR_NON_POSITIVE_PROFILE);
  CHECK(bad == nullptr);
  CHECK(std::strlen(hw_last_error()) > 0);
  CHECK(hw_profile_create(1.0, c, 1, nullptr) == HW_ERR_INVALID_ARGUMENT);

  double R = 0.0, dR = 0.0, d2R = 0.0;
  CHECK(hw_profile_eval(p, 0.0, &R, &dR, &d2R) == HW_OK);
  CHECK(std::abs(R - 1.3) < 1e-15 && std::abs(dR) < 1e-15);
  CHECK(hw_profile_eval(nullptr, 0.0, &R, &dR, &d2R) == HW_ERR_INVALID_ARGUMENT);
  double q = 1.0;
  CHECK(hw_profile_potential(flat, 2, 0.3, &q) == HW_OK && q == 0.0);

  double b[4];
  CHECK(hw_monodromy(flat, 2, 4.0, 1e-12, b) == HW_OK);
  CHECK(std::abs(b[0] + b[3] - 2.0 * std::cos(2.0)) < 1e-10);
  CHECK(hw_monodromy(p, 2, 9.0, 1e-12, b) == HW_OK);
  double W = 0.0, V = 0.0;
  CHECK(hw_closed_form_wv(b, 0, &W, &V) == HW_OK);
  CHECK(std::abs(V - 1.0) < 1e-13 && std::abs(W) < 1e-13);
  CHECK(hw_closed_form_wv(b, 1, &W, &V) == HW_OK);
  CHECK(std::abs(W - b[2]) < 1e-12);
  double stable[4];
  CHECK(hw_monodromy(flat, 2, 4.0, 1e-12, stable) == HW_OK);
  CHECK(hw_closed_form_wv(stable, 2, &W, &V) == HW_ERR_INVALID_ARGUMENT);

  hw_scan* scan = nullptr;
  CHECK(hw_scan_create(p, 2, 1.0, 20.0, 200, &scan) == HW_OK);
  CHECK(hw_scan_interval_count(scan) >= 1);
  double lo = 0.0, hi = 0.0, star = 0.0;
  CHECK(hw_scan_interval(scan, 0, &lo, &hi, &star) == HW_OK);
  CHECK(std::abs(lo - 6.52598) < 1e-4 && std::abs(hi - 12.06393) < 1e-4 && lo < star && star < hi);
  CHECK(hw_scan_interval(scan, 99, &lo, &hi, &star) == HW_ERR_INVALID_ARGUMENT);
  hw_scan_destroy(scan);
  CHECK(hw_scan_interval_count(nullptr) == 0);

  double f = 0.0;
  CHECK(hw_hyp2f1(1.0, 1.0, 2.0, 0.5, &f) == HW_OK);
  CHECK(std::abs(f - 2.0 * std::log(2.0)) < 1e-14);
  CHECK(hw_hyp2f1(1.0, 1.0, 2.0, 1.0, &f) == HW_ERR_INVALID_ARGUMENT);
  double K = 0.0;
  CHECK(hw_gaussian_curvature(2.0, 0.0, 0.4, &K) == HW_OK && K == -1.0);
  CHECK(hw_gaussian_curvature(1.0, 0.0, -1.0, &K) != HW_OK);

  hw_config* cfg = nullptr;
  CHECK(hw_config_parse("{\"unknown\": 1}", &cfg) == HW_ERR_CONFIG);
  CHECK(hw_config_parse(nullptr, &cfg) == HW_ERR_INVALID_ARGUMENT);
  CHECK(hw_config_load("/nonexistent.json", &cfg) != HW_OK);
  CHECK(hw_config_parse("{\"output_dir\": \"capi_out\", \"geodesic\": {\"s_max\": 2}}", &cfg) == HW_OK);
  CHECK(std::string(hw_config_output_dir(cfg)) == "capi_out");

  CHECK(hw_command_count() == 6);
  CHECK(hw_command_name(hw_command_count()) == nullptr);
  hw_result* res = nullptr;
  CHECK(hw_run(cfg, "geodesic", nullptr, &res) == HW_OK);
  CHECK(hw_result_file_count(res) == 1);
  CHECK(std::string(hw_result_file(res, 0)).find("capi_out") != std::string::npos);
  CHECK(std::string(hw_result_summary(res)).find("turning_points") != std::string::npos);
  CHECK(hw_result_file(res, 5) == nullptr);
  hw_result_destroy(res);
  res = nullptr;
  CHECK(hw_run(cfg, "bogus", nullptr, &res) == HW_ERR_INVALID_ARGUMENT);
  CHECK(res == nullptr);

  hw_config_destroy(cfg);
  hw_profile_destroy(p);
  hw_profile_destroy(flat);
  hw_profile_destroy(nullptr);

  if (failures == 0) std::printf("capi_tests: all checks passed\n");
  return failures == 0 ? 0 : 1;
}
