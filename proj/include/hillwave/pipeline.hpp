#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hillwave/floquet.hpp"
#include "hillwave/grid.hpp"
#include "hillwave/profile.hpp"
#include "hillwave/spectral.hpp"
#include "hillwave/wavemap.hpp"

namespace hillwave {

/// One run of the construction. Every tolerance and knob lives here; the
/// JSON form (config.cpp) mirrors the field names.
struct RunConfig {
  double profile_mean = 1.0;
  std::vector<double> profile_cos{0.3};
  int n = 2;
  double l = 1.0;
  int G = 2;

  struct Phi1 {
    double width = 25.0;
    double amplitude = 1e-3;  // epsilon
    std::array<double, 2> center{0.0, 0.0};
    double k_star = 0.0;  // 0: sqrt(lambda_used)
  } phi1;

  std::optional<double> alpha;  // absent: tuned to exit near target_period
  int target_period = 7;
  double u1_const = 0.0;
  double u2_const = 1e-4;
  int m_max = 12;
  int fit_min = 3;
  int fit_max = 0;  // 0: m_max

  ScanOptions scan;
  SelectionThresholds selection;
  double ode_tol = 1e-12;
  int threads = 1;

  double box_margin = 4.0;
  double points_per_wavelength = 6.0;
  double smallness_points_per_wavelength = 64.0;
  double energy_threshold = 1e-3;
  double support_threshold = 1e-3;

  int exit_subsamples = 32;
  double exit_tol = 1e-9;
  double u2_floor = 1e-8;

  struct CrossVal {
    double T = 2.0;
    double h = 0.2;
    int levels = 3;
    double cfl = 0.4;  // dt = cfl h min R
  } crossval;

  struct Evolve {
    double T = 1.0;
    double h = 0.1;
    double cfl = 0.4;
  } evolve;

  struct Geodesic {
    double l = 2.0;
    double C = 1.0;
    int sign = 1;
    double u1 = 0.0;
    double u2 = 0.5;
    double s_max = 10.0;
    double step = 0.05;
    double tol = 1e-12;
  } geodesic;

  std::string output_dir = "out";
};

/// Strict JSON parsing: unknown keys, wrong types and invalid values throw
/// Error(Config).
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
void validate(const RunConfig& cfg);
std::string config_to_json(const RunConfig& cfg);

PeriodicProfile make_profile(const RunConfig& cfg);

/// mu = 2/(2-l) for l < 2 (0 for l = 2).
double mu_of(double l) noexcept;

/// Resolved setup shared by demo, crossval and the commands.
struct Plan {
  PeriodicProfile profile = presets::minkowski();
  std::vector<InstabilityInterval> intervals;
  std::optional<InstabilityInterval> interval;
  std::optional<Selection> selection;
  std::string diagnostic;  // why no resonance is available, if so
  double k_star = 0.0;
  double mu = 0.0;
  double beta = 0.0;   // (u2~)^{1/mu}, l < 2
  double alpha = 0.0;  // l < 2
  bool alpha_tuned = false;
};

/// Scan, select lambda and fix k_star and alpha. Never throws for a missing
/// resonance (plan.selection stays empty and diagnostic says why).
Plan make_plan(const RunConfig& cfg);

struct InitialData {
  WaveMapState map;
  WaveState scalar;  // v-gauge companion data
};

/// Constant map plus the phi1 perturbation on `grid` (any kind).
InitialData build_initial_data(const RunConfig& cfg, const Plan& plan, const Grid& grid);

/// Spectral box for the demo horizon.
Grid demo_grid(const RunConfig& cfg, const Plan& plan, double T);

/// Grid used for the t = 0 smallness integral: a fine radial grid for
/// centred n = 2 data, a fine bounded line for n = 1, else the demo grid.
Grid smallness_grid(const RunConfig& cfg, const Plan& plan);

enum class BlowupMode { ExitBelowTwo, LogGrowthTwo, NoneWithinHorizon };
std::string to_string(BlowupMode mode);

struct PeriodRow {
  int m = 0;
  double l2 = 0.0;
  double linf = 0.0;       // of v - v(0)
  double min_u2 = 0.0;
  double max_u2 = 0.0;
  double exit_margin = 0.0;  // min_x (alpha/mu) v + beta; NaN for l = 2
};

struct Dichotomy {
  int m_lo = 0, m_hi = 0;
  double delta_hat = 0.0;
  double intercept = 0.0;
  double c0 = 0.0;
  std::vector<int> m;
  std::vector<double> sup;  // max_x (ln u2 - ln u2~)
  std::vector<double> inf;  // min_x (ln u2 - ln u2~)
  std::vector<std::string> branch;  // "sup", "inf" or "both"
};

struct BlowupReport {
  BlowupMode mode = BlowupMode::NoneWithinHorizon;
  std::optional<double> t_bp;
  std::optional<std::array<double, 2>> x_bp;
  std::optional<int> exit_period;      // first integer m with an exit inside (m-1, m]
  double exit_value = 0.0;             // (alpha/mu) v + beta at (t_bp, x_bp)
  double smallness = 0.0;
  GrowthReport growth;
  double lambda_used = 0.0;
  double mu0_used = 0.0;
  double ln_mu0_used = 0.0;
  double k_star = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double mu = 0.0;
  double epsilon = 0.0;
  double u1_drift = 0.0;  // max |u1 - u1~| (identically 0 along the vertical geodesic)
  std::optional<InstabilityInterval> interval;
  std::optional<Dichotomy> dichotomy;
  std::vector<PeriodRow> periods;
  int grid_points = 0;
  double grid_length = 0.0;
  std::string diagnostic;
};

/// End-to-end run; all failure modes are report states.
BlowupReport run_demo(const RunConfig& cfg);

struct CrossValReport {
  double T = 0.0;
  std::vector<double> h;
  std::vector<double> discrepancy;  // max |u2_fd - u2_ref| / max |u2_ref - u2~|
  std::vector<double> u1_drift;
  std::vector<double> ratios;       // discrepancy[k] / discrepancy[k+1]
  bool exited = false;
  double alpha = 0.0;
};

/// Direct nonlinear evolution against the linear reduction on the same data.
CrossValReport cross_validate(const RunConfig& cfg);

struct CommandResult {
  std::vector<std::string> files;
  std::string summary;  // JSON
};

/// Named subcommands: scan, geodesic, evolve, growth, demo, crossval.
/// Writes outputs under out_dir (created if missing).
CommandResult run_command(const std::string& name, const RunConfig& cfg, const std::string& out_dir);

std::vector<std::string> command_names();

}  // namespace hillwave
