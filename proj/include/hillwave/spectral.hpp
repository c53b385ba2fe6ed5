#pragma once

#include <span>
#include <vector>

#include "hillwave/floquet.hpp"
#include "hillwave/grid.hpp"
#include "hillwave/profile.hpp"

namespace hillwave {

/// v solves the damped equation v_tt + n (R'/R) v_t - R^-2 lap v = 0;
/// w = R^{n/2} v solves the Hill form mode by mode.
enum class Gauge { V, W };

struct WaveState {
  Grid grid;
  Field v, v_t;  // the field and its time derivative in the stated gauge
  double time = 0.0;
  Gauge gauge = Gauge::V;
};

WaveState liouville_to_w(const WaveState& s, const PeriodicProfile& p);
WaveState liouville_to_v(const WaveState& s, const PeriodicProfile& p);

struct EvolveOptions {
  double tol = 1e-12;
  /// Worker threads for mode evolution; output does not depend on it.
  int threads = 1;
};

/// Exact mode decoupling on a periodic Line or Plane grid: FFT, one 2x2
/// propagator per distinct |xi|^2 (integrated in the state's gauge), inverse
/// FFT at each requested time (non-decreasing, >= s.time).
std::vector<WaveState> evolve_linear(const WaveState& s, const PeriodicProfile& p, std::span<const double> times,
                                     const EvolveOptions& opt = {});

/// Midpoint-rule L^q norm, q in [2, inf]; q = inf is the grid max of |f|.
double lq_norm(const Field& f, const Grid& g, double q);

/// Least-squares slope of ln y against m over lo <= m <= hi (y > 0 only).
struct LogFit {
  double rate = 0.0;
  double intercept = 0.0;
  int points = 0;
};
LogFit fit_log_rate(std::span<const int> m, std::span<const double> y, int lo, int hi);

/// Periodic box for data supported in |x| <= support over times [0, T]:
/// half extent support + T max(1/R) + margin, spacing <= 2 pi/(k_star ppw)
/// (ppw points per carrier wavelength), point count rounded up to a
/// multiple of 32.
Grid spectral_box(int n, double support, double T, const PeriodicProfile& p, double k_star, double margin = 4.0,
                  double ppw = 8.0);

/// Smooth compact bump exp(1 - 1/(1 - (r/width)^2)) cos(k_star r) with r the
/// distance from the origin (radially symmetric for n = 2).
Field resonant_bump(const Grid& g, double width, double k_star, double amplitude = 1.0, double cx = 0.0,
                    double cy = 0.0);

/// Trigonometric interpolation of a periodic-grid field along the x axis
/// (y = 0, a node row of plane grids) at the given abscissae.
Field sample_x_axis(const Grid& g, const Field& f, std::span<const double> xs);

/// Which slot of the initial data carries phi; the other is zero.
enum class Loading { Displacement, Velocity };

struct GrowthOptions {
  Gauge gauge = Gauge::W;
  Loading loading = Loading::Velocity;
  int m_max = 12;
  int fit_min = 3;
  int fit_max = 0;  // 0: m_max
  double q = 2.0;
  ScanOptions scan;
  EvolveOptions evolve;
  /// Minimum share of |phi_hat|^2 on modes with |xi|^2 inside detected intervals.
  double energy_threshold = 1e-3;
  /// Modes with |phi_hat|^2 >= support_threshold * max count as supported.
  double support_threshold = 1e-3;
  /// false: a profile without resonance yields a report instead of NoResonantEnergy.
  bool require_resonant_energy = true;
};

struct GrowthReport {
  std::vector<int> times;       // 0..m_max
  std::vector<double> norms;    // L^q at each time
  std::vector<double> l2, linf;
  double q = 2.0;
  double delta_hat = 0.0;       // fitted rate of the L^q norms
  double delta_hat_l2 = 0.0;
  double delta_hat_linf = 0.0;
  double intercept = 0.0;
  int fit_lo = 0, fit_hi = 0;
  double mu0_ref = 0.0;         // max ln mu0 over supported resonant modes
  double lambda_ref = 0.0;      // the mode attaining mu0_ref
  double resonant_energy = 0.0; // share of |phi_hat|^2 in the intervals
  std::vector<InstabilityInterval> intervals;
};

struct ResonantEnergy {
  double share = 0.0;       // of |phi_hat|^2 on |xi|^2 inside the intervals
  double mu0_ref = 0.0;     // max ln mu0 over supported resonant modes
  double lambda_ref = 0.0;
};
ResonantEnergy resonant_energy(const PeriodicProfile& p, const Grid& grid, const Field& phi,
                               const std::vector<InstabilityInterval>& intervals, double support_threshold,
                               double tol = kDefaultMonodromyTol);

/// Evolves phi-loaded data to t = 1..m_max and fits the exponential rate.
/// Throws Error(NoResonantEnergy) if the spectral energy check fails.
GrowthReport growth_at_integers(const PeriodicProfile& p, const Grid& grid, const Field& phi,
                                const GrowthOptions& opt = {});

}  // namespace hillwave
