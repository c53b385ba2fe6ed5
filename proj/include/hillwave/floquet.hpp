#pragma once

#include <array>
#include <complex>
#include <vector>

#include "hillwave/profile.hpp"

namespace hillwave {

/// 2x2 matrix, row-major: m[row][col].
using Mat2 = std::array<std::array<double, 2>, 2>;

Mat2 operator*(const Mat2& a, const Mat2& b) noexcept;
Mat2 identity2() noexcept;
Mat2 power(const Mat2& a, int m) noexcept;

inline constexpr double kDefaultMonodromyTol = 1e-12;

/// Period map X_lambda(1,0) of w'' + (lambda alpha(t) - q(t)) w = 0.
///
/// The state is ordered x = (w_t, w). Column 1 is the solution started from
/// (w_t, w)(0) = (1, 0) and column 2 the one from (0, 1); hence b21 = W(1)
/// and b22 = V(1) for the W, V solutions with W(0)=0, W'(0)=1, V(0)=1, V'(0)=0.
struct Monodromy {
  double lambda = 0.0;
  double b11 = 1.0, b12 = 0.0, b21 = 0.0, b22 = 1.0;
  double integrator_tol = kDefaultMonodromyTol;

  double trace() const noexcept { return b11 + b22; }
  double det() const noexcept { return b11 * b22 - b12 * b21; }
  Mat2 matrix() const noexcept { return {{{b11, b12}, {b21, b22}}}; }
};

struct Multipliers {
  std::complex<double> mu0;
  std::complex<double> mu0_inv;
  bool unstable = false;  // |trace| > 2; then mu0 is real with |mu0| > 1
};

struct InstabilityInterval {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double lambda_star = 0.0;
  double edge_tol = 0.0;
  double trace_at_star = 0.0;
  bool open_lo = false;  // edge clamped to the scan range, not bracketed
  bool open_hi = false;
};

struct ScanSample {
  double lambda = 0.0;
  double trace = 0.0;
  double det_err = 0.0;
  bool unstable = false;
  double mu0 = 1.0;  // real multiplier when unstable, otherwise |mu0| = 1
};

struct ScanOptions {
  double lambda_min = 1.0;
  double lambda_max = 100.0;
  int steps = 1000;
  double edge_tol = 1e-8;
  double tol = kDefaultMonodromyTol;
  /// A point counts as unstable when |trace| - 2 exceeds this margin.
  double instability_margin = 1e-9;
};

struct ScanResult {
  std::vector<ScanSample> samples;
  std::vector<InstabilityInterval> intervals;
};

/// Matrizant X(t1, t0) of the Hill system; t1 >= t0.
Mat2 fundamental_matrix(const PeriodicProfile& p, int n, double lambda, double t0, double t1,
                        double tol = kDefaultMonodromyTol);

Monodromy monodromy(const PeriodicProfile& p, int n, double lambda, double tol = kDefaultMonodromyTol);

Multipliers multipliers(double trace) noexcept;
inline Multipliers multipliers(const Monodromy& m) noexcept { return multipliers(m.trace()); }

/// ln|mu0| (0 inside stability bands).
double growth_exponent(const Monodromy& m) noexcept;

/// Tabulates the trace over the lambda grid and brackets every |trace| = 2
/// crossing by bisection. Never throws for an empty result.
ScanResult scan_trace(const PeriodicProfile& p, int n, const ScanOptions& opt);

/// As scan_trace, but throws Error(NoInstabilityFound) if no interval exists.
std::vector<InstabilityInterval> scan_instability(const PeriodicProfile& p, int n, const ScanOptions& opt);

struct SelectionThresholds {
  double b21_min = 1e-6;
  double b22_gap_min = 1e-6;
  int subgrid = 64;
};

struct Selection {
  double lambda = 0.0;
  Monodromy monodromy;
  Multipliers multipliers;
};

/// Picks lambda inside the interval with |b21| and |b22 - 1/mu0| above the
/// thresholds, searching the subgrid outward from lambda_star.
Selection select_lambda(const PeriodicProfile& p, int n, const InstabilityInterval& interval,
                        const SelectionThresholds& thresholds = {}, double tol = kDefaultMonodromyTol);

struct WV {
  double W = 0.0;
  double V = 0.0;
};

/// Values W(m), V(m) at integer times from the monodromy entries alone.
WV closed_form_wv(const Monodromy& m, int periods);

}  // namespace hillwave
