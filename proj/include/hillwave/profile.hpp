#pragma once

#include <span>
#include <vector>

namespace hillwave {

/// Value and first two derivatives of a scalar function of time.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Positive 1-periodic scale factor R(t) = r0 + sum_k r_k cos(2 pi k t).
///
/// The cosine-only series makes R exactly periodic with R'(0) = 0. Positivity
/// is checked on construction by dense sampling; immutable afterwards.
class PeriodicProfile {
 public:
  static constexpr int kPositivitySamples = 4096;

  /// Throws Error(NonPositiveProfile) if the sampled minimum is not positive.
  static PeriodicProfile make(double mean, std::vector<double> cosine_coeffs);

  double mean() const noexcept { return mean_; }
  std::span<const double> cosine_coeffs() const noexcept { return coeffs_; }
  bool is_constant() const noexcept { return constant_; }

  double min_sampled() const noexcept { return min_sampled_; }
  double max_sampled() const noexcept { return max_sampled_; }
  /// r0 > sum |r_k|, a sufficient (not necessary) positivity condition.
  bool sufficient_positivity() const noexcept;

  Jet R(double t) const noexcept;
  /// alpha = R^-2 and its derivatives.
  Jet alpha(double t) const noexcept;
  /// Hill potential q(t) for spatial dimension n (n >= 1).
  double potential_q(int n, double t) const;

  /// R'(t)/R(t), the damping coefficient of the v-equation divided by n.
  double log_derivative(double t) const noexcept;

 private:
  PeriodicProfile() = default;

  double mean_ = 1.0;
  std::vector<double> coeffs_;
  bool constant_ = true;
  double min_sampled_ = 1.0;
  double max_sampled_ = 1.0;
};

namespace presets {
PeriodicProfile minkowski();
/// R(t) = 1 + eps cos(2 pi t); eps in {0.1, 0.3} are the documented fixtures.
PeriodicProfile cosine(double eps);
}  // namespace presets

}  // namespace hillwave
