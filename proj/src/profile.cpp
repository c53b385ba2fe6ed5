#include "hillwave/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hillwave/error.hpp"

namespace hillwave {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveProfile: return "NonPositiveProfile";
    case ErrorCode::IntegratorFailure: return "IntegratorFailure";
    case ErrorCode::NoInstabilityFound: return "NoInstabilityFound";
    case ErrorCode::SelectionFailed: return "SelectionFailed";
    case ErrorCode::DegenerateMonodromy: return "DegenerateMonodromy";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DomainExit: return "DomainExit";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::NoResonantEnergy: return "NoResonantEnergy";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

PeriodicProfile PeriodicProfile::make(double mean, std::vector<double> cosine_coeffs) {
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    fail(ErrorCode::NonPositiveProfile, "profile mean must be positive");
  }
  for (double c : cosine_coeffs) {
    require(std::isfinite(c), "profile coefficients must be finite");
  }
  PeriodicProfile p;
  p.mean_ = mean;
  p.coeffs_ = std::move(cosine_coeffs);
  p.constant_ = std::all_of(p.coeffs_.begin(), p.coeffs_.end(), [](double c) { return c == 0.0; });

  double lo = mean;
  double hi = mean;
  for (int i = 0; i < kPositivitySamples; ++i) {
    const double r = p.R(static_cast<double>(i) / kPositivitySamples).value;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  p.min_sampled_ = lo;
  p.max_sampled_ = hi;
  if (!(lo > 0.0)) {
    fail(ErrorCode::NonPositiveProfile,
         "profile R(t) is not positive: sampled minimum " + std::to_string(lo));
  }
  return p;
}

bool PeriodicProfile::sufficient_positivity() const noexcept {
  double s = 0.0;
  for (double c : coeffs_) s += std::abs(c);
  return mean_ > s;
}

Jet PeriodicProfile::R(double t) const noexcept {
  Jet out{mean_, 0.0, 0.0};
  if (coeffs_.empty()) return out;
  constexpr double w = 2.0 * std::numbers::pi;
  const double frac = t - std::floor(t);
  const double c1 = std::cos(w * frac);
  const double s1 = std::sin(w * frac);
  // cos(k x), sin(k x) by the angle-addition recurrence.
  double ck = c1;
  double sk = s1;
  for (std::size_t k = 1; k <= coeffs_.size(); ++k) {
    const double rk = coeffs_[k - 1];
    const double wk = w * static_cast<double>(k);
    out.value += rk * ck;
    out.d1 -= rk * wk * sk;
    out.d2 -= rk * wk * wk * ck;
    const double cn = ck * c1 - sk * s1;
    sk = sk * c1 + ck * s1;
    ck = cn;
  }
  return out;
}

Jet PeriodicProfile::alpha(double t) const noexcept {
  const Jet r = R(t);
  const double inv = 1.0 / r.value;
  const double inv2 = inv * inv;
  const double inv3 = inv2 * inv;
  return {inv2, -2.0 * r.d1 * inv3, -2.0 * r.d2 * inv3 + 6.0 * r.d1 * r.d1 * inv2 * inv2};
}

double PeriodicProfile::potential_q(int n, double t) const {
  require(n >= 1, "potential_q requires n >= 1");
  if (constant_) return 0.0;
  const Jet a = alpha(t);
  const double ratio = a.d1 / a.value;
  const double dn = static_cast<double>(n);
  return dn / 4.0 * (1.5 * ratio * ratio - a.d2 / a.value) + dn / 8.0 * (dn / 2.0 - 1.0) * ratio * ratio;
}

double PeriodicProfile::log_derivative(double t) const noexcept {
  if (constant_) return 0.0;
  const Jet r = R(t);
  return r.d1 / r.value;
}

namespace presets {

PeriodicProfile minkowski() { return PeriodicProfile::make(1.0, {}); }

PeriodicProfile cosine(double eps) { return PeriodicProfile::make(1.0, {eps}); }

}  // namespace presets

}  // namespace hillwave
