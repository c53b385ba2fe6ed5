#pragma once

// Adaptive embedded Runge-Kutta integration (Fehlberg 7(8)) for small
// fixed-size systems. Thin stepping layer over Boost.Odeint: we own the step
// loop so output times are hit exactly and events can be bracketed.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "hillwave/error.hpp"

namespace hillwave::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Options {
  double tol = 1e-12;  // absolute and relative
  double initial_step = 1e-2;
  double max_step = 0.0;  // 0: unbounded
  std::size_t max_steps = 10'000'000;
  int max_consecutive_rejects = 200;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

template <std::size_t N>
class AdaptiveIntegrator {
 public:
  using state_type = State<N>;
  using stepper_type = boost::numeric::odeint::runge_kutta_fehlberg78<state_type>;

  explicit AdaptiveIntegrator(Options opt = {})
      : opt_(opt),
        controlled_(boost::numeric::odeint::make_controlled<stepper_type>(opt.tol, opt.tol)),
        dt_(opt.initial_step) {
    require(opt.tol > 0.0, "integrator tolerance must be positive");
  }

  const Stats& stats() const noexcept { return stats_; }
  const Options& options() const noexcept { return opt_; }

  /// Advance by one accepted step without passing t_limit (t_limit > t).
  /// rhs(x, dxdt, t) writes the derivative.
  template <class Rhs>
  void step(Rhs&& rhs, state_type& x, double& t, double t_limit) {
    auto sys = [&rhs](const state_type& y, state_type& dy, double s) { rhs(y, dy, s); };
    double h = dt_;
    if (opt_.max_step > 0.0) h = std::min(h, opt_.max_step);
    bool clamped = false;
    if (t + h >= t_limit) {
      h = t_limit - t;
      clamped = true;
    }
    int rejects = 0;
    for (;;) {
      if (stats_.accepted + stats_.rejected >= opt_.max_steps) {
        fail(ErrorCode::IntegratorFailure, "integrator exceeded the step budget");
      }
      const double h_try = h;
      const auto res = controlled_.try_step(sys, x, t, h);
      if (res == boost::numeric::odeint::success) {
        ++stats_.accepted;
        if (clamped) {
          t = t_limit;
          dt_ = std::max(dt_, h);
        } else {
          dt_ = h;
        }
        return;
      }
      ++stats_.rejected;
      clamped = false;
      if (++rejects > opt_.max_consecutive_rejects || !(h > 0.0) ||
          h < 1e-15 * std::max(1.0, std::abs(t)) || !std::isfinite(h)) {
        fail(ErrorCode::IntegratorFailure,
             "step control cannot meet tolerance near t=" + std::to_string(t) +
                 " (last step " + std::to_string(h_try) + ")");
      }
    }
  }

  /// Integrate through the non-decreasing output times, calling
  /// out(index, x) at each one.
  template <class Rhs, class Out>
  void integrate_to(Rhs&& rhs, state_type& x, double& t, std::span<const double> times, Out&& out) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double target = times[i];
      require(target >= t, "output times must be non-decreasing");
      while (t < target) step(rhs, x, t, target);
      out(i, x);
    }
  }

  /// One non-adaptive step of size h from (x, t); used to bracket events.
  template <class Rhs>
  state_type single_step(Rhs&& rhs, const state_type& x, double t, double h) const {
    auto sys = [&rhs](const state_type& y, state_type& dy, double s) { rhs(y, dy, s); };
    stepper_type rk;
    state_type out{};
    rk.do_step(sys, x, t, out, h);
    return out;
  }

 private:
  Options opt_;
  boost::numeric::odeint::controlled_runge_kutta<stepper_type> controlled_;
  double dt_;
  Stats stats_;
};

/// Convenience: integrate from t0 to t1 and return the final state.
template <std::size_t N, class Rhs>
State<N> integrate(Rhs&& rhs, State<N> x, double t0, double t1, const Options& opt) {
  AdaptiveIntegrator<N> integ(opt);
  double t = t0;
  while (t < t1) integ.step(rhs, x, t, t1);
  return x;
}

}  // namespace hillwave::ode
