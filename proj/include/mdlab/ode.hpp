#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include <boost/numeric/odeint.hpp>

namespace mdlab::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Options {
  double tol = 1e-10;        // local error per step, relative to max |y|
  double h_init = 1e-2;
  double h_min = 1e-14;
  std::size_t max_steps = 2000000;
  double overflow = 1e250;
};

struct Stats {
  std::size_t steps = 0, rejected = 0, evals = 0;
  bool diverged = false;
  double last_h = 0.0;
};

// Dormand-Prince 5(4) (odeint, FSAL), advancing y from t0 to t1 (either
// direction).  The local error is measured against tol max |y|.  h is the
// step-size hint on entry and the next proposed step on exit, so calls over
// consecutive intervals keep their step size.
template <std::size_t N, class Rhs>
Stats dopri5(Rhs&& f, double t0, State<N>& y, double t1, const Options& opt, double& h) {
  namespace oi = boost::numeric::odeint;
  using Stepper = oi::runge_kutta_dopri5<State<N>>;
  using Checker = oi::default_error_checker<double, oi::array_algebra, oi::default_operations>;

  Stats st;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  if (t1 == t0) return st;
  h = std::abs(h);
  if (!(h > 0.0)) h = opt.h_init;

  auto sys = [&](const State<N>& x, State<N>& dxdt, double t) { f(t, x, dxdt); };
  State<N> dydt;
  sys(y, dydt, t0);
  ++st.evals;
  double t = t0;
  while (dir * (t1 - t) > 0.0) {
    if (st.steps + st.rejected > opt.max_steps) {
      st.diverged = true;
      break;
    }
    const double remaining = std::abs(t1 - t);
    const bool last = h >= remaining * (1.0 - 1e-12);
    const double h_try = last ? remaining : h;
    double scale = 0.0;
    for (double v : y) scale = std::max(scale, std::abs(v));
    oi::controlled_runge_kutta<Stepper, Checker> ctrl(Checker(opt.tol * std::max(scale, 1e-300), 0.0, 0.0, 0.0));
    double dt = dir * h_try, tt = t;
    const auto res = ctrl.try_step(sys, y, dydt, tt, dt);
    st.evals += 6;
    if (res == oi::success) {
      t = last ? t1 : tt;
      ++st.steps;
      st.last_h = h_try;
      bool finite = true;
      double mag = 0.0;
      for (double v : y) {
        finite = finite && std::isfinite(v);
        mag = std::max(mag, std::abs(v));
      }
      if (!finite || mag > opt.overflow) {
        st.diverged = true;
        break;
      }
      // a clipped final step keeps the unclipped proposal for the next call
      if (!last) h = std::abs(dt);
    } else {
      ++st.rejected;
      h = std::abs(dt);
      if (!std::isfinite(h) || h < opt.h_min) {
        st.diverged = true;
        break;
      }
    }
  }
  return st;
}

}  // namespace mdlab::ode
