#pragma once

namespace salvo {

/// Classical fourth-order Runge-Kutta step.
///
/// `rhs(offset, y)` evaluates the derivative at time t + offset, so callers
/// with exogenous time-dependent inputs can sample them at each stage.
template <typename State, typename Rhs>
State rk4_step(const State& y, double h, Rhs&& rhs) {
  const State k1 = rhs(0.0, y);
  const State k2 = rhs(0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = rhs(0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = rhs(h, State(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace salvo
