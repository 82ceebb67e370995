#pragma once

// Fire-integral reduction of a single stage.
//
// With constant allocation, R, N and A are affine in X = int B dt, so
// X'' = B' = -C1 X^2 + C2 X - C3. Multiplying by X' and integrating gives
// B^2 = -(2/3) C1 X^3 + C2 X^2 - 2 C3 X + C4 with C4 = B(stage start)^2.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ncw/core.hpp"

namespace ncw {

template <std::floating_point Real>
struct BasicReducedCoefficients {
  Real c1{}, c2{}, c3{}, c4{};
};

/// Coefficients for the first stage, straight from the scenario's initial
/// counts.
template <std::floating_point Real>
constexpr BasicReducedCoefficients<Real> reduced_coefficients(const BasicScenario<Real>& scn,
                                                              const BasicAllocation<Real>& alloc) noexcept {
  const Real gap = scn.alpha_c - scn.alpha_d;
  const Real p1 = alloc.pi1(), p2 = alloc.pi2(), p3 = alloc.pi3();
  return {
      p1 * p2 * scn.beta_r * scn.beta_n * gap / scn.n0,
      (p2 * scn.beta_n * gap * scn.r0 + p1 * scn.beta_r * scn.alpha_c * scn.n0) / scn.n0 +
          scn.gamma_a * p3 * scn.beta_a,
      scn.alpha_c * scn.r0 + scn.gamma_a * scn.a0,
      scn.b0 * scn.b0,
  };
}

/// Coefficients for a stage that starts at `start`. X is then measured from
/// the stage start. Entities already eliminated at `start` stay pinned at 0,
/// so fire aimed at them drops out. The network slope stays anchored to the
/// scenario's n0. Agrees with reduced_coefficients when `start` is the
/// initial state and every entity is alive.
template <std::floating_point Real>
constexpr BasicReducedCoefficients<Real> stage_coefficients(const BasicScenario<Real>& scn,
                                                            const BasicAllocation<Real>& alloc,
                                                            const BasicBattleState<Real>& start) noexcept {
  const Liveness live = Liveness::of(start);
  const Real r = live.r ? start.r : Real(0);
  const Real n = live.n ? start.n : Real(0);
  const Real a = live.a ? start.a : Real(0);
  const Real p1 = live.r ? alloc.pi1() : Real(0);
  const Real p2 = live.n ? alloc.pi2() : Real(0);
  const Real p3 = live.a ? alloc.pi3() : Real(0);
  const Real slope = (scn.alpha_c - scn.alpha_d) / scn.n0;
  const Real f = scn.alpha_d + slope * n;
  return {
      slope * p1 * p2 * scn.beta_r * scn.beta_n,
      f * p1 * scn.beta_r + slope * p2 * scn.beta_n * r + scn.gamma_a * p3 * scn.beta_a,
      f * r + scn.gamma_a * a,
      start.b * start.b,
  };
}

template <std::floating_point Real>
struct LinearStates {
  Real r{}, n{}, a{};
};

/// R, N, A after fire integral `x` has been delivered from `start` under a
/// fixed allocation. Clamped at 0.
template <std::floating_point Real>
constexpr LinearStates<Real> linear_states_from_x(const BasicScenario<Real>& scn,
                                                  const BasicAllocation<Real>& alloc,
                                                  const BasicBattleState<Real>& start, Real x) {
  if (!(x >= 0)) throw std::domain_error("linear_states_from_x: negative fire integral");
  return {
      std::max(Real(0), start.r - alloc.pi1() * scn.beta_r * x),
      std::max(Real(0), start.n - alloc.pi2() * scn.beta_n * x),
      std::max(Real(0), start.a - alloc.pi3() * scn.beta_a * x),
  };
}

template <std::floating_point Real>
constexpr LinearStates<Real> linear_states_from_x(const BasicScenario<Real>& scn,
                                                  const BasicAllocation<Real>& alloc, Real x) {
  return linear_states_from_x(scn, alloc, BasicBattleState<Real>::initial(scn), x);
}

template <std::floating_point Real>
constexpr Real energy_radicand(const BasicReducedCoefficients<Real>& c, Real x) noexcept {
  return ((-Real(2) / 3 * c.c1 * x + c.c2) * x - 2 * c.c3) * x + c.c4;
}

/// B at the instant the stage has delivered fire integral `x`. Throws
/// std::domain_error when the radicand is negative, i.e. `x` lies beyond B's
/// annihilation.
template <std::floating_point Real>
Real b_from_energy(const BasicReducedCoefficients<Real>& c, Real x) {
  const Real radicand = energy_radicand(c, x);
  if (radicand < 0) throw std::domain_error("b_from_energy: negative radicand");
  return std::sqrt(radicand);
}

/// b^2 - radicand(x); zero on the exact stage trajectory.
template <std::floating_point Real>
constexpr Real energy_residual(const BasicReducedCoefficients<Real>& c, Real b, Real x) noexcept {
  return b * b - energy_radicand(c, x);
}

/// Residual at a first-stage state (x measured from t = 0).
template <std::floating_point Real>
constexpr Real energy_residual(const BasicReducedCoefficients<Real>& c,
                               const BasicBattleState<Real>& st) noexcept {
  return energy_residual(c, st.b, st.x);
}

using ReducedCoefficients = BasicReducedCoefficients<double>;

}  // namespace ncw
