#pragma once

// Fixed-step classical RK4 over (B, R, N, A, X) with bisection refinement of
// elimination events.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ncw/core.hpp"

namespace ncw {

class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <std::floating_point Real>
struct BasicIntegratorConfig {
  Real step = Real(1e-3);
  Real event_tolerance = Real(1e-10);  ///< width of the bisected time bracket
  Real max_time = Real(1e4);

  void validate() const {
    if (!(step > 0) || !std::isfinite(step)) throw std::invalid_argument("step must be > 0");
    if (!(event_tolerance > 0)) throw std::invalid_argument("event_tolerance must be > 0");
    if (!(event_tolerance < step)) throw std::invalid_argument("event_tolerance must be smaller than step");
    if (!(max_time > 0) || !std::isfinite(max_time)) throw std::invalid_argument("max_time must be > 0");
  }

  bool operator==(const BasicIntegratorConfig&) const = default;
};

template <std::floating_point Real>
struct BasicStageEvent {
  Real time{};
  std::vector<Entity> eliminated;  ///< more than one only for simultaneous eliminations
  BasicBattleState<Real> state;    ///< eliminated counts pinned to exactly 0

  bool eliminates(Entity e) const noexcept {
    for (Entity x : eliminated)
      if (x == e) return true;
    return false;
  }
};

namespace detail {

template <std::floating_point Real>
BasicBattleState<Real> axpy(const BasicBattleState<Real>& st, Real h, const BasicStateDerivative<Real>& d) {
  return {st.t + h, st.b + h * d.db, st.r + h * d.dr, st.n + h * d.dn, st.a + h * d.da, st.x + h * d.dx};
}

// One RK4 step without clamping. The liveness mask is taken from `st`.
template <std::floating_point Real>
BasicBattleState<Real> rk4_raw(const BasicScenario<Real>& scn, const BasicAllocation<Real>& alloc,
                               const BasicBattleState<Real>& st, Real h) {
  const Liveness live = Liveness::of(st);
  const auto k1 = rhs_masked(scn, alloc, st, live);
  const auto k2 = rhs_masked(scn, alloc, axpy(st, h / 2, k1), live);
  const auto k3 = rhs_masked(scn, alloc, axpy(st, h / 2, k2), live);
  const auto k4 = rhs_masked(scn, alloc, axpy(st, h, k3), live);
  const Real w = h / 6;
  BasicBattleState<Real> out{
      st.t + h,
      st.b + w * (k1.db + 2 * k2.db + 2 * k3.db + k4.db),
      st.r + w * (k1.dr + 2 * k2.dr + 2 * k3.dr + k4.dr),
      st.n + w * (k1.dn + 2 * k2.dn + 2 * k3.dn + k4.dn),
      st.a + w * (k1.da + 2 * k2.da + 2 * k3.da + k4.da),
      st.x + w * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx),
  };
  for (Real v : {out.b, out.r, out.n, out.a, out.x})
    if (!std::isfinite(v)) throw numeric_error("rk4 step produced a non-finite state");
  return out;
}

// Entities alive in `before` whose count in `after` has fallen to the kill
// threshold.
template <std::floating_point Real>
std::vector<Entity> newly_eliminated(const BasicBattleState<Real>& before, const BasicBattleState<Real>& after) {
  std::vector<Entity> out;
  for (Entity e : all_entities)
    if (before.alive(e) && !after.alive(e)) out.push_back(e);
  return out;
}

template <std::floating_point Real>
void pin_eliminated(BasicBattleState<Real>& st) noexcept {
  for (Entity e : all_entities)
    if (!st.alive(e)) st.count(e) = Real(0);
}

}  // namespace detail

/// One RK4 step; counts at or below kill_epsilon are clamped to 0 afterwards.
template <std::floating_point Real>
BasicBattleState<Real> step_rk4(const BasicScenario<Real>& scn, const BasicAllocation<Real>& alloc,
                                const BasicBattleState<Real>& st, Real h) {
  if (!(h > 0)) throw std::invalid_argument("step_rk4: step must be > 0");
  auto out = detail::rk4_raw(scn, alloc, st, h);
  detail::pin_eliminated(out);
  return out;
}

/// Locates the first elimination inside the step from `before` to `after`.
/// The sub-step is bisected until the crossing time is bracketed within
/// `event_tolerance`; the state at the upper end of the bracket is returned
/// with every eliminated count pinned to 0. Empty if nothing crossed.
template <std::floating_point Real>
std::optional<BasicStageEvent<Real>> detect_elimination(const BasicScenario<Real>& scn,
                                                        const BasicAllocation<Real>& alloc,
                                                        const BasicBattleState<Real>& before,
                                                        const BasicBattleState<Real>& after,
                                                        Real event_tolerance = Real(1e-10)) {
  if (detail::newly_eliminated(before, after).empty()) return std::nullopt;

  // Crossing at the kill threshold counts as elimination outright: nothing
  // smaller to bisect towards.
  auto crossed = [&](const BasicBattleState<Real>& s) {
    for (Entity e : all_entities)
      if (before.alive(e) && s.count(e) <= 0) return true;
    return false;
  };

  Real lo = 0;
  Real hi = after.t - before.t;
  BasicBattleState<Real> hi_state = detail::rk4_raw(scn, alloc, before, hi);
  if (crossed(hi_state)) {
    while (hi - lo > event_tolerance) {
      const Real mid = lo + (hi - lo) / 2;
      if (mid <= lo || mid >= hi) break;
      auto s = detail::rk4_raw(scn, alloc, before, mid);
      if (crossed(s)) {
        hi = mid;
        hi_state = s;
      } else {
        lo = mid;
      }
    }
  }

  BasicStageEvent<Real> ev;
  ev.eliminated = detail::newly_eliminated(before, hi_state);
  // `after` disagreed with the dynamics from `before`.
  if (ev.eliminated.empty()) return std::nullopt;
  detail::pin_eliminated(hi_state);
  ev.state = hi_state;
  ev.time = hi_state.t;
  return ev;
}

using IntegratorConfig = BasicIntegratorConfig<double>;
using StageEvent = BasicStageEvent<double>;

}  // namespace ncw
