#pragma once

// Stage-by-stage battle driver. A stage keeps one allocation until some
// entity is eliminated; the next allocation comes from a script or from the
// greedy threat-rate rule.

#include <algorithm>
#include <future>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ncw/analytic.hpp"
#include "ncw/core.hpp"
#include "ncw/integrator.hpp"

namespace ncw {

enum class PolicyMode { scripted, greedy_optimal };

enum class Outcome { BlueWins, BlueLoses, Timeout };

constexpr std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::BlueWins: return "BlueWins";
    case Outcome::BlueLoses: return "BlueLoses";
    case Outcome::Timeout: return "Timeout";
  }
  return "?";
}

template <std::floating_point Real>
struct BasicStrategyScript {
  PolicyMode mode = PolicyMode::greedy_optimal;
  std::vector<BasicAllocation<Real>> stages;  ///< scripted mode; the last entry persists

  static BasicStrategyScript greedy() { return {PolicyMode::greedy_optimal, {}}; }

  static BasicStrategyScript scripted(std::vector<BasicAllocation<Real>> stages) {
    if (stages.empty()) throw std::invalid_argument("scripted strategy needs at least one stage");
    return {PolicyMode::scripted, std::move(stages)};
  }

  bool operator==(const BasicStrategyScript&) const = default;
};

template <std::floating_point Real>
struct BasicSample {
  BasicBattleState<Real> state;
  std::size_t stage = 0;
};

template <std::floating_point Real>
struct BasicTrajectory {
  std::vector<BasicSample<Real>> samples;  ///< strictly increasing in time
  std::vector<BasicStageEvent<Real>> events;
  std::vector<BasicAllocation<Real>> stage_allocations;
  Outcome outcome = Outcome::Timeout;

  const BasicBattleState<Real>& final_state() const { return samples.back().state; }

  /// Linear interpolation between samples; held constant past the end.
  Real b_at(Real t) const {
    if (t <= samples.front().state.t) return samples.front().state.b;
    if (t >= samples.back().state.t) return samples.back().state.b;
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const BasicSample<Real>& s, Real v) { return s.state.t < v; });
    const auto& hi = it->state;
    const auto& lo = std::prev(it)->state;
    const Real w = (t - lo.t) / (hi.t - lo.t);
    return lo.b + w * (hi.b - lo.b);
  }
};

template <std::floating_point Real>
struct BasicStageResult {
  std::vector<BasicBattleState<Real>> segment;  ///< accepted states after the start state
  std::optional<BasicStageEvent<Real>> event;   ///< empty when max_time was reached
};

/// Integrates with a fixed allocation until the first elimination (of any
/// entity, B included) or until cfg.max_time.
template <std::floating_point Real>
BasicStageResult<Real> run_stage(const BasicScenario<Real>& scn, const BasicAllocation<Real>& alloc,
                                 const BasicBattleState<Real>& start, const BasicIntegratorConfig<Real>& cfg) {
  if (!start.alive(Entity::B)) throw std::invalid_argument("run_stage: B already eliminated");
  if (!start.alive(Entity::R) && !start.alive(Entity::A))
    throw std::invalid_argument("run_stage: R and A already eliminated");

  BasicStageResult<Real> out;
  BasicBattleState<Real> st = start;
  while (st.t < cfg.max_time) {
    const Real h = std::min(cfg.step, cfg.max_time - st.t);
    auto next = detail::rk4_raw(scn, alloc, st, h);
    if (!detail::newly_eliminated(st, next).empty()) {
      if (auto ev = detect_elimination(scn, alloc, st, next, cfg.event_tolerance)) {
        out.segment.push_back(ev->state);
        out.event = std::move(ev);
        return out;
      }
    }
    detail::pin_eliminated(next);
    if (cfg.max_time - next.t < cfg.event_tolerance) next.t = cfg.max_time;
    out.segment.push_back(next);
    st = next;
  }
  return out;
}

/// Threat rates recomputed from a mid-battle state. The network slope of
/// f stays anchored to the scenario's n0, so R's threat is f(n) * beta_r.
/// Eliminated entities contribute 0, and N is harmless once R is gone.
/// Equals threat_rates(scn) at the initial state.
template <std::floating_point Real>
constexpr BasicThreatRates<Real> stage_threat_rates(const BasicScenario<Real>& scn,
                                                    const BasicBattleState<Real>& st) noexcept {
  const bool r = st.alive(Entity::R), n = st.alive(Entity::N), a = st.alive(Entity::A);
  const Real f = scn.alpha_d + (scn.alpha_c - scn.alpha_d) * (n ? st.n : Real(0)) / scn.n0;
  return {
      r ? f * scn.beta_r : Real(0),
      (r && n) ? scn.beta_n * (scn.alpha_c - scn.alpha_d) * st.r / scn.n0 : Real(0),
      a ? scn.gamma_a * scn.beta_a : Real(0),
  };
}

/// optimal_allocation over the stage rates, restricted to targets worth
/// shooting: R and A while alive, N while both N and R are alive. Ties keep
/// the R, N, A priority.
template <std::floating_point Real>
BasicAllocation<Real> greedy_allocation(const BasicScenario<Real>& scn, const BasicBattleState<Real>& st) {
  const auto rates = stage_threat_rates(scn, st);
  const bool candidate[3] = {st.alive(Entity::R), st.alive(Entity::R) && st.alive(Entity::N),
                             st.alive(Entity::A)};
  if (candidate[0] && candidate[1] && candidate[2]) return optimal_allocation(rates);

  constexpr Entity targets[3] = {Entity::R, Entity::N, Entity::A};
  std::optional<Entity> best;
  for (int i = 0; i < 3; ++i) {
    if (!candidate[i]) continue;
    if (!best || rates.of(targets[i]) > rates.of(*best)) best = targets[i];
  }
  if (!best) throw std::invalid_argument("greedy_allocation: no live target");
  return BasicAllocation<Real>::vertex(*best);
}

namespace detail {

template <std::floating_point Real>
std::optional<Outcome> terminal_outcome(const BasicBattleState<Real>& st) noexcept {
  if (!st.alive(Entity::B)) return Outcome::BlueLoses;
  if (!st.alive(Entity::R) && !st.alive(Entity::A)) return Outcome::BlueWins;
  return std::nullopt;
}

}  // namespace detail

/// Chains stages until B is eliminated, both R and A are eliminated, or
/// cfg.max_time is reached.
template <std::floating_point Real>
BasicTrajectory<Real> run_battle(const BasicScenario<Real>& scn, const BasicStrategyScript<Real>& script,
                                 const BasicIntegratorConfig<Real>& cfg) {
  scn.validate();
  cfg.validate();
  if (script.mode == PolicyMode::scripted && script.stages.empty())
    throw std::invalid_argument("scripted strategy needs at least one stage");

  BasicTrajectory<Real> traj;
  BasicBattleState<Real> st = BasicBattleState<Real>::initial(scn);
  detail::pin_eliminated(st);
  traj.samples.push_back({st, 0});

  for (std::size_t stage = 0;; ++stage) {
    if (auto done = detail::terminal_outcome(st)) {
      traj.outcome = *done;
      return traj;
    }
    const auto alloc = script.mode == PolicyMode::greedy_optimal
                           ? greedy_allocation(scn, st)
                           : script.stages[std::min(stage, script.stages.size() - 1)];
    traj.stage_allocations.push_back(alloc);

    auto result = run_stage(scn, alloc, st, cfg);
    for (const auto& s : result.segment) traj.samples.push_back({s, stage});
    if (!result.segment.empty()) st = result.segment.back();
    if (!result.event) {
      traj.outcome = Outcome::Timeout;
      return traj;
    }
    traj.events.push_back(std::move(*result.event));
  }
}

template <std::floating_point Real>
struct BasicComparisonReport {
  std::vector<Real> times;
  std::vector<std::vector<Real>> b_values;  ///< [script][time]
  std::vector<Outcome> outcomes;
  std::vector<BasicBattleState<Real>> final_states;
  std::vector<BasicTrajectory<Real>> trajectories;
  /// For each script index i >= 1: min over the grid of B_0(t) - B_i(t).
  /// Index 0 holds 0.
  std::vector<Real> margins;
  std::vector<bool> dominated;  ///< margins[i] >= -dominance_tolerance
};

/// Runs every script (concurrently) and compares B(t) on a shared uniform grid
/// spanning [0, latest end time]. Finished battles hold their final B.
template <std::floating_point Real>
BasicComparisonReport<Real> compare_strategies(const BasicScenario<Real>& scn,
                                               const std::vector<BasicStrategyScript<Real>>& scripts,
                                               const BasicIntegratorConfig<Real>& cfg,
                                               std::size_t grid_points = 1001,
                                               Real dominance_tolerance = Real(1e-6)) {
  if (scripts.size() < 2) throw std::invalid_argument("compare_strategies needs at least two strategies");
  if (grid_points < 2) throw std::invalid_argument("compare_strategies needs at least two grid points");

  std::vector<std::future<BasicTrajectory<Real>>> jobs;
  for (const auto& s : scripts)
    jobs.push_back(std::async(std::launch::async, [&scn, &s, &cfg] { return run_battle(scn, s, cfg); }));

  BasicComparisonReport<Real> rep;
  for (auto& j : jobs) rep.trajectories.push_back(j.get());

  Real t_end = 0;
  for (const auto& tr : rep.trajectories) t_end = std::max(t_end, tr.final_state().t);
  for (std::size_t i = 0; i < grid_points; ++i)
    rep.times.push_back(t_end * Real(i) / Real(grid_points - 1));

  for (const auto& tr : rep.trajectories) {
    std::vector<Real> bs;
    bs.reserve(grid_points);
    for (Real t : rep.times) bs.push_back(tr.b_at(t));
    rep.b_values.push_back(std::move(bs));
    rep.outcomes.push_back(tr.outcome);
    rep.final_states.push_back(tr.final_state());
  }

  for (std::size_t i = 0; i < scripts.size(); ++i) {
    Real margin = 0;
    if (i > 0) {
      margin = rep.b_values[0][0] - rep.b_values[i][0];
      for (std::size_t k = 1; k < grid_points; ++k)
        margin = std::min(margin, rep.b_values[0][k] - rep.b_values[i][k]);
    }
    rep.margins.push_back(margin);
    rep.dominated.push_back(margin >= -dominance_tolerance);
  }
  return rep;
}

using StrategyScript = BasicStrategyScript<double>;
using Sample = BasicSample<double>;
using Trajectory = BasicTrajectory<double>;
using StageResult = BasicStageResult<double>;
using ComparisonReport = BasicComparisonReport<double>;

}  // namespace ncw
