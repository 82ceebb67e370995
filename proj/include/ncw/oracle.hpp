#pragma once

// Brute-force checks of the vertex-optimality rule: a uniform grid over the
// allocation simplex, the weighted-sum scalarization, and direct simulation.

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ncw/battle.hpp"
#include "ncw/core.hpp"
#include "ncw/integrator.hpp"

namespace ncw {

/// All allocations (i/k, j/k, (k-i-j)/k) with i + j <= k.
template <std::floating_point Real>
class BasicSimplexGrid {
 public:
  explicit BasicSimplexGrid(int resolution) : k_(resolution) {
    if (resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
    for (int i = 0; i <= k_; ++i) {
      for (int j = 0; i + j <= k_; ++j) {
        const int l = k_ - i - j;
        points_.push_back(BasicAllocation<Real>::make(Real(i) / k_, Real(j) / k_, Real(l) / k_));
      }
    }
  }

  int resolution() const noexcept { return k_; }
  const std::vector<BasicAllocation<Real>>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

 private:
  int k_;
  std::vector<BasicAllocation<Real>> points_;
};

/// lambda * a * pi1 * pi2 - (1 - lambda) * (b1 pi1 + b2 pi2 + b3 pi3), with
/// a = beta_r beta_n (alpha_c - alpha_d) / n0.
template <std::floating_point Real>
constexpr Real scalarized_objective(const BasicScenario<Real>& scn, const BasicAllocation<Real>& alloc,
                                    Real lambda) noexcept {
  const Real a = scn.beta_r * scn.beta_n * (scn.alpha_c - scn.alpha_d) / scn.n0;
  const auto rates = threat_rates(scn);
  const Real gain = rates.b1 * alloc.pi1() + rates.b2 * alloc.pi2() + rates.b3 * alloc.pi3();
  return lambda * a * alloc.pi1() * alloc.pi2() - (1 - lambda) * gain;
}

template <std::floating_point Real>
struct BasicScalarizationCheck {
  Real lambda{};
  BasicAllocation<Real> grid_argmin;
  Real grid_min{};
  Real theorem_value{};  ///< objective at optimal_allocation's vertex
  bool ok = false;
};

template <std::floating_point Real>
struct BasicScalarizationReport {
  BasicAllocation<Real> theorem_vertex;
  std::vector<BasicScalarizationCheck<Real>> checks;

  bool passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.ok; });
  }
};

template <std::floating_point Real>
std::vector<Real> default_lambdas() {
  std::vector<Real> out;
  for (int i = 1; i <= 9; ++i) out.push_back(Real(i) / 10);
  return out;
}

/// For each lambda, checks that the grid minimum of the scalarized
/// objective is matched (within 1e-12) by the theorem's vertex.
template <std::floating_point Real>
BasicScalarizationReport<Real> verify_scalarization_minimum(const BasicScenario<Real>& scn,
                                                            const BasicSimplexGrid<Real>& grid,
                                                            const std::vector<Real>& lambdas) {
  BasicScalarizationReport<Real> rep;
  rep.theorem_vertex = optimal_allocation(threat_rates(scn));
  for (Real lambda : lambdas) {
    if (!(lambda >= 0 && lambda <= 1)) throw std::invalid_argument("lambda must lie in [0, 1]");
    BasicScalarizationCheck<Real> c;
    c.lambda = lambda;
    c.grid_min = std::numeric_limits<Real>::infinity();
    for (const auto& p : grid.points()) {
      const Real v = scalarized_objective(scn, p, lambda);
      if (v < c.grid_min) {
        c.grid_min = v;
        c.grid_argmin = p;
      }
    }
    c.theorem_value = scalarized_objective(scn, rep.theorem_vertex, lambda);
    c.ok = c.theorem_value <= c.grid_min + Real(1e-12);
    rep.checks.push_back(c);
  }
  return rep;
}

template <std::floating_point Real>
struct BasicDominanceReport {
  BasicAllocation<Real> theorem_vertex;
  Real horizon{};  ///< shortest first-stage length over the grid
  std::vector<Real> sample_times;
  Real worst_margin{};  ///< min over grid and samples of B_theorem - B_other
  BasicAllocation<Real> worst_competitor;
  Real tolerance{};

  bool passed() const noexcept { return worst_margin >= -tolerance; }
};

namespace detail {

// B at each requested time under a fixed allocation; the final step before
// each sample is shortened to land on it exactly.
template <std::floating_point Real>
std::vector<Real> b_at_times(const BasicScenario<Real>& scn, const BasicAllocation<Real>& alloc,
                             const std::vector<Real>& times, Real step) {
  std::vector<Real> out;
  out.reserve(times.size());
  auto st = BasicBattleState<Real>::initial(scn);
  pin_eliminated(st);
  for (Real target : times) {
    while (target - st.t > 0) {
      const Real h = std::min(step, target - st.t);
      st = step_rk4(scn, alloc, st, h);
      if (target - st.t < step * Real(1e-9)) st.t = target;
    }
    out.push_back(st.b);
  }
  return out;
}

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& fn) {
  std::vector<T> out(n);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
    }));
  }
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace detail

/// Simulates every grid allocation without switching over the common
/// horizon [0, t*], t* being the earliest first elimination across the grid,
/// and measures how far B under the theorem's vertex stays above each.
template <std::floating_point Real>
BasicDominanceReport<Real> verify_dominance(const BasicScenario<Real>& scn, const BasicSimplexGrid<Real>& grid,
                                            const BasicIntegratorConfig<Real>& cfg,
                                            std::size_t sample_count = 50, Real tolerance = Real(1e-6)) {
  scn.validate();
  cfg.validate();
  if (sample_count < 2) throw std::invalid_argument("need at least two dominance samples");
  const auto& pts = grid.points();
  const auto start = BasicBattleState<Real>::initial(scn);

  BasicDominanceReport<Real> rep;
  rep.tolerance = tolerance;
  rep.theorem_vertex = optimal_allocation(threat_rates(scn));

  const auto first_event = detail::parallel_map<Real>(pts.size(), [&](std::size_t i) {
    auto res = run_stage(scn, pts[i], start, cfg);
    return res.event ? res.event->time : cfg.max_time;
  });
  rep.horizon = *std::min_element(first_event.begin(), first_event.end());

  for (std::size_t i = 0; i < sample_count; ++i)
    rep.sample_times.push_back(rep.horizon * Real(i) / Real(sample_count - 1));

  const auto reference = detail::b_at_times(scn, rep.theorem_vertex, rep.sample_times, cfg.step);
  const auto margins = detail::parallel_map<Real>(pts.size(), [&](std::size_t i) {
    const auto bs = detail::b_at_times(scn, pts[i], rep.sample_times, cfg.step);
    Real m = std::numeric_limits<Real>::infinity();
    for (std::size_t k = 0; k < bs.size(); ++k) m = std::min(m, reference[k] - bs[k]);
    return m;
  });

  // First strict minimum in grid order, so the report is independent of
  // scheduling.
  std::size_t worst = 0;
  for (std::size_t i = 1; i < margins.size(); ++i)
    if (margins[i] < margins[worst]) worst = i;
  rep.worst_margin = margins[worst];
  rep.worst_competitor = pts[worst];
  return rep;
}

using SimplexGrid = BasicSimplexGrid<double>;
using ScalarizationCheck = BasicScalarizationCheck<double>;
using ScalarizationReport = BasicScalarizationReport<double>;
using DominanceReport = BasicDominanceReport<double>;

}  // namespace ncw
