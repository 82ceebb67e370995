#pragma once

// Domain types and pointwise model functions for the mixed network-centric
// Lanchester battle B vs {(R, N), A}.
//
//   dB/dt = -f(N) R - gamma_a A,      f(N) = alpha_d + (alpha_c - alpha_d) N / n0
//   dR/dt = -pi1 beta_r B
//   dN/dt = -pi2 beta_n B
//   dA/dt = -pi3 beta_a B
//
// The accumulated fire integral X(t) = int_0^t B ds is carried alongside the
// troop counts so that R, N and A stay linear in X within a stage.

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ncw {

/// Troop counts at or below this are treated as eliminated.
template <std::floating_point Real>
inline constexpr Real kill_epsilon = Real(1e-9);

/// Tolerance on |pi1 + pi2 + pi3 - 1| accepted by Allocation::make.
template <std::floating_point Real>
inline constexpr Real allocation_sum_tolerance = Real(1e-12);

enum class Entity : std::uint8_t { B, R, N, A };

inline constexpr std::array<Entity, 4> all_entities{Entity::B, Entity::R, Entity::N, Entity::A};

constexpr std::string_view to_string(Entity e) noexcept {
  switch (e) {
    case Entity::B: return "B";
    case Entity::R: return "R";
    case Entity::N: return "N";
    case Entity::A: return "A";
  }
  return "?";
}

/// Attrition parameters and initial troop counts for one battle.
template <std::floating_point Real>
struct BasicScenario {
  Real alpha_c{};  ///< R against B, network fully connected
  Real alpha_d{};  ///< R against B, network destroyed
  Real gamma_a{};  ///< A against B
  Real beta_r{};   ///< B against R
  Real beta_n{};   ///< B against N
  Real beta_a{};   ///< B against A
  Real b0{}, r0{}, n0{}, a0{};

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const {
    auto check = [](Real v, const char* name, bool strictly_positive) {
      if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
      if (strictly_positive ? !(v > 0) : !(v >= 0))
        throw std::invalid_argument(std::string(name) + (strictly_positive ? " must be > 0" : " must be >= 0"));
    };
    check(alpha_c, "alpha_c", false);
    check(alpha_d, "alpha_d", false);
    check(gamma_a, "gamma_a", false);
    check(beta_r, "beta_r", false);
    check(beta_n, "beta_n", false);
    check(beta_a, "beta_a", false);
    check(b0, "b0", true);
    check(r0, "r0", false);
    check(n0, "n0", true);
    check(a0, "a0", false);
    if (alpha_d > alpha_c) throw std::invalid_argument("alpha_d must not exceed alpha_c");
  }

  bool operator==(const BasicScenario&) const = default;
};

/// A point on the probability 2-simplex: fire fractions against R, N, A.
template <std::floating_point Real>
class BasicAllocation {
 public:
  /// Defaults to full fire on R.
  constexpr BasicAllocation() = default;

  /// Accepts components in [0, 1] whose sum is within
  /// allocation_sum_tolerance of 1; the stored value is renormalized.
  static BasicAllocation make(Real pi1, Real pi2, Real pi3) {
    for (Real p : {pi1, pi2, pi3}) {
      if (!std::isfinite(p) || p < 0 || p > 1)
        throw std::invalid_argument("allocation components must lie in [0, 1]");
    }
    const Real sum = pi1 + pi2 + pi3;
    if (std::abs(sum - 1) > allocation_sum_tolerance<Real>)
      throw std::invalid_argument("allocation components must sum to 1");
    BasicAllocation out;
    out.pi_ = sum == 1 ? std::array<Real, 3>{pi1, pi2, pi3} : std::array<Real, 3>{pi1 / sum, pi2 / sum, pi3 / sum};
    return out;
  }

  /// All fire on one of R, N, A.
  static constexpr BasicAllocation vertex(Entity target) {
    BasicAllocation out;
    switch (target) {
      case Entity::R: out.pi_ = {1, 0, 0}; break;
      case Entity::N: out.pi_ = {0, 1, 0}; break;
      case Entity::A: out.pi_ = {0, 0, 1}; break;
      case Entity::B: throw std::invalid_argument("B cannot be a fire target");
    }
    return out;
  }

  constexpr Real pi1() const noexcept { return pi_[0]; }
  constexpr Real pi2() const noexcept { return pi_[1]; }
  constexpr Real pi3() const noexcept { return pi_[2]; }
  constexpr const std::array<Real, 3>& components() const noexcept { return pi_; }

  constexpr bool is_vertex() const noexcept {
    int ones = 0;
    for (Real p : pi_) {
      if (p == 1) ++ones;
      else if (p != 0) return false;
    }
    return ones == 1;
  }

  bool operator==(const BasicAllocation&) const = default;

 private:
  std::array<Real, 3> pi_{1, 0, 0};
};

template <std::floating_point Real>
struct BasicBattleState {
  Real t{};
  Real b{}, r{}, n{}, a{};
  Real x{};  ///< fire integral int_0^t B ds

  constexpr Real count(Entity e) const noexcept {
    switch (e) {
      case Entity::B: return b;
      case Entity::R: return r;
      case Entity::N: return n;
      case Entity::A: return a;
    }
    return Real(0);
  }

  constexpr Real& count(Entity e) noexcept {
    switch (e) {
      case Entity::B: return b;
      case Entity::R: return r;
      case Entity::N: return n;
      case Entity::A: return a;
    }
    return b;
  }

  constexpr bool alive(Entity e) const noexcept { return count(e) > kill_epsilon<Real>; }

  static constexpr BasicBattleState initial(const BasicScenario<Real>& scn) noexcept {
    return {Real(0), scn.b0, scn.r0, scn.n0, scn.a0, Real(0)};
  }

  bool operator==(const BasicBattleState&) const = default;
};

template <std::floating_point Real>
struct BasicStateDerivative {
  Real db{}, dr{}, dn{}, da{}, dx{};
};

template <std::floating_point Real>
struct BasicThreatRates {
  Real b1{}, b2{}, b3{};

  constexpr Real of(Entity e) const noexcept {
    switch (e) {
      case Entity::R: return b1;
      case Entity::N: return b2;
      case Entity::A: return b3;
      case Entity::B: break;
    }
    return Real(0);
  }
};

/// Which entities have their derivatives live. Fixed at the start of an
/// integrator step so that all Runge-Kutta stages see the same vector field.
struct Liveness {
  bool b = true, r = true, n = true, a = true;

  template <std::floating_point Real>
  static constexpr Liveness of(const BasicBattleState<Real>& st) noexcept {
    return {st.alive(Entity::B), st.alive(Entity::R), st.alive(Entity::N), st.alive(Entity::A)};
  }

  constexpr bool operator[](Entity e) const noexcept {
    switch (e) {
      case Entity::B: return b;
      case Entity::R: return r;
      case Entity::N: return n;
      case Entity::A: return a;
    }
    return false;
  }
};

/// R's attrition rate against B as a function of the surviving network N.
/// Throws std::domain_error outside [0, n0].
template <std::floating_point Real>
Real attrition_fn(const BasicScenario<Real>& scn, Real n) {
  if (!(n >= 0) || n > scn.n0) throw std::domain_error("attrition_fn: network count outside [0, n0]");
  return scn.alpha_d + (scn.alpha_c - scn.alpha_d) * n / scn.n0;
}

namespace detail {

// Vector field with a fixed liveness mask. No domain checks: Runge-Kutta
// stages may probe slightly negative counts inside a crossing step, and the
// field is extended polynomially there.
template <std::floating_point Real>
constexpr BasicStateDerivative<Real> rhs_masked(const BasicScenario<Real>& scn,
                                                const BasicAllocation<Real>& alloc,
                                                const BasicBattleState<Real>& st,
                                                Liveness live) noexcept {
  const Real n = live.n ? st.n : Real(0);
  const Real r = live.r ? st.r : Real(0);
  const Real a = live.a ? st.a : Real(0);
  const Real b = live.b ? st.b : Real(0);
  const Real f = scn.alpha_d + (scn.alpha_c - scn.alpha_d) * n / scn.n0;

  BasicStateDerivative<Real> d;
  d.db = live.b ? -f * r - scn.gamma_a * a : Real(0);
  d.dr = live.r ? -alloc.pi1() * scn.beta_r * b : Real(0);
  d.dn = live.n ? -alloc.pi2() * scn.beta_n * b : Real(0);
  d.da = live.a ? -alloc.pi3() * scn.beta_a * b : Real(0);
  d.dx = b;
  return d;
}

}  // namespace detail

/// Right-hand side of the battle ODE plus dX/dt = B. Eliminated entities
/// (count <= kill_epsilon) contribute 0 and have their derivative pinned to 0.
template <std::floating_point Real>
BasicStateDerivative<Real> rhs(const BasicScenario<Real>& scn, const BasicAllocation<Real>& alloc,
                               const BasicBattleState<Real>& st) {
  if (st.n > scn.n0) throw std::domain_error("rhs: network count exceeds n0");
  return detail::rhs_masked(scn, alloc, st, Liveness::of(st));
}

/// Threat each of R, N, A poses to B at the start of the battle.
template <std::floating_point Real>
constexpr BasicThreatRates<Real> threat_rates(const BasicScenario<Real>& scn) noexcept {
  return {scn.alpha_c * scn.beta_r,
          scn.beta_n * (scn.alpha_c - scn.alpha_d) * scn.r0 / scn.n0,
          scn.gamma_a * scn.beta_a};
}

/// Concentrate all fire on the greatest threat. Ties go to R, then N, then A.
template <std::floating_point Real>
constexpr BasicAllocation<Real> optimal_allocation(const BasicThreatRates<Real>& rates) {
  if (rates.b1 >= rates.b2 && rates.b1 >= rates.b3) return BasicAllocation<Real>::vertex(Entity::R);
  if (rates.b2 >= rates.b3) return BasicAllocation<Real>::vertex(Entity::N);
  return BasicAllocation<Real>::vertex(Entity::A);
}

using Scenario = BasicScenario<double>;
using Allocation = BasicAllocation<double>;
using BattleState = BasicBattleState<double>;
using StateDerivative = BasicStateDerivative<double>;
using ThreatRates = BasicThreatRates<double>;

}  // namespace ncw
