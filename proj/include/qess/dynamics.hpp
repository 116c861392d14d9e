#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qess/closed_form.hpp"

namespace qess {

inline constexpr double kDefaultDt = 0.01;
inline constexpr double kDefaultTMax = 1000.0;
inline constexpr double kDefaultEpsilon = 0.01;
// Largest population share a single mutant group is probed at.
inline constexpr double kBarrierCap = 0.5;
inline constexpr double kBarrierResolution = 1e-6;

// A monomorphic incumbent population invaded by a single mutant strategy.
struct InvasionScenario {
  double incumbent = 0.0;
  double mutant = 0.0;
  double epsilon = kDefaultEpsilon;  // initial mutant population share
};

enum class InvasionOutcome { Repelled, Invaded, Neutral };

struct ReplicatorRun {
  std::vector<double> times;
  std::vector<double> mutant_share;
  InvasionOutcome outcome = InvasionOutcome::Neutral;
};

struct PopulationPayoffs {
  double incumbent = 0.0;
  double mutant = 0.0;
};

enum class StabilityVerdict { Stable, Unstable, Neutral };

struct EmpiricalStability {
  StabilityVerdict verdict = StabilityVerdict::Neutral;
  std::vector<double> witnesses;  // mutants that invade
};

namespace detail {

// Payoff of a strategy against a population whose mean strategy is m.
// Random matching against the population equals playing the mean because
// payoffs are multilinear in the opponents' strategies.
inline double against_population(const SymmetricGame2& g, double b2, double s,
                                 double m) {
  return payoff2(g, b2, s, m);
}

inline double against_population(const SymmetricGame3& g, double b2, double s,
                                 double m) {
  return payoff3(g, b2, s, m, m);
}

inline void require_scenario(const InvasionScenario& s, const char* where) {
  require_unit(s.incumbent, where);
  require_unit(s.mutant, where);
  if (std::abs(s.incumbent - s.mutant) <= 1e-9) {
    throw std::invalid_argument(std::string(where) +
                                ": incumbent and mutant must differ");
  }
  if (!(s.epsilon > 0.0 && s.epsilon <= 0.5)) {
    throw std::domain_error(std::string(where) +
                            ": epsilon must lie in (0, 0.5]");
  }
}

// Incumbent payoff advantage at the given mutant share.
template <class Game>
double advantage(const Game& g, double b2, double incumbent, double mutant,
                 double share) {
  const double m = clamp01((1.0 - share) * incumbent + share * mutant);
  return against_population(g, b2, incumbent, m) -
         against_population(g, b2, mutant, m);
}

// Sign of the incumbent's advantage as the mutant share tends to zero,
// probed at geometrically decreasing shares within (0, epsilon]. The
// smallest share with a resolvable advantage decides; returns the decisive
// share along with the sign, or sign 0 when every probe is level.
template <class Game>
std::pair<int, double> local_invasion_sign(const Game& g, double b2,
                                           double incumbent, double mutant,
                                           double epsilon) {
  constexpr double kDecisive = 1e-12;
  std::vector<double> shares;
  for (double x = epsilon; x > epsilon * 1e-5; x /= 4.0) shares.push_back(x);
  for (auto it = shares.rbegin(); it != shares.rend(); ++it) {
    const double d = advantage(g, b2, incumbent, mutant, *it);
    if (std::abs(d) > kDecisive) return {d > 0.0 ? 1 : -1, *it};
  }
  return {0, shares.back()};
}

}  // namespace detail

// Payoffs to the incumbent and the mutant when the mutant holds the given
// population share, under random matching within the mixed population.
template <class Game>
PopulationPayoffs population_payoffs(const Game& g, double b2,
                                     const InvasionScenario& s, double share) {
  b2 = detail::require_unit(b2, "population_payoffs: b2");
  detail::require_scenario(s, "population_payoffs");
  share = detail::require_unit(share, "population_payoffs: share");
  const double m = (1.0 - share) * s.incumbent + share * s.mutant;
  return PopulationPayoffs{detail::against_population(g, b2, s.incumbent, m),
                           detail::against_population(g, b2, s.mutant, m)};
}

// Largest share epsilon* in (0, 0.5] below which the incumbent strictly
// out-earns the mutant, located by scan plus sign bisection. Returns nothing
// when the incumbent is not protected at arbitrarily small shares.
template <class Game>
std::optional<double> invasion_barrier(const Game& g, double b2,
                                       double incumbent, double mutant) {
  b2 = detail::require_unit(b2, "invasion_barrier: b2");
  incumbent = detail::require_unit(incumbent, "invasion_barrier: incumbent");
  mutant = detail::require_unit(mutant, "invasion_barrier: mutant");
  if (std::abs(incumbent - mutant) <= 1e-9) {
    throw std::invalid_argument(
        "invasion_barrier: incumbent and mutant must differ");
  }
  const auto [sign, probe] =
      detail::local_invasion_sign(g, b2, incumbent, mutant, kDefaultEpsilon);
  if (sign <= 0) return std::nullopt;

  // scan shares from the smallest protected probe up to the cap; the ladder
  // points cover the region below the uniform grid's first step
  const int kScan = 1000;
  std::vector<double> shares;
  for (double x = probe * 4.0; x < kBarrierCap / kScan; x *= 4.0) {
    shares.push_back(x);
  }
  for (int i = 1; i <= kScan; ++i) shares.push_back(kBarrierCap * i / kScan);

  double lo = probe;  // known protected share
  for (double x : shares) {
    if (x <= lo) continue;
    if (detail::advantage(g, b2, incumbent, mutant, x) > 0.0) {
      lo = x;
      continue;
    }
    double hi = x;
    while (hi - lo > kBarrierResolution) {
      const double mid = 0.5 * (lo + hi);
      if (detail::advantage(g, b2, incumbent, mutant, mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
  return kBarrierCap;
}

// Two-type replicator dynamic for the mutant share x,
//   dx/dt = x (1-x) (f_mutant - f_incumbent),
// integrated with fixed-step classical fourth-order Runge-Kutta. The
// boundary shares 0 and 1 are exact rest points. Outcome rules: Neutral if
// the share never moves beyond 1e-9; Repelled on reaching epsilon*1e-3 or on
// any net decline; Invaded on reaching 1-1e-3 or on any net growth.
template <class Game>
ReplicatorRun replicator_trajectory(const Game& g, double b2,
                                    const InvasionScenario& s,
                                    double dt = kDefaultDt,
                                    double t_max = kDefaultTMax) {
  b2 = detail::require_unit(b2, "replicator_trajectory: b2");
  detail::require_scenario(s, "replicator_trajectory");
  if (!(dt > 0.0)) {
    throw std::invalid_argument("replicator_trajectory: dt must be positive");
  }
  if (!(t_max >= dt)) {
    throw std::invalid_argument(
        "replicator_trajectory: t_max must be at least dt");
  }

  auto deriv = [&](double x) {
    x = detail::clamp01(x);
    return -x * (1.0 - x) * detail::advantage(g, b2, s.incumbent, s.mutant, x);
  };

  const double repel_at = s.epsilon * 1e-3;
  const double invade_at = 1.0 - 1e-3;

  ReplicatorRun run;
  double x = s.epsilon;
  double t = 0.0;
  double max_move = 0.0;
  run.times.push_back(t);
  run.mutant_share.push_back(x);
  const long steps = static_cast<long>(std::ceil(t_max / dt));
  for (long i = 0; i < steps; ++i) {
    const double k1 = deriv(x);
    const double k2 = deriv(x + 0.5 * dt * k1);
    const double k3 = deriv(x + 0.5 * dt * k2);
    const double k4 = deriv(x + dt * k3);
    x = detail::clamp01(x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    t += dt;
    run.times.push_back(t);
    run.mutant_share.push_back(x);
    max_move = std::max(max_move, std::abs(x - s.epsilon));
    if (x <= repel_at || x >= invade_at) break;
  }

  if (max_move <= 1e-9) {
    run.outcome = InvasionOutcome::Neutral;
  } else if (x <= repel_at || x < s.epsilon) {
    run.outcome = InvasionOutcome::Repelled;
  } else if (x >= invade_at || x > s.epsilon) {
    run.outcome = InvasionOutcome::Invaded;
  } else {
    run.outcome = InvasionOutcome::Neutral;
  }
  return run;
}

// Sweeps a mutant grid and reports whether the incumbent repels every
// mutant at small shares (probed within (0, epsilon]). Exactly level
// advantages are reported as Neutral, never coerced to stable/unstable.
template <class Game>
EmpiricalStability empirical_stability(const Game& g, double b2,
                                       double incumbent,
                                       const std::vector<double>& mutant_grid,
                                       double epsilon = kDefaultEpsilon) {
  b2 = detail::require_unit(b2, "empirical_stability: b2");
  incumbent = detail::require_unit(incumbent, "empirical_stability: incumbent");
  if (mutant_grid.empty()) {
    throw std::invalid_argument("empirical_stability: empty mutant grid");
  }
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw std::domain_error("empirical_stability: epsilon must lie in (0, 0.5]");
  }
  EmpiricalStability result;
  bool all_repelled = true;
  for (double q : mutant_grid) {
    if (std::abs(q - incumbent) <= 1e-9) continue;
    const double mutant = detail::require_unit(q, "empirical_stability: mutant");
    const auto [sign, share] =
        detail::local_invasion_sign(g, b2, incumbent, mutant, epsilon);
    (void)share;
    if (sign < 0) {
      result.witnesses.push_back(mutant);
      all_repelled = false;
    } else if (sign == 0) {
      all_repelled = false;
    }
  }
  if (!result.witnesses.empty()) {
    result.verdict = StabilityVerdict::Unstable;
  } else if (all_repelled) {
    result.verdict = StabilityVerdict::Stable;
  } else {
    result.verdict = StabilityVerdict::Neutral;
  }
  return result;
}

}  // namespace qess
