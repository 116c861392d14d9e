// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qess/dynamics.hpp"
#include "qess/equilibrium.hpp"
#include "qess/quantum_engine.hpp"
#include "support/reference.hpp"

using namespace qess;

namespace {

struct Criterion {
  int id;
  const char* title;
  std::function<bool(std::string&)> run;
};

bool nearly(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return std::string(buf);
}

std::vector<double> unit_grid(int points) {
  std::vector<double> g;
  g.reserve(points);
  for (int i = 0; i < points; ++i) {
    g.push_back(static_cast<double>(i) / (points - 1));
  }
  return g;
}

std::vector<double> mutant_grid(double incumbent) {
  // 21-point grid, keeping a small berth so every margin is resolvable
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) {
    const double q = i / 20.0;
    if (std::abs(q - incumbent) >= 0.02) g.push_back(q);
  }
  return g;
}

const EquilibriumCandidate* find_kind(const NeSearchResult& res,
                                      CandidateKind kind) {
  for (const EquilibriumCandidate& c : res.candidates) {
    if (c.kind == kind) return &c;
  }
  return nullptr;
}

// 1. closed forms against the density-matrix oracle, 1000 samples per arity
bool criterion_oracle_equivalence(std::string& detail) {
  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(90001);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const SymmetricGame2 g = ref::random_game2(rng);
    const double b2 = ref::unit(rng), p = ref::unit(rng), q = ref::unit(rng);
    const MoveProfile mp{{p, q}};
    worst = std::max(worst, std::abs(payoff2(g, b2, p, q) -
                                     oracle_payoff(g, {b2}, mp, Player::A)));
    worst = std::max(worst, std::abs(payoff2(g, b2, q, p) -
                                     oracle_payoff(g, {b2}, mp, Player::B)));
  }
  for (int i = 0; i < 1000; ++i) {
    const SymmetricGame3 g = ref::random_game3(rng);
    const double b2 = ref::unit(rng);
    const double p = ref::unit(rng), q = ref::unit(rng), r = ref::unit(rng);
    const MoveProfile mp{{p, q, r}};
    worst = std::max(worst, std::abs(payoff3(g, b2, p, q, r) -
                                     oracle_payoff(g, {b2}, mp, Player::A)));
    worst = std::max(worst, std::abs(payoff3(g, b2, q, p, r) -
                                     oracle_payoff(g, {b2}, mp, Player::B)));
    worst = std::max(worst, std::abs(payoff3(g, b2, r, q, p) -
                                     oracle_payoff(g, {b2}, mp, Player::C)));
  }
  detail = "max deviation " + sci(worst);
  return worst <= kTol;
}

// 2. unentangled play equals the direct classical expectation
bool criterion_classical_reduction(std::string& detail) {
  constexpr double kTol = 1e-12;
  std::mt19937_64 rng(90002);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const SymmetricGame2 g2 = ref::random_game2(rng);
    const double p = ref::unit(rng), q = ref::unit(rng), r = ref::unit(rng);
    for (Player pl : {Player::A, Player::B}) {
      worst = std::max(
          worst, std::abs(oracle_payoff(g2, {0.0}, {{p, q}}, pl) -
                          ref::classical_payoff2(g2, pl, p, q)));
    }
    const SymmetricGame3 g3 = ref::random_game3(rng);
    const PayoffTable3 t = expand_symmetric3(g3);
    for (Player pl : {Player::A, Player::B, Player::C}) {
      worst = std::max(
          worst, std::abs(oracle_payoff(g3, {0.0}, {{p, q, r}}, pl) -
                          ref::classical_payoff3(t, pl, p, q, r)));
    }
    worst = std::max(worst, std::abs(payoff2(g2, 0.0, p, q) -
                                     ref::classical_payoff2(g2, Player::A, p, q)));
    worst = std::max(worst,
                     std::abs(payoff3(g3, 0.0, p, q, r) -
                              ref::classical_payoff3(t, Player::A, p, q, r)));
  }
  detail = "max deviation " + sci(worst);
  return worst <= kTol;
}

// 3. two-player flip class: pures stay NE, stability flips at the corners
bool criterion_flip_class2(std::string& detail) {
  const SymmetricGame2 g = ref::game2_flip_class();
  for (double b2 : unit_grid(101)) {
    const NeSearchResult res = find_symmetric_ne(g, b2);
    const EquilibriumCandidate* p0 = find_kind(res, CandidateKind::Pure0);
    const EquilibriumCandidate* p1 = find_kind(res, CandidateKind::Pure1);
    if (p0 == nullptr || !p0->is_ne || p1 == nullptr || !p1->is_ne) {
      detail = "pure strategy missing from the NE set at b2 = " +
               std::to_string(b2);
      return false;
    }
    const EssState at1 = classify_ess2(g, b2, 1.0).is_ess;
    const EssState at0 = classify_ess2(g, b2, 0.0).is_ess;
    const bool ok1 = b2 <= 1e-9 ? at1 != EssState::Yes : at1 == EssState::Yes;
    const bool ok0 =
        b2 >= 1.0 - 1e-9 ? at0 != EssState::Yes : at0 == EssState::Yes;
    if (!ok1 || !ok0) {
      detail = "wrong stability verdict at b2 = " + std::to_string(b2);
      return false;
    }
  }
  detail = "101 grid points";
  return true;
}

// 4. interior mixed verdict is the sign of the sum coefficient, at every b2
bool criterion_mixed_invariance2(std::string& detail) {
  std::mt19937_64 rng(90004);
  int positive = 0, negative = 0, verdicts = 0;
  while (positive < 200 || negative < 200) {
    const SymmetricGame2 g = ref::random_game2(rng);
    const double ratio = margin_ratio2(g);
    if (std::abs(ratio) <= 1e-6) continue;
    if (ratio > 0.0 && positive >= 200) continue;
    if (ratio < 0.0 && negative >= 200) continue;
    (ratio > 0.0 ? positive : negative) += 1;
    for (double b2 : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const auto root = mixed_ne2(g, b2);
      if (!root || *root <= kNeTol || *root >= 1.0 - kNeTol) continue;
      const EssState verdict = classify_ess2(g, b2, *root).is_ess;
      const EssState expected = ratio > 0.0 ? EssState::Yes : EssState::No;
      if (verdict != expected) {
        detail = "verdict disagrees with the sum coefficient sign";
        return false;
      }
      ++verdicts;
    }
  }
  detail = std::to_string(verdicts) + " interior verdicts over 400 games";
  return true;
}

// 5 & 10. sqrt margin law for every mixed root; at most one stable root;
// a vanishing discriminant never yields a stable root
bool criterion_sqrt_law_and_uniqueness(std::string& detail) {
  constexpr double kTol = 1e-9;
  std::mt19937_64 rng(90005);
  std::vector<std::pair<SymmetricGame3, double>> cases;
  for (int i = 0; i < 200; ++i) {
    cases.emplace_back(ref::random_game3(rng), ref::unit(rng));
  }
  for (double b2 : {0.0, 0.2, 0.5, 0.7, 1.0}) {
    cases.emplace_back(ref::game3_twin_roots(), b2);
    cases.emplace_back(ref::game3_half_root(), b2);
    cases.emplace_back(ref::game3_pure_flip(), b2);
    cases.emplace_back(ref::game3_double_root(), b2);
  }
  int roots_checked = 0;
  for (const auto& [g, b2] : cases) {
    const double delta = discriminant3(g, b2);
    const double root_term = std::sqrt(std::max(delta, 0.0));
    const MixedRoots3 roots = mixed_ne3(g, b2);
    int stable = 0;
    for (double root : roots.roots) {
      for (double q : unit_grid(101)) {
        const double margin = ess_margin3(g, b2, root, q);
        if (std::abs(std::abs(margin) -
                     (root - q) * (root - q) * root_term) > kTol) {
          detail = "margin law violated";
          return false;
        }
      }
      const EssState verdict = classify_ess3(g, b2, root).is_ess;
      if (verdict == EssState::Yes) ++stable;
      if (delta <= 1e-12 && verdict == EssState::Yes) {
        detail = "stable root despite a vanishing discriminant";
        return false;
      }
      ++roots_checked;
    }
    if (stable > 1) {
      detail = "two stable mixed roots at one (game, b2)";
      return false;
    }
  }
  detail = std::to_string(roots_checked) + " roots checked";
  return true;
}

// 6. twin-root class: b2-independent roots, sqrt(3)|1-2 b2| margin, loss of
// stability exactly at b2 = 1/2
bool criterion_twin_roots(std::string& detail) {
  const SymmetricGame3 g = ref::game3_twin_roots();
  const double lo = (3.0 - std::sqrt(3.0)) / 6.0;
  const double hi = (3.0 + std::sqrt(3.0)) / 6.0;
  for (double b2 : unit_grid(101)) {
    const MixedRoots3 roots = mixed_ne3(g, b2);
    if (roots.roots.size() != 2 || !nearly(roots.roots[0], lo, 1e-9) ||
        !nearly(roots.roots[1], hi, 1e-9)) {
      detail = "roots moved at b2 = " + std::to_string(b2);
      return false;
    }
    const NeSearchResult res = find_symmetric_ne(g, b2);
    const double want = std::sqrt(3.0) * std::abs(1.0 - 2.0 * b2);
    int stable = 0, ties = 0;
    for (const EquilibriumCandidate& c : res.candidates) {
      if (c.kind != CandidateKind::Mixed) continue;
      if (!c.is_ne) {
        detail = "mixed root not verified as NE";
        return false;
      }
      if (!nearly(std::abs(c.margin_summary), want, 1e-9)) {
        detail = "margin ratio off at b2 = " + std::to_string(b2);
        return false;
      }
      if (c.is_ess == EssState::Yes) ++stable;
      if (c.is_ess == EssState::DegenerateTie) ++ties;
    }
    const bool at_half = nearly(b2, 0.5, 1e-12);
    if (at_half ? (stable != 0 || ties != 2) : stable != 1) {
      detail = "stability pattern wrong at b2 = " + std::to_string(b2);
      return false;
    }
  }
  detail = "roots (3 +/- sqrt 3)/6 across 101 grid points";
  return true;
}

// 7. sigma = 0, omega < 0, eta <= 0 class: the all-flip pure strategy stays a
// NE but loses stability exactly at b2 = 1
bool criterion_pure_flip3(std::string& detail) {
  const SymmetricGame3 g = ref::game3_pure_flip();
  for (double b2 : unit_grid(101)) {
    const NeSearchResult res = find_symmetric_ne(g, b2);
    const EquilibriumCandidate* p0 = find_kind(res, CandidateKind::Pure0);
    if (p0 == nullptr || !p0->is_ne) {
      detail = "pure-0 missing at b2 = " + std::to_string(b2);
      return false;
    }
    const EssVerdict v = classify_ess3(g, b2, 0.0);
    if (b2 < 1.0 - 1e-9) {
      if (v.is_ess != EssState::Yes) {
        detail = "pure-0 should be stable at b2 = " + std::to_string(b2);
        return false;
      }
    } else {
      if (v.is_ess != EssState::No || v.condition2 != Condition2::Fail) {
        detail = "pure-0 should fail condition 2 at b2 = 1";
        return false;
      }
    }
  }
  // the failing margin at b2 = 1 is -eta q^2 (a^2 - b^2) = -q^2 here
  for (double q : {0.2, 0.5, 0.9}) {
    if (!nearly(ess_margin3(g, 1.0, 0.0, q), -q * q, 1e-12)) {
      detail = "condition-2 margin is not -q^2 at b2 = 1";
      return false;
    }
  }
  detail = "stable for b2 < 1, condition-2 failure at b2 = 1";
  return true;
}

// 8. pure-1 thresholds match the bracket value at p = 1
bool criterion_pure_thresholds3(std::string& detail) {
  std::mt19937_64 rng(90008);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const SymmetricGame3 g = ref::random_game3(rng);
    const Coefficients3 c = coefficients3(g);
    for (int k = 0; k <= 10; ++k) {
      const double b2 = k / 10.0;
      const double q1 = ne_quadratic3(g, b2)(1.0);
      const double direct = c.sigma * (1.0 - b2) - c.omega * b2;
      if (!nearly(q1, direct, 1e-12)) {
        detail = "bracket at p = 1 disagrees with sigma a^2 - omega b^2";
        return false;
      }
      // skip samples sitting on the tolerance knife edge
      if (std::abs(std::abs(direct) - 1e-9) < 1e-11) continue;
      const bool strict_expected = direct > 1e-9;
      const bool ne_expected = direct >= -1e-9;
      const EssVerdict v = classify_ess3(g, b2, 1.0);
      if ((v.condition1 == Condition1::Strict) != strict_expected) {
        detail = "strictness threshold mismatch";
        return false;
      }
      const bool listed =
          find_kind(find_symmetric_ne(g, b2), CandidateKind::Pure1) != nullptr;
      if (listed != ne_expected) {
        detail = "NE threshold mismatch";
        return false;
      }
      ++checked;
    }
  }
  detail = std::to_string(checked) + " (game, b2) points";
  return true;
}

// 9. invasion sweeps agree with the analytic verdicts; the balanced-root
// game gives identical outcomes at every entanglement
bool criterion_dynamics_agreement(std::string& detail) {
  std::mt19937_64 rng(90009);
  int compared = 0;
  for (int i = 0; i < 50; ++i) {
    const double b2 = ref::unit(rng);
    const SymmetricGame2 g2 = ref::random_game2(rng);
    for (const EquilibriumCandidate& c : find_symmetric_ne(g2, b2).candidates) {
      if (std::abs(c.margin_summary) <= 1e-6) continue;
      const EmpiricalStability emp =
          empirical_stability(g2, b2, c.p, mutant_grid(c.p));
      if (c.is_ess == EssState::Yes &&
          emp.verdict != StabilityVerdict::Stable) {
        detail = "stable candidate not repelled (2 players)";
        return false;
      }
      if (c.is_ess == EssState::No &&
          emp.verdict != StabilityVerdict::Unstable) {
        detail = "unstable candidate not invaded (2 players)";
        return false;
      }
      ++compared;
    }
    const SymmetricGame3 g3 = ref::random_game3(rng);
    for (const EquilibriumCandidate& c : find_symmetric_ne(g3, b2).candidates) {
      if (std::abs(c.margin_summary) <= 1e-6) continue;
      const EmpiricalStability emp =
          empirical_stability(g3, b2, c.p, mutant_grid(c.p));
      if (c.is_ess == EssState::Yes &&
          emp.verdict != StabilityVerdict::Stable) {
        detail = "stable candidate not repelled (3 players)";
        return false;
      }
      if (c.is_ess == EssState::No &&
          emp.verdict != StabilityVerdict::Unstable) {
        detail = "unstable candidate not invaded (3 players)";
        return false;
      }
      ++compared;
    }
  }

  // balanced-root game: outcome of the p = 1/2 candidate is b2-independent
  const SymmetricGame3 half = ref::game3_half_root();
  std::vector<double> base_witnesses;
  StabilityVerdict base_verdict = StabilityVerdict::Neutral;
  bool have_base = false;
  for (double b2 : {0.0, 0.3, 0.7, 1.0}) {
    const EmpiricalStability emp =
        empirical_stability(half, b2, 0.5, mutant_grid(0.5));
    if (!have_base) {
      base_verdict = emp.verdict;
      base_witnesses = emp.witnesses;
      have_base = true;
      continue;
    }
    if (emp.verdict != base_verdict || emp.witnesses != base_witnesses) {
      detail = "balanced-root outcome moved with b2";
      return false;
    }
  }
  detail = std::to_string(compared) + " candidates compared";
  return true;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "closed forms match the density-matrix oracle (tol 1e-12)",
       criterion_oracle_equivalence},
      {2, "unentangled payoffs equal the classical expectation (tol 1e-12)",
       criterion_classical_reduction},
      {3, "two-player flip class keeps its pures, flips stability at corners",
       criterion_flip_class2},
      {4, "interior mixed verdict is b2-independent and signed by the sum",
       criterion_mixed_invariance2},
      {5, "mixed-root margins obey the square-root law (tol 1e-9)",
       criterion_sqrt_law_and_uniqueness},
      {6, "twin-root class: fixed roots, sqrt(3)|1-2b2| margin, tie at 1/2",
       criterion_twin_roots},
      {7, "pure-flip class: NE everywhere, stability lost only at b2 = 1",
       criterion_pure_flip3},
      {8, "pure-1 NE and strictness thresholds match the bracket",
       criterion_pure_thresholds3},
      {9, "invasion dynamics agree with the analytic classification",
       criterion_dynamics_agreement},
      {10, "at most one stable mixed root; none when the discriminant "
           "vanishes (within criterion 5's sample)",
       criterion_sqrt_law_and_uniqueness},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    const bool ok = c.run(detail);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %2d: %s — %s (%.2f s)\n", ok ? "PASS" : "FAIL",
                c.id, c.title, detail.c_str(), secs);
    if (!ok) ++failures;
  }
  if (failures == 0) {
    std::printf("RESULT: all %zu criteria passed\n", criteria.size());
    return 0;
  }
  std::printf("RESULT: %d criteria failed\n", failures);
  return 1;
}
