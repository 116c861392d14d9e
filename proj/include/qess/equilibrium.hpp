#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qess/closed_form.hpp"

namespace qess {

// Classification tolerance. Differences inside this band count as exact
// ties; the knife-edge entanglement values sit exactly on them.
inline constexpr double kNeTol = 1e-9;
// Sampling grid used to verify equilibria and summarize margins.
inline constexpr int kGridPoints = 101;
// Mutants closer than this to the candidate are excluded from margin ratios.
inline constexpr double kMutantExclusion = 1e-6;

enum class CandidateKind { Pure0, Mixed, Pure1 };
enum class EssState { Yes, No, DegenerateTie };
enum class Condition1 { Strict, Tie, Violated };
enum class Condition2 { Pass, Fail, Vacuous };

// Outcome of the two-condition stability test at a candidate strategy.
// condition1 gauges P(p,p[,p]) against every single-strategy mutant;
// on an exact tie condition2 gauges the post-entry margin. A zero margin
// fails the strict inequality without a definite sign; is_ess records that
// case as DegenerateTie rather than forcing yes/no.
struct EssVerdict {
  Condition1 condition1 = Condition1::Tie;
  Condition2 condition2 = Condition2::Vacuous;
  EssState is_ess = EssState::No;
  std::vector<double> witnesses;  // mutants that defeat the candidate
};

struct EquilibriumCandidate {
  double p = 0.0;
  CandidateKind kind = CandidateKind::Mixed;
  bool is_ne = false;      // verified by sampling payoff differences
  bool ne_strict = false;  // condition 1 strict against every mutant
  EssState is_ess = EssState::No;
  // min over the mutant grid of (condition-2 margin) / (p-q)^2; the
  // q-independent stability strength for this family of games.
  double margin_summary = 0.0;
};

struct NeSearchResult {
  // Ordered pure-0, mixed roots ascending, pure-1.
  std::vector<EquilibriumCandidate> candidates;
  bool continuum = false;  // every p is a symmetric NE at this b2
};

namespace detail {

inline double grid_point(int i) {
  return static_cast<double>(i) / (kGridPoints - 1);
}

// Sign analysis of condition 1. `slope` is the bracket value at p: the
// payoff difference against a mutant q is (p-q) * slope, so boundary
// candidates are judged one-sided and interior ones can only tie or fail.
inline Condition1 classify_condition1(double p, double slope) {
  if (p <= kNeTol) {
    if (slope < -kNeTol) return Condition1::Strict;
    return slope <= kNeTol ? Condition1::Tie : Condition1::Violated;
  }
  if (p >= 1.0 - kNeTol) {
    if (slope > kNeTol) return Condition1::Strict;
    return slope >= -kNeTol ? Condition1::Tie : Condition1::Violated;
  }
  return std::abs(slope) <= kNeTol ? Condition1::Tie : Condition1::Violated;
}

struct MarginScan {
  double min_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> failures;  // mutants with margin < -tol
};

template <class MarginFn>
MarginScan scan_margins(double p, MarginFn&& margin) {
  MarginScan scan;
  for (int i = 0; i < kGridPoints; ++i) {
    const double q = grid_point(i);
    if (std::abs(q - p) < kMutantExclusion) continue;
    const double m = margin(q);
    scan.min_ratio = std::min(scan.min_ratio, m / ((p - q) * (p - q)));
    if (m < -kNeTol) scan.failures.push_back(q);
  }
  return scan;
}

// Shared verdict logic. `analytic_ratio` is the closed-form condition-2
// coefficient; the evaluated margin grid cross-checks it and supplies
// witnesses. `cond1_diff(q)` is P(p,p[,p]) - P(q,p[,p]).
template <class MarginFn, class Cond1DiffFn>
EssVerdict finish_verdict(double p, Condition1 c1, double analytic_ratio,
                          MarginFn&& margin, Cond1DiffFn&& cond1_diff) {
  EssVerdict v;
  v.condition1 = c1;
  if (c1 == Condition1::Strict) {
    v.condition2 = Condition2::Vacuous;
    v.is_ess = EssState::Yes;
    return v;
  }
  if (c1 == Condition1::Violated) {
    v.condition2 = Condition2::Vacuous;
    v.is_ess = EssState::No;
    for (int i = 0; i < kGridPoints; ++i) {
      const double q = grid_point(i);
      if (std::abs(q - p) < kMutantExclusion) continue;
      if (cond1_diff(q) < -kNeTol) v.witnesses.push_back(q);
    }
    return v;
  }
  const MarginScan scan = scan_margins(p, margin);
  if (std::abs(analytic_ratio) <= kNeTol) {
    v.condition2 = Condition2::Fail;
    v.is_ess = EssState::DegenerateTie;
  } else if (analytic_ratio > kNeTol && scan.failures.empty()) {
    v.condition2 = Condition2::Pass;
    v.is_ess = EssState::Yes;
  } else {
    v.condition2 = Condition2::Fail;
    v.is_ess = EssState::No;
    v.witnesses = scan.failures;
  }
  return v;
}

}  // namespace detail

// Stability test for an arbitrary strategy p of a two-player game.
inline EssVerdict classify_ess2(const SymmetricGame2& g, double b2, double p) {
  b2 = detail::require_unit(b2, "classify_ess2: b2");
  p = detail::require_unit(p, "classify_ess2: p");
  const Condition1 c1 = detail::classify_condition1(p, ne_slope2(g, b2, p));
  return detail::finish_verdict(
      p, c1, margin_ratio2(g),
      [&](double q) { return ess_margin2(g, b2, p, q); },
      [&](double q) {
        return payoff2(g, b2, p, p) - payoff2(g, b2, q, p);
      });
}

// Stability test for an arbitrary strategy p of a three-player game,
// with mutants restricted to a single alternative strategy.
inline EssVerdict classify_ess3(const SymmetricGame3& g, double b2, double p) {
  b2 = detail::require_unit(b2, "classify_ess3: b2");
  p = detail::require_unit(p, "classify_ess3: p");
  const NeQuadratic bracket = ne_quadratic3(g, b2);
  const Condition1 c1 = detail::classify_condition1(p, bracket(p));
  return detail::finish_verdict(
      p, c1, margin_ratio3(g, b2, p),
      [&](double q) { return ess_margin3(g, b2, p, q); },
      [&](double q) {
        return payoff3(g, b2, p, p, p) - payoff3(g, b2, q, p, p);
      });
}

// Stability test against the plain classical mixed-strategy payoffs,
// independent of the quantum machinery. Must agree with classify_ess2 at
// b2 = 0.
inline EssVerdict classical_ess2(const SymmetricGame2& g, double p) {
  p = detail::require_unit(p, "classical_ess2: p");
  auto pc = [&g](double x, double y) {
    return x * y * g.alpha + x * (1.0 - y) * g.beta +
           (1.0 - x) * y * g.gamma + (1.0 - x) * (1.0 - y) * g.delta;
  };
  const double slope = pc(1.0, p) - pc(0.0, p);  // payoff affine in own mix
  const Condition1 c1 = detail::classify_condition1(p, slope);
  return detail::finish_verdict(
      p, c1, margin_ratio2(g),
      [&](double q) { return pc(p, q) - pc(q, q); },
      [&](double q) { return pc(p, p) - pc(q, p); });
}

namespace detail {

template <class Cond1DiffFn, class MarginFn>
EquilibriumCandidate build_candidate(double p, CandidateKind kind,
                                     const EssVerdict& verdict,
                                     Cond1DiffFn&& cond1_diff,
                                     MarginFn&& margin) {
  EquilibriumCandidate c;
  c.p = p;
  c.kind = kind;
  c.ne_strict = verdict.condition1 == Condition1::Strict;
  c.is_ess = verdict.is_ess;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGridPoints; ++i) {
    worst = std::min(worst, cond1_diff(grid_point(i)));
  }
  c.is_ne = worst >= -kNeTol;
  c.margin_summary = scan_margins(p, margin).min_ratio;
  return c;
}

}  // namespace detail

// All symmetric NE of a two-player game at the given entanglement: boundary
// strategies whose one-sided slope condition holds plus the interior slope
// root. Each candidate's NE property is re-verified by payoff sampling.
inline NeSearchResult find_symmetric_ne(const SymmetricGame2& g, double b2) {
  b2 = detail::require_unit(b2, "find_symmetric_ne: b2");
  NeSearchResult out;
  const double s0 = ne_slope2(g, b2, 0.0);
  const double s1 = ne_slope2(g, b2, 1.0);
  // the slope is affine in q, so vanishing at both ends means it vanishes
  // identically and every strategy is a symmetric NE
  out.continuum = std::abs(s0) <= kCoeffTol && std::abs(s1) <= kCoeffTol;

  std::vector<std::pair<double, CandidateKind>> picks;
  if (s0 <= kNeTol) picks.emplace_back(0.0, CandidateKind::Pure0);
  if (auto root = mixed_ne2(g, b2)) {
    if (*root > kNeTol && *root < 1.0 - kNeTol) {
      picks.emplace_back(*root, CandidateKind::Mixed);
    }
  }
  if (s1 >= -kNeTol) picks.emplace_back(1.0, CandidateKind::Pure1);

  for (const auto& [p, kind] : picks) {
    out.candidates.push_back(detail::build_candidate(
        p, kind, classify_ess2(g, b2, p),
        [&, p = p](double q) {
          return payoff2(g, b2, p, p) - payoff2(g, b2, q, p);
        },
        [&, p = p](double q) { return ess_margin2(g, b2, p, q); }));
  }
  return out;
}

inline NeSearchResult find_symmetric_ne(const SymmetricGame3& g, double b2) {
  b2 = detail::require_unit(b2, "find_symmetric_ne: b2");
  NeSearchResult out;
  const NeQuadratic bracket = ne_quadratic3(g, b2);
  const MixedRoots3 roots = mixed_ne3(g, b2);
  out.continuum = roots.continuum;

  std::vector<std::pair<double, CandidateKind>> picks;
  if (bracket(0.0) <= kNeTol) picks.emplace_back(0.0, CandidateKind::Pure0);
  for (double root : roots.roots) {
    if (root > kNeTol && root < 1.0 - kNeTol) {
      picks.emplace_back(root, CandidateKind::Mixed);
    }
  }
  if (bracket(1.0) >= -kNeTol) picks.emplace_back(1.0, CandidateKind::Pure1);

  for (const auto& [p, kind] : picks) {
    out.candidates.push_back(detail::build_candidate(
        p, kind, classify_ess3(g, b2, p),
        [&, p = p](double q) {
          return payoff3(g, b2, p, p, p) - payoff3(g, b2, q, p, p);
        },
        [&, p = p](double q) { return ess_margin3(g, b2, p, q); }));
  }
  return out;
}

// One NE/ESS status change of a tracked candidate between two adjacent
// sweep points.
struct StabilityEvent {
  CandidateKind kind;
  double p = 0.0;  // candidate location at the right end of the interval
  double b2_lo = 0.0;
  double b2_hi = 0.0;
  std::string field;  // "ne" or "ess"
  std::string from;
  std::string to;
};

namespace detail {

inline const char* ess_name(EssState s) {
  switch (s) {
    case EssState::Yes: return "yes";
    case EssState::No: return "no";
    default: return "tie";
  }
}

struct TrackedPoint {
  bool p0_ne = false, p1_ne = false;
  EssState p0_ess = EssState::No, p1_ess = EssState::No;
  std::vector<EquilibriumCandidate> mixed;
};

template <class Game>
TrackedPoint track_point(const Game& g, double b2) {
  TrackedPoint pt;
  const NeSearchResult res = find_symmetric_ne(g, b2);
  for (const EquilibriumCandidate& c : res.candidates) {
    switch (c.kind) {
      case CandidateKind::Pure0:
        pt.p0_ne = c.is_ne;
        pt.p0_ess = c.is_ess;
        break;
      case CandidateKind::Pure1:
        pt.p1_ne = c.is_ne;
        pt.p1_ess = c.is_ess;
        break;
      case CandidateKind::Mixed:
        pt.mixed.push_back(c);
        break;
    }
  }
  return pt;
}

}  // namespace detail

// Tracks every candidate across an ascending b2 grid (mixed roots paired by
// nearest-neighbor continuity) and reports each change of NE or ESS status
// with the bracketing interval.
template <class Game>
std::vector<StabilityEvent> stability_transitions(
    const Game& g, const std::vector<double>& b2_grid) {
  if (b2_grid.empty()) {
    throw std::invalid_argument("stability_transitions: empty b2 grid");
  }
  std::vector<detail::TrackedPoint> points;
  points.reserve(b2_grid.size());
  for (double b2 : b2_grid) points.push_back(detail::track_point(g, b2));

  std::vector<StabilityEvent> events;
  auto emit = [&](CandidateKind kind, double p, std::size_t i,
                  const std::string& field, std::string from, std::string to) {
    events.push_back(StabilityEvent{kind, p, b2_grid[i - 1], b2_grid[i], field,
                                    std::move(from), std::move(to)});
  };

  for (std::size_t i = 1; i < points.size(); ++i) {
    const detail::TrackedPoint& prev = points[i - 1];
    const detail::TrackedPoint& cur = points[i];

    auto pure_events = [&](CandidateKind kind, double p, bool ne_a, bool ne_b,
                           EssState ess_a, EssState ess_b) {
      if (ne_a != ne_b) {
        emit(kind, p, i, "ne", ne_a ? "yes" : "no", ne_b ? "yes" : "no");
      }
      if (ne_a && ne_b && ess_a != ess_b) {
        emit(kind, p, i, "ess", detail::ess_name(ess_a),
             detail::ess_name(ess_b));
      }
    };
    pure_events(CandidateKind::Pure0, 0.0, prev.p0_ne, cur.p0_ne, prev.p0_ess,
                cur.p0_ess);
    pure_events(CandidateKind::Pure1, 1.0, prev.p1_ne, cur.p1_ne, prev.p1_ess,
                cur.p1_ess);

    if (prev.mixed.size() == cur.mixed.size()) {
      for (std::size_t k = 0; k < cur.mixed.size(); ++k) {
        if (prev.mixed[k].is_ess != cur.mixed[k].is_ess) {
          emit(CandidateKind::Mixed, cur.mixed[k].p, i, "ess",
               detail::ess_name(prev.mixed[k].is_ess),
               detail::ess_name(cur.mixed[k].is_ess));
        }
      }
    } else {
      // match each root of the smaller list to its nearest neighbor in the
      // larger one; unmatched roots appear or disappear
      const bool grew = cur.mixed.size() > prev.mixed.size();
      const auto& small = grew ? prev.mixed : cur.mixed;
      const auto& large = grew ? cur.mixed : prev.mixed;
      std::vector<bool> used(large.size(), false);
      for (const EquilibriumCandidate& c : small) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < large.size(); ++k) {
          const double d = std::abs(large[k].p - c.p);
          if (!used[k] && d < best_d) {
            best = k;
            best_d = d;
          }
        }
        used[best] = true;
        const EquilibriumCandidate& match = large[best];
        const EquilibriumCandidate& a = grew ? c : match;
        const EquilibriumCandidate& b = grew ? match : c;
        if (a.is_ess != b.is_ess) {
          emit(CandidateKind::Mixed, b.p, i, "ess",
               detail::ess_name(a.is_ess), detail::ess_name(b.is_ess));
        }
      }
      for (std::size_t k = 0; k < large.size(); ++k) {
        if (used[k]) continue;
        if (grew) {
          emit(CandidateKind::Mixed, large[k].p, i, "ne", "absent", "yes");
        } else {
          emit(CandidateKind::Mixed, large[k].p, i, "ne", "yes", "absent");
        }
      }
    }
  }
  return events;
}

}  // namespace qess
