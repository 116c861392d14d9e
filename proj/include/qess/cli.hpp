#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "qess/dynamics.hpp"
#include "qess/equilibrium.hpp"
#include "qess/game_file.hpp"
#include "qess/quantum_engine.hpp"

namespace qess::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerifyFailed = 2;

// Shortest decimal representation that round-trips to the same double;
// keeps CSV output byte-identical across runs.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

// Compact human-readable number for reports.
inline std::string format_short(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

inline const char* kind_label(CandidateKind k) {
  switch (k) {
    case CandidateKind::Pure0: return "pure-0";
    case CandidateKind::Mixed: return "mixed";
    default: return "pure-1";
  }
}

inline const char* ess_label(EssState s) {
  switch (s) {
    case EssState::Yes: return "yes";
    case EssState::No: return "no";
    default: return "tie";
  }
}

namespace detail {

// Deterministic unit-interval draw independent of the standard library's
// distribution implementations.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline void print_game(const GameFile& game, std::ostream& out) {
  if (const auto* g2 = std::get_if<SymmetricGame2>(&game)) {
    out << "players: 2\n"
        << "payoffs: alpha=" << format_short(g2->alpha)
        << " beta=" << format_short(g2->beta)
        << " gamma=" << format_short(g2->gamma)
        << " delta=" << format_short(g2->delta) << "\n";
  } else {
    const auto& g3 = std::get<SymmetricGame3>(game);
    const Coefficients3 c = coefficients3(g3);
    out << "players: 3\n"
        << "payoffs: alpha1=" << format_short(g3.a1)
        << " alpha2=" << format_short(g3.a2)
        << " alpha3=" << format_short(g3.a3)
        << " alpha5=" << format_short(g3.a5)
        << " alpha6=" << format_short(g3.a6)
        << " alpha8=" << format_short(g3.a8) << "\n"
        << "coefficients: sigma=" << format_short(c.sigma)
        << " eta=" << format_short(c.eta)
        << " omega=" << format_short(c.omega) << "\n";
  }
}

inline NeSearchResult search(const GameFile& game, double b2) {
  if (const auto* g2 = std::get_if<SymmetricGame2>(&game)) {
    return find_symmetric_ne(*g2, b2);
  }
  return find_symmetric_ne(std::get<SymmetricGame3>(game), b2);
}

inline void print_candidates(const NeSearchResult& res, std::ostream& out) {
  if (res.continuum) {
    out << "note: the payoff differences vanish identically; every strategy "
           "is a symmetric NE at this b2\n";
  }
  out << "candidates (" << res.candidates.size() << "):\n";
  for (const EquilibriumCandidate& c : res.candidates) {
    out << "  " << std::left << std::setw(7) << kind_label(c.kind)
        << " p=" << std::setw(10) << format_short(c.p)
        << " NE=" << (c.is_ne ? "yes" : "no")
        << " strict=" << (c.ne_strict ? "yes" : "no")
        << " ESS=" << std::setw(4) << ess_label(c.is_ess)
        << " margin-ratio=" << format_short(c.margin_summary) << "\n";
  }
}

}  // namespace detail

// analyze: classify every symmetric NE of the game at one entanglement value.
inline int cmd_analyze(const GameFile& game, double b2, std::ostream& out) {
  const NeSearchResult res = detail::search(game, b2);  // validates b2
  detail::print_game(game, out);
  out << "b2: " << format_short(b2) << "\n";
  if (const auto* g3 = std::get_if<SymmetricGame3>(&game)) {
    out << "discriminant: " << format_short(discriminant3(*g3, b2)) << "\n";
  }
  detail::print_candidates(res, out);
  return kExitOk;
}

// sweep: CSV rows `b2,candidate_kind,p,is_ne,ne_strict,is_ess,margin_ratio`
// for every grid point (b2 ascending; candidates pure-0, mixed ascending,
// pure-1), then a transition summary on the report stream.
inline int cmd_sweep(const GameFile& game, double b2_min, double b2_max,
                     int steps, std::ostream& csv, std::ostream& out) {
  if (!(b2_min >= 0.0 && b2_min <= b2_max && b2_max <= 1.0)) {
    throw std::domain_error("sweep: need 0 <= b2-min <= b2-max <= 1");
  }
  if (steps < 2) throw std::domain_error("sweep: need at least 2 steps");

  std::vector<double> grid;
  grid.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    grid.push_back(b2_min + (b2_max - b2_min) * i / (steps - 1));
  }

  csv << "b2,candidate_kind,p,is_ne,ne_strict,is_ess,margin_ratio\n";
  for (double b2 : grid) {
    const NeSearchResult res = detail::search(game, b2);
    for (const EquilibriumCandidate& c : res.candidates) {
      csv << format_double(b2) << ',' << kind_label(c.kind) << ','
          << format_double(c.p) << ',' << (c.is_ne ? '1' : '0') << ','
          << (c.ne_strict ? '1' : '0') << ',' << ess_label(c.is_ess) << ','
          << format_double(c.margin_summary) << '\n';
    }
  }

  const std::vector<StabilityEvent> events =
      std::holds_alternative<SymmetricGame2>(game)
          ? stability_transitions(std::get<SymmetricGame2>(game), grid)
          : stability_transitions(std::get<SymmetricGame3>(game), grid);
  if (events.empty()) {
    out << "transitions: none\n";
  } else {
    out << "transitions (" << events.size() << "):\n";
    for (const StabilityEvent& e : events) {
      out << "  " << kind_label(e.kind);
      if (e.kind == CandidateKind::Mixed) {
        out << " p=" << format_short(e.p);
      }
      out << ": " << e.field << " " << e.from << " -> " << e.to
          << " on b2 in [" << format_short(e.b2_lo) << ", "
          << format_short(e.b2_hi) << "]\n";
    }
  }
  return kExitOk;
}

inline int cmd_sweep_to_path(const GameFile& game, double b2_min,
                             double b2_max, int steps,
                             const std::string& out_path, std::ostream& out) {
  std::ofstream csv(out_path, std::ios::binary);
  if (!csv) {
    throw std::runtime_error("cannot open output file '" + out_path + "'");
  }
  const int rc = cmd_sweep(game, b2_min, b2_max, steps, csv, out);
  csv.flush();
  if (!csv) {
    throw std::runtime_error("failed writing output file '" + out_path + "'");
  }
  return rc;
}

// verify: seeded random (b2, profile) samples, closed forms against the
// density-matrix oracle for every player. Exits 0 iff the worst deviation
// stays within tol.
inline int cmd_verify(const GameFile& game, int samples, std::uint64_t seed,
                      double tol, std::ostream& out) {
  if (samples < 1) throw std::domain_error("verify: need at least 1 sample");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double b2 = detail::unit_draw(rng);
    const EntanglementParam e{b2};
    if (const auto* g2 = std::get_if<SymmetricGame2>(&game)) {
      const double p = detail::unit_draw(rng);
      const double q = detail::unit_draw(rng);
      const MoveProfile profile{{p, q}};
      worst = std::max(worst, std::abs(payoff2(*g2, b2, p, q) -
                                       oracle_payoff(*g2, e, profile, Player::A)));
      worst = std::max(worst, std::abs(payoff2(*g2, b2, q, p) -
                                       oracle_payoff(*g2, e, profile, Player::B)));
    } else {
      const auto& g3 = std::get<SymmetricGame3>(game);
      const double p = detail::unit_draw(rng);
      const double q = detail::unit_draw(rng);
      const double r = detail::unit_draw(rng);
      const MoveProfile profile{{p, q, r}};
      worst = std::max(worst, std::abs(payoff3(g3, b2, p, q, r) -
                                       oracle_payoff(g3, e, profile, Player::A)));
      worst = std::max(worst, std::abs(payoff3(g3, b2, q, p, r) -
                                       oracle_payoff(g3, e, profile, Player::B)));
      worst = std::max(worst, std::abs(payoff3(g3, b2, r, q, p) -
                                       oracle_payoff(g3, e, profile, Player::C)));
    }
  }
  const bool pass = worst <= tol;
  out << "samples: " << samples << "  seed: " << seed << "\n"
      << "max deviation: " << format_double(worst) << "\n"
      << "result: " << (pass ? "PASS" : "FAIL")
      << " (tol = " << format_double(tol) << ")\n";
  return pass ? kExitOk : kExitVerifyFailed;
}

// invade: one replicator run plus the invasion barrier for the scenario.
inline int cmd_invade(const GameFile& game, double b2, double incumbent,
                      double mutant, double epsilon, std::ostream& out) {
  const InvasionScenario scenario{incumbent, mutant, epsilon};
  auto run_one = [&](const auto& g) {
    const ReplicatorRun run = replicator_trajectory(g, b2, scenario);
    const auto barrier = invasion_barrier(g, b2, incumbent, mutant);
    out << "b2: " << format_short(b2) << "  incumbent: "
        << format_short(incumbent) << "  mutant: " << format_short(mutant)
        << "  epsilon: " << format_short(epsilon) << "\n";
    out << "trajectory: " << run.times.size() << " samples, t_end="
        << format_short(run.times.back())
        << ", final mutant share=" << format_short(run.mutant_share.back())
        << "\n";
    out << "outcome: "
        << (run.outcome == InvasionOutcome::Repelled   ? "repelled"
            : run.outcome == InvasionOutcome::Invaded ? "invaded"
                                                      : "neutral")
        << "\n";
    out << "invasion barrier: "
        << (barrier ? format_short(*barrier) : std::string("none")) << "\n";
  };
  if (const auto* g2 = std::get_if<SymmetricGame2>(&game)) {
    run_one(*g2);
  } else {
    run_one(std::get<SymmetricGame3>(game));
  }
  return kExitOk;
}

}  // namespace qess::cli
