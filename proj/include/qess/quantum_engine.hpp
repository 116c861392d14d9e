#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qess/game_model.hpp"

namespace qess {

using complexd = std::complex<double>;

enum class Player { A, B, C };

// |b|^2: the population weight of the all-S2 component of the initial state
// a|1...1> + b|2...2>. b2 = 0 reproduces the classical game.
struct EntanglementParam {
  double b2 = 0.0;
  double a2() const { return 1.0 - b2; }
};

// Dense complex density operator over the fixed basis order (dim 4 or 8).
struct DensityMatrix {
  std::size_t dim = 0;
  std::vector<complexd> m;  // row-major dim x dim

  complexd& at(std::size_t i, std::size_t j) { return m[i * dim + j]; }
  const complexd& at(std::size_t i, std::size_t j) const {
    return m[i * dim + j];
  }
};

// Per-player probability of applying the identity operator; the flip
// operator C is applied with the complementary probability.
struct MoveProfile {
  std::vector<double> probs;
};

// Payoff operator, diagonal in the fixed basis order.
struct DiagonalPayoffOperator {
  std::size_t dim = 0;
  std::vector<double> diag;
};

namespace detail {

// Basis bookkeeping. Index = position in the fixed listing order; code =
// player-bit encoding with player A as the highest bit and S1 = 0, S2 = 1.
// For two players the listing order coincides with the binary order; for
// three players it does not.
inline constexpr std::array<int, 4> kBasisCode2{0b00, 0b01, 0b10, 0b11};
inline constexpr std::array<int, 4> kCode2Index{0, 1, 2, 3};
inline constexpr std::array<int, 8> kBasisCode3{0b000, 0b100, 0b010, 0b001,
                                                0b011, 0b101, 0b110, 0b111};
inline constexpr std::array<int, 8> kCode3Index{0, 3, 2, 4, 1, 5, 6, 7};

// Image of a basis index under the tensor flip pattern `mask` (bit set =
// that player's qubit is flipped). The flip operator permutes basis states,
// so conjugation by it is a pure index permutation.
inline std::size_t flipped_index(std::size_t index, unsigned mask, int n) {
  if (n == 2) return kCode2Index[kBasisCode2[index] ^ static_cast<int>(mask)];
  return kCode3Index[kBasisCode3[index] ^ static_cast<int>(mask)];
}

inline void require_players(int n, const char* where) {
  if (n != 2 && n != 3) {
    throw std::invalid_argument(std::string(where) +
                                ": player count must be 2 or 3");
  }
}

}  // namespace detail

// Rank-1 projector onto sqrt(1-b2)|1...1> + sqrt(b2)|2...2>. Amplitudes are
// taken real nonnegative; relative phases are unobservable in this scheme.
inline DensityMatrix prepare_initial_state(EntanglementParam e, int n_players) {
  detail::require_players(n_players, "prepare_initial_state");
  if (!(e.b2 >= 0.0 && e.b2 <= 1.0)) {
    throw std::domain_error("prepare_initial_state: b2 must lie in [0,1]");
  }
  const std::size_t dim = n_players == 2 ? 4 : 8;
  DensityMatrix rho{dim, std::vector<complexd>(dim * dim, complexd{0.0, 0.0})};
  const double a = std::sqrt(1.0 - e.b2);
  const double b = std::sqrt(e.b2);
  const std::size_t last = dim - 1;  // |2...2> is last in the listing order
  rho.at(0, 0) = a * a;
  rho.at(0, last) = a * b;
  rho.at(last, 0) = a * b;
  rho.at(last, last) = b * b;
  return rho;
}

// Convex combination over all 2^n tactic tuples: each player applies the
// identity with its profile probability and the flip operator otherwise.
inline DensityMatrix apply_move_profile(const DensityMatrix& rho,
                                        const MoveProfile& profile) {
  const int n = static_cast<int>(profile.probs.size());
  detail::require_players(n, "apply_move_profile");
  if (rho.dim != (std::size_t{1} << n)) {
    throw std::invalid_argument(
        "apply_move_profile: density matrix dimension does not match the "
        "profile length");
  }
  for (double p : profile.probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::domain_error(
          "apply_move_profile: probabilities must lie in [0,1]");
    }
  }
  DensityMatrix out{rho.dim,
                    std::vector<complexd>(rho.dim * rho.dim, complexd{})};
  const unsigned patterns = 1u << n;
  for (unsigned mask = 0; mask < patterns; ++mask) {
    double weight = 1.0;
    for (int i = 0; i < n; ++i) {
      const bool flip = (mask >> (n - 1 - i)) & 1u;
      weight *= flip ? (1.0 - profile.probs[i]) : profile.probs[i];
    }
    if (weight == 0.0) continue;
    for (std::size_t i = 0; i < rho.dim; ++i) {
      const std::size_t fi = detail::flipped_index(i, mask, n);
      for (std::size_t j = 0; j < rho.dim; ++j) {
        out.at(i, j) +=
            weight * rho.at(fi, detail::flipped_index(j, mask, n));
      }
    }
  }
  return out;
}

inline DiagonalPayoffOperator make_payoff_operator2(const SymmetricGame2& g,
                                                    Player player) {
  if (player == Player::C) {
    throw std::invalid_argument(
        "make_payoff_operator2: two-player games have players A and B only");
  }
  if (player == Player::A) {
    return DiagonalPayoffOperator{4, {g.alpha, g.beta, g.gamma, g.delta}};
  }
  return DiagonalPayoffOperator{4, {g.alpha, g.gamma, g.beta, g.delta}};
}

inline DiagonalPayoffOperator make_payoff_operator3(const PayoffTable3& t,
                                                    Player player) {
  const std::array<double, 8>& row = player == Player::A  ? t.alpha
                                     : player == Player::B ? t.beta
                                                           : t.eta;
  return DiagonalPayoffOperator{8, {row.begin(), row.end()}};
}

// Tr[op rho]; with a diagonal operator this is the dot product of the
// operator diagonal with the state populations.
inline double expected_payoff(const DensityMatrix& rho,
                              const DiagonalPayoffOperator& op) {
  if (rho.dim != op.dim) {
    throw std::invalid_argument("expected_payoff: dimension mismatch");
  }
  double value = 0.0;
  for (std::size_t i = 0; i < rho.dim; ++i) {
    value += op.diag[i] * rho.at(i, i).real();
  }
  return value;
}

// Brute-force payoff: prepare, apply the tactics, trace against the payoff
// operator. This is the ground truth the closed forms are tested against.
inline double oracle_payoff(const SymmetricGame2& g, EntanglementParam e,
                            const MoveProfile& profile, Player player) {
  if (profile.probs.size() != 2) {
    throw std::invalid_argument(
        "oracle_payoff: two-player game needs a two-entry profile");
  }
  const DensityMatrix fin =
      apply_move_profile(prepare_initial_state(e, 2), profile);
  return expected_payoff(fin, make_payoff_operator2(g, player));
}

inline double oracle_payoff(const SymmetricGame3& g, EntanglementParam e,
                            const MoveProfile& profile, Player player) {
  if (profile.probs.size() != 3) {
    throw std::invalid_argument(
        "oracle_payoff: three-player game needs a three-entry profile");
  }
  const DensityMatrix fin =
      apply_move_profile(prepare_initial_state(e, 3), profile);
  return expected_payoff(fin, make_payoff_operator3(expand_symmetric3(g), player));
}

// --- density matrix validity checks -------------------------------------

inline double hermiticity_defect(const DensityMatrix& rho) {
  double worst = 0.0;
  for (std::size_t i = 0; i < rho.dim; ++i) {
    for (std::size_t j = 0; j < rho.dim; ++j) {
      worst = std::max(worst, std::abs(rho.at(i, j) - std::conj(rho.at(j, i))));
    }
  }
  return worst;
}

inline double trace_real(const DensityMatrix& rho) {
  double tr = 0.0;
  for (std::size_t i = 0; i < rho.dim; ++i) tr += rho.at(i, i).real();
  return tr;
}

// Smallest eigenvalue, via cyclic Jacobi on the real-symmetric embedding
// [[Re, -Im], [Im, Re]] (eigenvalues of the embedding are those of the
// Hermitian matrix, doubled). Dimensions here are at most 8.
inline double min_eigenvalue(const DensityMatrix& rho) {
  const std::size_t d = rho.dim;
  const std::size_t n = 2 * d;
  std::vector<double> storage(n * n, 0.0);
  auto A = [&](std::size_t i, std::size_t j) -> double& {
    return storage[i * n + j];
  };
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double re = rho.at(i, j).real();
      const double im = rho.at(i, j).imag();
      A(i, j) = re;
      A(i + d, j + d) = re;
      A(i, j + d) = -im;
      A(i + d, j) = im;
    }
  }
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    }
    if (off < 1e-26) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = A(k, p);
          const double akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = A(p, k);
          const double aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  double least = A(0, 0);
  for (std::size_t i = 1; i < n; ++i) least = std::min(least, A(i, i));
  return least;
}

// Hermitian to 1e-12, unit trace to 1e-12, positive semidefinite up to a
// -1e-10 eigenvalue floor for accumulated rounding.
inline bool is_valid_density(const DensityMatrix& rho) {
  return hermiticity_defect(rho) <= 1e-12 &&
         std::abs(trace_real(rho) - 1.0) <= 1e-12 &&
         min_eigenvalue(rho) >= -1e-10;
}

}  // namespace qess
