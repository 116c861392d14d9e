#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qess {

// Two-player symmetric game. alpha/beta/gamma/delta are the row player's
// payoffs against the strategy pairs (S1,S1), (S1,S2), (S2,S1), (S2,S2);
// the column player's payoffs follow by symmetry.
struct SymmetricGame2 {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

// Three-player symmetric game reduced to its six independent constants.
// Read a-values as the focal player's payoff by (own strategy, number of
// opponents playing S2):
//   a1 = (S1, 0)   a3 = (S1, 1)   a5 = (S1, 2)
//   a2 = (S2, 0)   a6 = (S2, 1)   a8 = (S2, 2)
struct SymmetricGame3 {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double a5 = 0.0;
  double a6 = 0.0;
  double a8 = 0.0;
};

// Derived coefficients that govern the symmetric Nash bracket and the
// stability margins of a three-player game.
struct Coefficients3 {
  double sigma = 0.0;  // a1 - a2
  double eta = 0.0;    // a3 - a6
  double omega = 0.0;  // a5 - a8
};

// Full 24-constant payoff table over the eight basis states, in the fixed
// basis order
//   |111>, |211>, |121>, |112>, |122>, |212>, |221>, |222>
// (players A,B,C left to right; digits name the pure strategies S1/S2).
// alpha[l], beta[l], eta[l] are the payoffs to A, B, C in basis state l.
struct PayoffTable3 {
  std::array<double, 8> alpha{};
  std::array<double, 8> beta{};
  std::array<double, 8> eta{};
};

inline SymmetricGame2 make_game2(double alpha, double beta, double gamma,
                                 double delta) {
  for (double v : {alpha, beta, gamma, delta}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("make_game2: payoff values must be finite");
    }
  }
  return SymmetricGame2{alpha, beta, gamma, delta};
}

inline SymmetricGame3 make_game3(double a1, double a2, double a3, double a5,
                                 double a6, double a8) {
  for (double v : {a1, a2, a3, a5, a6, a8}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("make_game3: payoff values must be finite");
    }
  }
  return SymmetricGame3{a1, a2, a3, a5, a6, a8};
}

inline Coefficients3 coefficients3(const SymmetricGame3& g) {
  return Coefficients3{g.a1 - g.a2, g.a3 - g.a6, g.a5 - g.a8};
}

// Expands the six constants into the full 24-constant table of a symmetric
// three-player game.
inline PayoffTable3 expand_symmetric3(const SymmetricGame3& g) {
  PayoffTable3 t;
  t.alpha = {g.a1, g.a2, g.a3, g.a3, g.a5, g.a6, g.a6, g.a8};
  t.beta = {g.a1, g.a3, g.a2, g.a3, g.a6, g.a5, g.a6, g.a8};
  t.eta = {g.a1, g.a3, g.a3, g.a2, g.a6, g.a6, g.a5, g.a8};
  return t;
}

// Checks the constant-level equalities equivalent to full player-permutation
// symmetry of the payoff functions: alpha_4 = alpha_3, alpha_7 = alpha_6,
// and the beta/eta replacement pattern against the alpha entries. Returns
// one message per violated constraint; empty means the table is symmetric.
inline std::vector<std::string> validate_symmetry3(const PayoffTable3& t) {
  std::vector<std::string> violations;
  auto check = [&](double lhs, double rhs, const char* name) {
    if (!(lhs == rhs)) violations.emplace_back(name);
  };
  check(t.alpha[3], t.alpha[2], "alpha_4 != alpha_3");
  check(t.alpha[6], t.alpha[5], "alpha_7 != alpha_6");
  check(t.beta[0], t.alpha[0], "beta_1 != alpha_1");
  check(t.beta[1], t.alpha[2], "beta_2 != alpha_3");
  check(t.beta[2], t.alpha[1], "beta_3 != alpha_2");
  check(t.beta[3], t.alpha[2], "beta_4 != alpha_3");
  check(t.beta[4], t.alpha[5], "beta_5 != alpha_6");
  check(t.beta[5], t.alpha[4], "beta_6 != alpha_5");
  check(t.beta[6], t.alpha[5], "beta_7 != alpha_6");
  check(t.beta[7], t.alpha[7], "beta_8 != alpha_8");
  check(t.eta[0], t.alpha[0], "eta_1 != alpha_1");
  check(t.eta[1], t.alpha[2], "eta_2 != alpha_3");
  check(t.eta[2], t.alpha[2], "eta_3 != alpha_3");
  check(t.eta[3], t.alpha[1], "eta_4 != alpha_2");
  check(t.eta[4], t.alpha[5], "eta_5 != alpha_6");
  check(t.eta[5], t.alpha[5], "eta_6 != alpha_6");
  check(t.eta[6], t.alpha[4], "eta_7 != alpha_5");
  check(t.eta[7], t.alpha[7], "eta_8 != alpha_8");
  return violations;
}

// Swaps the roles of the two pure strategies.
inline SymmetricGame2 relabel2(const SymmetricGame2& g) {
  return SymmetricGame2{g.delta, g.gamma, g.beta, g.alpha};
}

}  // namespace qess
