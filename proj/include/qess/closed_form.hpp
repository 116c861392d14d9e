#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qess/game_model.hpp"

namespace qess {

// Roots computed in floating point may land a hair outside [0,1]; within
// this tolerance they count as the boundary strategy they represent.
inline constexpr double kRootClampTol = 1e-9;

// Below this magnitude a polynomial coefficient is treated as zero when
// deciding between the quadratic, linear and degenerate root paths.
inline constexpr double kCoeffTol = 1e-12;

namespace detail {

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Accept [0,1] with a hair of slack for clamped roots and integrator
// round-off, reject anything further out.
inline double require_unit(double v, const char* what) {
  if (!(v >= -kRootClampTol && v <= 1.0 + kRootClampTol)) {
    throw std::domain_error(std::string(what) + " must lie in [0,1]");
  }
  return clamp01(v);
}

}  // namespace detail

// (beta-delta)+(gamma-alpha): the q-independent ratio of the two-player
// condition-2 margin, margin = ratio * (p-q)^2. Its sign decides whether an
// interior rest point of the payoff slope is evolutionarily stable.
inline double margin_ratio2(const SymmetricGame2& g) {
  return (g.beta - g.delta) + (g.gamma - g.alpha);
}

// Payoff to a p-player against a q-player through the entangled initial
// state with weight b2 on the all-S2 component.
inline double payoff2(const SymmetricGame2& g, double b2, double p, double q) {
  b2 = detail::require_unit(b2, "payoff2: b2");
  p = detail::require_unit(p, "payoff2: p");
  q = detail::require_unit(q, "payoff2: q");
  const double a2 = 1.0 - b2;
  return p * q * (a2 * g.alpha + b2 * g.delta) +
         p * (1.0 - q) * (a2 * g.beta + b2 * g.gamma) +
         (1.0 - p) * q * (a2 * g.gamma + b2 * g.beta) +
         (1.0 - p) * (1.0 - q) * (a2 * g.delta + b2 * g.alpha);
}

// Slope of payoff2 in its own-strategy argument against an opponent playing
// q: payoff2(g,b2,p',q) - payoff2(g,b2,p,q) = (p'-p) * ne_slope2(g,b2,q).
inline double ne_slope2(const SymmetricGame2& g, double b2, double q) {
  const double a2 = 1.0 - b2;
  return a2 * (g.beta - g.delta) + b2 * (g.gamma - g.alpha) -
         q * margin_ratio2(g);
}

// Interior zero of the slope, when it exists within [0,1].
inline std::optional<double> mixed_ne2(const SymmetricGame2& g, double b2) {
  const double ratio = margin_ratio2(g);
  if (std::abs(ratio) <= kCoeffTol) return std::nullopt;
  const double a2 = 1.0 - b2;
  const double root =
      (a2 * (g.beta - g.delta) + b2 * (g.gamma - g.alpha)) / ratio;
  if (root < -kRootClampTol || root > 1.0 + kRootClampTol) return std::nullopt;
  return detail::clamp01(root);
}

// Condition-2 margin P(pstar,q) - P(q,q), always computed from payoff
// evaluations. When pstar is the slope root this equals
// margin_ratio2(g) * (pstar-q)^2.
inline double ess_margin2(const SymmetricGame2& g, double b2, double pstar,
                          double q) {
  return payoff2(g, b2, pstar, q) - payoff2(g, b2, q, q);
}

// --- three players --------------------------------------------------------

// Symmetric Nash bracket Q(p) = qa p^2 + qb p + qc, so that
// payoff3(g,b2,p',x,x) - payoff3(g,b2,p,x,x) = (p'-p) * Q(x).
struct NeQuadratic {
  double qa = 0.0;
  double qb = 0.0;
  double qc = 0.0;

  double operator()(double p) const { return (qa * p + qb) * p + qc; }
  double derivative(double p) const { return 2.0 * qa * p + qb; }
};

// Payoff to player A with own identity-probability p against opponents
// playing q and r: sum over the eight tactic combinations of their
// probability times the A-payoff of the flipped components.
inline double payoff3(const SymmetricGame3& g, double b2, double p, double q,
                      double r) {
  b2 = detail::require_unit(b2, "payoff3: b2");
  p = detail::require_unit(p, "payoff3: p");
  q = detail::require_unit(q, "payoff3: q");
  r = detail::require_unit(r, "payoff3: r");
  // A-payoff by (own plays S2?, number of opponents playing S2)
  const double own1[3] = {g.a1, g.a3, g.a5};
  const double own2[3] = {g.a2, g.a6, g.a8};
  const double keep[3] = {p, q, r};
  double total = 0.0;
  for (unsigned mask = 0; mask < 8; ++mask) {
    const int fa = (mask >> 2) & 1;
    const int fb = (mask >> 1) & 1;
    const int fc = mask & 1;
    const double weight = (fa ? 1.0 - keep[0] : keep[0]) *
                          (fb ? 1.0 - keep[1] : keep[1]) *
                          (fc ? 1.0 - keep[2] : keep[2]);
    // from |111>: flipped players play S2; from |222>: unflipped ones do
    const double from111 = fa ? own2[fb + fc] : own1[fb + fc];
    const double from222 = fa ? own1[2 - fb - fc] : own2[2 - fb - fc];
    total += weight * ((1.0 - b2) * from111 + b2 * from222);
  }
  return total;
}

inline NeQuadratic ne_quadratic3(const SymmetricGame3& g, double b2) {
  const Coefficients3 c = coefficients3(g);
  const double s = c.sigma + c.omega - 2.0 * c.eta;
  return NeQuadratic{(1.0 - 2.0 * b2) * s,
                     2.0 * (b2 * s - c.omega + c.eta),
                     c.omega - b2 * (c.sigma + c.omega)};
}

// Square-root argument of the mixed-equilibrium margin law:
// |margin| = (pstar-q)^2 * sqrt(max(Delta,0)) at any root of the bracket.
inline double discriminant3(const SymmetricGame3& g, double b2) {
  const Coefficients3 c = coefficients3(g);
  const double sw = c.sigma + c.omega;
  return (sw * sw - 4.0 * c.eta * c.eta) * b2 * (1.0 - b2) +
         (c.eta * c.eta - c.sigma * c.omega);
}

struct MixedRoots3 {
  std::vector<double> roots;  // ascending, clamped into [0,1]
  // Set when the bracket vanishes identically: every p satisfies the
  // symmetric Nash condition with equality at this b2.
  bool continuum = false;
};

// Roots of the symmetric Nash bracket within [0,1]. Degenerate paths:
// a vanishing leading coefficient falls back to the linear equation, and a
// fully vanishing bracket (possible at b2 = 1/2 when sigma = omega, or for
// games with sigma = eta = omega = 0) reports the continuum. In the
// sigma = omega case the b2-independent root pair is still well defined and
// is returned so candidates stay continuous across the degenerate point.
inline MixedRoots3 mixed_ne3(const SymmetricGame3& g, double b2) {
  const NeQuadratic bracket = ne_quadratic3(g, b2);
  MixedRoots3 out;
  auto push = [&out](double r) {
    if (!(r >= -kRootClampTol && r <= 1.0 + kRootClampTol)) return;
    r = detail::clamp01(r);
    for (double seen : out.roots) {
      if (std::abs(seen - r) <= kRootClampTol) return;
    }
    out.roots.push_back(r);
  };

  const bool qa0 = std::abs(bracket.qa) <= kCoeffTol;
  const bool qb0 = std::abs(bracket.qb) <= kCoeffTol;
  const bool qc0 = std::abs(bracket.qc) <= kCoeffTol;
  if (qa0 && qb0 && qc0) {
    out.continuum = true;
    const Coefficients3 c = coefficients3(g);
    if (std::abs(c.sigma - c.omega) <= kCoeffTol &&
        std::abs(c.eta - c.sigma) > kCoeffTol) {
      const double disc = c.eta * c.eta - c.sigma * c.sigma;
      if (disc >= 0.0) {
        const double span = 2.0 * (c.eta - c.sigma);
        const double offset = std::sqrt(disc);
        push(((c.eta - c.sigma) - offset) / span);
        push(((c.eta - c.sigma) + offset) / span);
      }
    }
    std::sort(out.roots.begin(), out.roots.end());
    return out;
  }
  if (qa0) {
    if (!qb0) push(-bracket.qc / bracket.qb);
    std::sort(out.roots.begin(), out.roots.end());
    return out;
  }

  double disc = bracket.qb * bracket.qb - 4.0 * bracket.qa * bracket.qc;
  const double disc_scale =
      std::max(1.0, std::abs(bracket.qb * bracket.qb) +
                        std::abs(4.0 * bracket.qa * bracket.qc));
  if (disc < 0.0 && disc >= -kCoeffTol * disc_scale) disc = 0.0;
  if (disc < 0.0) return out;
  if (disc == 0.0) {
    push(-bracket.qb / (2.0 * bracket.qa));
  } else {
    const double sq = std::sqrt(disc);
    const double t = bracket.qb >= 0.0 ? -(bracket.qb + sq) / 2.0
                                       : (-bracket.qb + sq) / 2.0;
    push(t / bracket.qa);
    push(bracket.qc / t);
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

// Condition-2 margin P(pstar,q,pstar) - P(q,q,pstar), from direct payoff
// evaluations (the sqrt law is used only as a test oracle).
inline double ess_margin3(const SymmetricGame3& g, double b2, double pstar,
                          double q) {
  return payoff3(g, b2, pstar, q, pstar) - payoff3(g, b2, q, q, pstar);
}

// Q-independent ratio of the condition-2 margin at a bracket root p:
// margin = margin_ratio3(g,b2,p) * (p-q)^2 whenever Q(p) = 0. Equals
// -(Q'(p))/2, i.e. -(sqrt of the discriminant) on the non-stable branch and
// +sqrt on the stable one.
inline double margin_ratio3(const SymmetricGame3& g, double b2, double p) {
  return -0.5 * ne_quadratic3(g, b2).derivative(p);
}

}  // namespace qess
