#pragma once

#include <optional>
#include <utility>

#include "riskq/distortion.hpp"
#include "riskq/distribution.hpp"
#include "riskq/premium.hpp"
#include "riskq/young.hpp"

namespace riskq {

// Value at Risk: the lower quantile at level alpha in (0,1].
double varAt(const Distribution& d, double alpha);

// rho_g(X) = integral of Q(1-u) dmu_g(u).  Throws NotInSpaceError when the
// defining absolute integral diverges.
double distortionRho(const Distribution& d, const DistortionFn& g);

// The survival-function representation of rho_g, computed independently:
//   -int_{-inf}^0 (1 - g(S(x)-)) dx + int_0^inf g(S(x)-) dx,  S = 1 - F.
double distortionRhoSurvival(const Distribution& d, const DistortionFn& g);

// TVaR_alpha(X) = (1/(1-alpha)) int_alpha^1 Q(u) du, alpha in (0,1).
double tvar(const Distribution& d, double alpha);

// The minimization form min_x { E((X-x)^+)/(1-alpha) + x }.  Evaluates at the
// known minimizer x* = Q(alpha) and asserts local optimality at x* +- eps.
double tvarRU(const Distribution& d, double alpha, double tol = 1e-9);

// sigma(x) = pi_{g,phi,alpha}((X-x)^+) + x, the objective the
// Haezendonck-Goovaerts construction minimizes.
double hgSigma(const Distribution& d, const DistortionFn& g, const YoungFn& phi,
               double alpha, double x, double tol = 1e-10);

enum class HGMode { Minimized, Limit, ShortcutRhoG };

struct HGResult {
  double value = 0;
  HGMode mode = HGMode::Minimized;
  std::optional<double> minimizer;  // Minimized only; a minimizer, not
                                    // necessarily the unique one
  double sigma_at_minimizer = 0;
  // [rho_g(X), (c+/c-) rho_g(X^+) + (c-/c+) rho_g(-X^-)]; attached at alpha=0
  std::optional<std::pair<double, double>> bounds;
  int iterations = 0;  // sigma evaluations
  bool converged = true;
};

struct HGOptions {
  double xtol = 1e-9;      // bracket width target (relative to the bracket)
  double ftol = 1e-7;      // sigma variation target
  double tol = 1e-10;      // inner premium tolerance
  int max_steps = 60;      // alpha = 0 limit schedule length
  int max_iterations = 220; // golden-section budget
  bool allow_shortcut = true;  // rho_g collapse when c- = c+ and Delta_2
};

// Distortion Haezendonck-Goovaerts risk measure
//   rho_{g,phi,alpha}(X) = inf_x ( pi_{g,phi,alpha}((X-x)^+) + x ).
// alpha > 0: golden-section minimization of the convex sigma over a bracket
//   derived from the rho_g envelope, refined through the support points of X.
// alpha = 0: sigma is increasing, so either the rho_g shortcut applies
//   (phi differentiable at 1 and Delta_2) or sigma is followed down a
//   geometric schedule x_k = x_0 - 2^k s until it stabilizes.
// phi must be normalized and alpha in [0,1).
HGResult distortionHG(const Distribution& d, const DistortionFn& g,
                      const YoungFn& phi, double alpha,
                      const HGOptions& opts = {});

// Choquet integral of a discrete risk against the capacity h(P(.)), h a
// distortion function with h(0) = 0.
double choquetIntegral(const Distribution& discrete, const DistortionFn& h);

// Rank-dependent expected utility of the position -X under U(t) = -phi(-t):
// the Choquet integral of U(-X) against h(P(.)).  X must be nonnegative and
// discrete.
double rdeu(const Distribution& d, const YoungFn& phi, const DistortionFn& h);

// The quantile-side of the same quantity,
//   -int_0^1 phi(Q(1-u)) dg(u)  with  g(u) = 1 - h((1-u)-),
// computed independently of the Choquet route.
double rdeuQuantileSide(const Distribution& d, const YoungFn& phi,
                        const DistortionFn& h);

}  // namespace riskq
