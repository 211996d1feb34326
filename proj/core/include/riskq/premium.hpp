#pragma once

#include <string>

#include "riskq/distortion.hpp"
#include "riskq/distribution.hpp"
#include "riskq/extended.hpp"
#include "riskq/young.hpp"

namespace riskq {

struct PremiumResult {
  double value = 0;
  bool attained = false;         // the infimum is a minimum (iff value > 0)
  bool achieved_equality = false;  // psi(value) = 1-alpha within 10*tol
  double bracket_lo = 0, bracket_hi = 0;
  int iterations = 0;
};

struct PremiumOptions {
  double tol = 1e-10;  // relative bracket-width target
  // When positive, also shrink the bracket to this absolute width; the limit
  // schedule at alpha = 0 needs premium errors that do not grow with |x|.
  double abs_tol = 0;
  int max_iterations = 200;
  // Solve psi(a) = 1-alpha by bracketed bisection even when the power-family
  // closed form applies (used to cross-check the algebraic route).
  bool force_bisection = false;
};

// psi(a) = integral of phi(Q_d(1-u)/a) dmu_g(u), the decreasing function whose
// generalized inverse at 1-alpha is the premium.  d must be nonnegative and
// a positive.  Divergence is reported as +inf with a diagnostic; quadrature
// failure throws AccuracyError.
ExtendedValue psi(const Distribution& d, const DistortionFn& g,
                  const YoungFn& phi, double a);

// Orlicz-Lorentz premium  pi_{g,phi,alpha}(X) = inf{a > 0 : psi(a) <= 1-alpha}
// for nonnegative X and alpha < 1.  Zero iff X = 0 or g vanishes on
// [0, P(X>0)); otherwise the infimum is attained and is found by bracketed
// bisection on the decreasing psi (closed form for power-type phi).
// Throws NotInSpaceError when no finite psi value exists up to the probe cap.
PremiumResult orliczLorentzPremium(const Distribution& d, const DistortionFn& g,
                                   const YoungFn& phi, double alpha,
                                   const PremiumOptions& opts = {});

// Orlicz premium: the g = identity special case.
PremiumResult orliczPremium(const Distribution& d, const YoungFn& phi,
                            double alpha, const PremiumOptions& opts = {});

// Luxemburg norm: alpha = 0, g = identity, applied to a caller-provided
// nonnegative risk (|X| must be formed by the caller).
PremiumResult luxemburgNorm(const Distribution& d, const YoungFn& phi,
                            const PremiumOptions& opts = {});

enum class MembershipStatus { Member, NotMember, Unknown };

struct MembershipResult {
  MembershipStatus status;
  std::string diagnostic;
};

// Does X belong to the space of risks with some finite
// integral of phi(|Q(1-u)|/a) dmu_g?  Bounded risks are always members.
// Analytic tail comparison decides the exponential fixtures; otherwise the
// integral is probed at a = 1, 2, 4, ..., 2^20 (one probe decides when phi
// satisfies the Delta_2 condition).
MembershipResult membership(const Distribution& d, const DistortionFn& g,
                            const YoungFn& phi);

}  // namespace riskq
