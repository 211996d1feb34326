#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "riskq/errors.hpp"
#include "riskq/extended.hpp"

namespace riskq {

// Closed-form families get a tag so evaluation and integration can use the
// exact expressions instead of the generic atom/segment machinery.
enum class DistortionKind {
  Mixture,      // atoms + polynomial-density segments
  Identity,     // g(u) = u                    (expectation)
  Dirac,        // unit atom at 1-beta         (VaR_beta)
  TvarClamp,    // g(u) = min(u/(1-alpha), 1)  (TVaR_alpha)
  Power,        // g(u) = u^gamma, gamma <= 1
  ExampleCone,  // concave g whose domain L_g is not a convex cone
  ExampleFatou, // g(u) = max(2u-1, 0); g(0)=0 but not concave
};

struct DistortionAtom {
  double location;  // in [0, 1); no atom at 1 is representable
  double mass;      // > 0
};

// Polynomial density piece of degree <= 3 on [lo, hi].
struct DistortionSegment {
  double lo, hi;
  std::array<double, 4> coef;  // density(u) = coef[0] + coef[1] u + ...
};

// A distortion function g : [0,1] -> [0,1], increasing and right-continuous
// with g(1-) = g(1) = 1.  g corresponds one-to-one to a Borel probability
// measure mu_g on [0,1] via mu_g([0,u]) = g(u); integration against g is
// Lebesgue integration against mu_g.  Immutable and freely shareable.
class DistortionFn {
 public:
  static DistortionFn identity();
  // Unit atom at 1-beta; rho_g = VaR_beta.  beta in (0,1]; beta = 1 places
  // the atom at 0 (essential supremum).
  static DistortionFn dirac(double beta);
  static DistortionFn tvarClamp(double alpha);  // alpha in [0,1)
  static DistortionFn power(double gamma);      // gamma in (0,1]
  static DistortionFn exampleCone();
  static DistortionFn exampleFatou();
  static DistortionFn mixture(std::vector<DistortionAtom> atoms,
                              std::vector<DistortionSegment> segments,
                              bool concave);

  // g(u), right-continuous.  Pre: 0 <= u <= 1.
  double evalG(double u) const;
  // g(u-) = lim_{v->u-} g(v), with g(0-) = 0.
  double evalGLeft(double u) const;
  // Generalized inverse inf{u : g(u) >= s} for s in [0,1].  Throws
  // UnsupportedError when g jumps over s (no u attains g(u) ~= s).
  double inverseG(double s) const;

  DistortionKind kind() const { return kind_; }
  bool concave() const { return concave_; }
  bool continuous() const;          // no atoms
  double gAtZero() const { return evalG(0.0); }
  bool hasAtomAtZero() const;
  const std::vector<DistortionAtom>& atoms() const { return atoms_; }
  const std::vector<DistortionSegment>& segments() const { return segments_; }
  double param() const { return param_; }  // beta / alpha / gamma of the tag
  // Density decays like exp(-c/(1-u)) near u = 1; used by the analytic
  // membership classifier for exponential-type quantile tails.
  std::optional<double> expInvDecayAtOne() const;

 private:
  DistortionFn() = default;
  void validate() const;
  double continuousPart(double u) const;  // integral of the density on [0,u]

  DistortionKind kind_ = DistortionKind::Mixture;
  double param_ = 0;
  std::vector<DistortionAtom> atoms_;          // sorted by location
  std::vector<DistortionSegment> segments_;    // contiguous partition of [0,1]
  std::vector<double> atom_prefix_;            // cumulative masses
  std::vector<double> seg_prefix_;             // cumulative density integrals
  bool concave_ = false;
};

// ---------------------------------------------------------------------------
// Integration against mu_g.

// Right-continuous step function on [0,1]:
//   f(u) = values[i]  for u in [cut_i, cut_{i+1}),  cut_0 = 0, cut_m = 1,
// and f(1) = values[m-1].  `cuts` holds the interior boundaries only.
struct StepFunction {
  std::vector<double> cuts;    // ascending, inside (0,1)
  std::vector<double> values;  // size cuts.size() + 1
};

// Piecewise-smooth integrand for the quadrature path.
struct Integrand {
  std::function<double(double)> f;  // defined on [0,1]
  std::vector<double> breakpoints;  // interior points where f is not smooth
  // f may blow up approaching the flagged edge; truncated integrals with
  // geometric tail extrapolation are used there, and divergence is detected.
  bool unbounded_near0 = false;
  bool unbounded_near1 = false;
};

struct QuadOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-13;
  int max_panels = 4000;
};

// Exact: sum of piece values times mu_g piece masses (atoms included via the
// left-limit differences).  Infinite piece values on positive-mass pieces
// yield an infinite result with a diagnostic.
ExtendedValue integrateAgainstG(const StepFunction& f, const DistortionFn& g);

// Adaptive Gauss-Kronrod against the density plus exact atom evaluation.
// Integrands unbounded at a flagged edge must be nonnegative there.
// Throws AccuracyError when the requested accuracy cannot be certified.
ExtendedValue integrateAgainstG(const Integrand& f, const DistortionFn& g,
                                const QuadOptions& opts = {});

}  // namespace riskq
