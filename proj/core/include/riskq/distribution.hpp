#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskq/errors.hpp"
#include "riskq/extended.hpp"

namespace riskq {

// Interpolation rule for quantile-function knots.
enum class QuantileInterp { Step, Linear };

// Step view of a distribution whose quantile function is piecewise constant:
// Q(u) = values[j] for u in (breaks[j-1], breaks[j]], with breaks[m-1] = 1.
struct StepView {
  std::span<const double> breaks;
  std::span<const double> values;
};

// Hints a fixture can attach so that membership tests can classify
// exponential-type tails analytically: |Q(u)| = exp(c/u + o(1/u)) as u -> 0+.
struct TailHint {
  std::optional<double> exp_inv_growth_lower;  // c for the lower tail (u -> 0+)
  std::optional<double> exp_inv_growth_upper;  // c for the upper tail (u -> 1-)
};

// A risk represented by its lower quantile function
//   Q(u) = inf{ x : F(x) >= u },  u in (0, 1],
// which is nondecreasing and left-continuous.  Values are immutable and all
// operations are pure, so instances may be shared freely across threads.
//
// The quantile is the primary representation; the distribution function is
// recovered through the Galois duality  u <= F(x)  <=>  Q(u) <= x.
class Distribution {
 public:
  // ----- constructors ------------------------------------------------------
  // Raw samples, each with weight 1/n; sorted internally.  Q(u) = y_ceil(u*n).
  static Distribution empirical(std::vector<double> samples);
  // Atoms at `points` with the given probabilities (must sum to 1 within 1e-12).
  static Distribution discrete(std::vector<double> points, std::vector<double> probs);
  static Distribution uniform(double a, double b);
  static Distribution exponential(double rate);
  static Distribution pareto(double scale, double shape);
  static Distribution normal(double mean, double sd);
  // P(X = x1) = p, P(X = x0) = 1 - p, with x0 < x1.
  static Distribution twoPoint(double x0, double x1, double p);
  // Quantile knots: breaks in (0,1] ending at 1, nondecreasing values.
  // Step: Q is constant on (breaks[j-1], breaks[j]].  Edge values may be
  // +-infinity (step interpolation only) to encode unbounded risks.
  // Linear: Q interpolates the knots and is constant on (0, breaks[0]].
  static Distribution piecewiseQuantile(std::vector<double> breaks,
                                        std::vector<double> values,
                                        QuantileInterp interp);
  static Distribution constant(double b);
  static Distribution zero() { return constant(0.0); }
  // A distribution given directly by a left-continuous nondecreasing quantile
  // callable.  `survival` may be omitted (a monotone bisection is used then).
  // Used for the built-in unbounded fixtures; see fixtures.hpp.
  static Distribution fromQuantile(std::function<double(double)> quantile,
                                   double ess_inf, double ess_sup,
                                   std::vector<double> breakpoints = {},
                                   std::function<double(double)> survival = nullptr,
                                   TailHint tail = {});

  // ----- observers ---------------------------------------------------------
  // Q(u) for u in (0,1]; returns an extended real.  Throws DomainError outside.
  double quantile(double u) const;
  // Q(1 - eps) evaluated stably for tiny eps (the upper tail keeps full
  // floating-point resolution where 1 - eps would round to 1).  eps in [0,1).
  double quantileUpper(double eps) const;
  // P(X > x), right-continuous in x.
  double survival(double x) const;
  // P(X <= x).
  double cdf(double x) const { return 1.0 - survival(x); }
  double essInf() const;
  double essSup() const;
  // u-locations (interior, ascending) where the quantile is non-smooth.
  std::vector<double> quantileBreakpoints() const;
  // Present iff the quantile function is a finite step function.
  std::optional<StepView> stepView() const;
  bool isStep() const { return stepView().has_value(); }
  // Distinct values the risk can take (step/piecewise-linear knots only).
  std::vector<double> supportPoints() const;
  const TailHint& tailHint() const;
  bool isZero() const { return essInf() == 0.0 && essSup() == 0.0; }

  // ----- transforms (all pure; quantile transforms pointwise) --------------
  Distribution shift(double b) const;          // Q + b
  Distribution scale(double lambda) const;     // lambda*Q, lambda >= 0
  Distribution clamp(double lo, double hi) const;
  Distribution positivePart() const;           // max(X, 0)
  Distribution negativePartNeg() const;        // min(X, 0) = -X^-
  Distribution excess(double x) const;         // (X - x)^+
  // Quantile of the result is Q1 + Q2 pointwise (comonotonic dependence).
  static Distribution comonotonicSum(const Distribution& d1, const Distribution& d2);

  struct Rep;  // opaque; defined in distribution.cpp

 private:
  explicit Distribution(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

// Lower quantile of the standard normal, accurate to ~1e-15 (rational
// initial guess refined by one Halley step on erfc).
double stdNormalQuantile(double u);

}  // namespace riskq
