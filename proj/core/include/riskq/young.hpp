#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "riskq/errors.hpp"

namespace riskq {

enum class YoungKind { Identity, Power, PiecewiseLinear, ExpMinusOne, Custom };

// A Young function: convex phi : [0,inf) -> [0,inf) with phi(0) = 0 and
// phi(t) -> inf.  Carries the metadata the premium algorithms need: the
// generalized inverse, the one-sided derivatives at 1, and the Delta_2 flag.
// phi may vanish on an interval near 0; the inverse uses the inf convention
// so all formulas remain valid there.
class YoungFn {
 public:
  static YoungFn identity();
  static YoungFn power(double c);  // phi(t) = t^c, c >= 1
  // Convex piecewise-linear: slopes[i] on [kinks[i-1], kinks[i]] with
  // kinks ascending and positive; slopes nondecreasing, slopes.back() > 0.
  static YoungFn piecewiseLinear(std::vector<double> kinks,
                                 std::vector<double> slopes);
  static YoungFn expMinusOne();  // (e^t - 1)/(e - 1), normalized; not Delta_2

  struct CustomSpec {
    std::function<double(double)> phi;
    double c_minus = 0, c_plus = 0;  // one-sided derivatives at 1 (declared)
    bool delta2 = false;             // declared by the constructor
  };
  static YoungFn custom(CustomSpec spec);

  double evalPhi(double t) const;  // t >= 0
  // Generalized inverse inf{t : phi(t) >= s}; invPhi(0) = sup{t : phi(t) = 0}.
  double invPhi(double s) const;   // s >= 0
  // (c_minus, c_plus): exact for the closed-form variants, extrapolated
  // symmetric secants for Custom.
  std::pair<double, double> derivsAt1() const;
  bool isDelta2() const;
  bool normalized() const;         // phi(1) == 1 exactly
  // Copy scaled by 1/phi(1); the result satisfies phi(1) = 1 exactly.
  YoungFn normalize() const;

  YoungKind kind() const { return kind_; }
  double param() const { return param_; }  // exponent for Power
  // kink locations of the piecewise-linear variant (empty otherwise)
  const std::vector<double>& kinks() const { return kinks_; }
  // phi grows like t^p: 1 for Identity/PiecewiseLinear, c for Power;
  // empty for essentially-exponential growth (used by analytic membership).
  std::optional<double> polyGrowthOrder() const;

 private:
  YoungFn() = default;
  double raw(double t) const;  // before the normalization divisor

  YoungKind kind_ = YoungKind::Identity;
  double param_ = 1;
  std::vector<double> kinks_, slopes_, kink_vals_;  // raw values at kinks
  std::function<double(double)> fn_;
  double cm_ = 1, cp_ = 1;  // raw one-sided derivatives at 1
  bool delta2_ = true;
  double div_ = 1;   // phi(t) = raw(t) / div_
  double raw1_ = 1;  // raw(1), evaluated once at run time
};

}  // namespace riskq
