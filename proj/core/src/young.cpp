#include "riskq/young.hpp"

#include <algorithm>
#include <cmath>

#include "riskq/extended.hpp"

namespace riskq {

YoungFn YoungFn::identity() {
  YoungFn y;
  y.kind_ = YoungKind::Identity;
  return y;
}

YoungFn YoungFn::power(double c) {
  if (!(c >= 1.0) || !std::isfinite(c))
    throw ValidationError("young power: exponent must be >= 1");
  YoungFn y;
  y.kind_ = YoungKind::Power;
  y.param_ = c;
  y.cm_ = y.cp_ = c;
  return y;
}

YoungFn YoungFn::piecewiseLinear(std::vector<double> kinks,
                                 std::vector<double> slopes) {
  if (slopes.size() != kinks.size() + 1)
    throw ValidationError("young pwlinear: need kinks.size()+1 slopes");
  for (size_t i = 0; i < kinks.size(); ++i)
    if (!(kinks[i] > 0) || (i > 0 && !(kinks[i] > kinks[i - 1])))
      throw ValidationError("young pwlinear: kinks must be positive ascending");
  for (size_t i = 0; i < slopes.size(); ++i) {
    if (!(slopes[i] >= 0)) throw ValidationError("young pwlinear: negative slope");
    if (i > 0 && !(slopes[i] >= slopes[i - 1]))
      throw ValidationError("young pwlinear: slopes must be nondecreasing");
  }
  if (!(slopes.back() > 0))
    throw ValidationError("young pwlinear: last slope must be positive");

  YoungFn y;
  y.kind_ = YoungKind::PiecewiseLinear;
  y.kinks_ = std::move(kinks);
  y.slopes_ = std::move(slopes);
  y.kink_vals_.resize(y.kinks_.size());
  double v = 0, prev = 0;
  for (size_t i = 0; i < y.kinks_.size(); ++i) {
    v += y.slopes_[i] * (y.kinks_[i] - prev);
    prev = y.kinks_[i];
    y.kink_vals_[i] = v;
  }
  // one-sided slopes at 1
  auto seg = [&](double t) {
    size_t i = 0;
    while (i < y.kinks_.size() && y.kinks_[i] < t) ++i;
    return i;
  };
  size_t right = seg(std::nextafter(1.0, 2.0));
  size_t left = seg(1.0);
  y.cm_ = y.slopes_[left];
  y.cp_ = y.slopes_[right];
  y.raw1_ = y.raw(1.0);
  return y;
}

YoungFn YoungFn::expMinusOne() {
  YoungFn y;
  y.kind_ = YoungKind::ExpMinusOne;
  // run-time libm value; a compile-time folded constant can differ by an ulp
  volatile double one = 1.0;
  y.raw1_ = std::expm1(one);
  y.div_ = y.raw1_;
  y.cm_ = y.cp_ = std::exp(one);
  y.delta2_ = false;
  return y;
}

YoungFn YoungFn::custom(CustomSpec spec) {
  if (!spec.phi) throw ValidationError("young custom: missing callable");
  if (std::abs(spec.phi(0.0)) > 1e-15)
    throw ValidationError("young custom: phi(0) must be 0");
  // monotonicity and midpoint convexity on a log grid, plus unboundedness
  double prev = 0.0;
  for (int k = -10; k <= 24; ++k) {
    double t = std::pow(2.0, k);
    double v = spec.phi(t);
    if (!(v >= prev - 1e-12 * std::max(1.0, v)))
      throw ValidationError("young custom: not increasing");
    double mid = spec.phi(0.75 * t);  // midpoint of [t/2, t]
    if (!(mid <= 0.5 * (spec.phi(0.5 * t) + v) + 1e-12 * std::max(1.0, v)))
      throw ValidationError("young custom: convexity check failed");
    prev = v;
  }
  if (!(spec.phi(std::pow(2.0, 24)) > 1e6))
    throw ValidationError("young custom: phi must be unbounded (phi(2^24) <= 1e6)");
  YoungFn y;
  y.kind_ = YoungKind::Custom;
  y.fn_ = std::move(spec.phi);
  y.delta2_ = spec.delta2;
  if (spec.c_minus > 0 || spec.c_plus > 0) {
    y.cm_ = spec.c_minus;
    y.cp_ = spec.c_plus;
  } else {
    // symmetric secants at h = 2^-k, Richardson-extrapolated
    auto secants = [&y](double dir) {
      double h = std::pow(2.0, -18);
      double d1 = dir * (y.fn_(1.0 + dir * h) - y.fn_(1.0)) / h;
      double d2 = dir * (y.fn_(1.0 + dir * h / 2) - y.fn_(1.0)) / (h / 2);
      return 2 * d2 - d1;
    };
    y.cm_ = secants(-1.0);
    y.cp_ = secants(+1.0);
  }
  volatile double one = 1.0;
  y.raw1_ = y.fn_(one);
  return y;
}

double YoungFn::raw(double t) const {
  switch (kind_) {
    case YoungKind::Identity:
      return t;
    case YoungKind::Power:
      return std::pow(t, param_);
    case YoungKind::ExpMinusOne:
      return std::expm1(t);
    case YoungKind::Custom:
      return fn_(t);
    case YoungKind::PiecewiseLinear: {
      if (std::isinf(t)) return kInf;
      auto it = std::lower_bound(kinks_.begin(), kinks_.end(), t);
      size_t i = static_cast<size_t>(it - kinks_.begin());
      double base = (i == 0) ? 0.0 : kink_vals_[i - 1];
      double from = (i == 0) ? 0.0 : kinks_[i - 1];
      return base + slopes_[i] * (t - from);
    }
  }
  return 0;
}

double YoungFn::evalPhi(double t) const {
  if (!(t >= 0)) throw DomainError("evalPhi: t must be nonnegative");
  if (std::isinf(t)) return kInf;
  return (t == 1.0 ? raw1_ : raw(t)) / div_;
}

double YoungFn::invPhi(double s) const {
  if (!(s >= 0)) throw DomainError("invPhi: s must be nonnegative");
  switch (kind_) {
    case YoungKind::Identity:
      return s * div_;
    case YoungKind::Power:
      return std::pow(s * div_, 1.0 / param_);
    case YoungKind::ExpMinusOne:
      return std::log1p(s * div_);
    case YoungKind::PiecewiseLinear: {
      double target = s * div_;
      if (target == 0.0) {
        // sup{t : phi(t) = 0}: end of the zero-slope prefix
        for (size_t i = 0; i < slopes_.size(); ++i)
          if (slopes_[i] > 0) return i == 0 ? 0.0 : kinks_[i - 1];
        return kInf;  // unreachable: the last slope is positive
      }
      auto it = std::lower_bound(kink_vals_.begin(), kink_vals_.end(), target);
      size_t i = static_cast<size_t>(it - kink_vals_.begin());
      if (i < kink_vals_.size() && kink_vals_[i] == target) return kinks_[i];
      double base = (i == 0) ? 0.0 : kink_vals_[i - 1];
      double from = (i == 0) ? 0.0 : kinks_[i - 1];
      return from + (target - base) / slopes_[i];
    }
    case YoungKind::Custom: {
      double target = s * div_;
      if (target == 0.0) {
        double hi = 1.0;
        while (fn_(hi) == 0.0) hi *= 2;
        double lo = 0.0;
        for (int i = 0; i < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++i) {
          double m = 0.5 * (lo + hi);
          (fn_(m) == 0.0 ? lo : hi) = m;
        }
        return fn_(1e-300) == 0.0 ? lo : 0.0;
      }
      double hi = 1.0;
      while (hi < 1e300 && fn_(hi) < target) hi *= 2;
      if (!(fn_(hi) >= target))
        throw NonConvergenceError("invPhi: no bracket found for custom phi");
      double lo = 0.0;
      for (int i = 0; i < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++i) {
        double m = 0.5 * (lo + hi);
        (fn_(m) >= target ? hi : lo) = m;
      }
      return hi;
    }
  }
  return 0;
}

std::pair<double, double> YoungFn::derivsAt1() const {
  return {cm_ / div_, cp_ / div_};
}

bool YoungFn::isDelta2() const { return delta2_; }

bool YoungFn::normalized() const { return raw1_ / div_ == 1.0; }

YoungFn YoungFn::normalize() const {
  if (!(raw1_ > 0)) throw DomainError("normalize: phi(1) must be positive");
  YoungFn y = *this;
  y.div_ = raw1_;
  return y;
}

std::optional<double> YoungFn::polyGrowthOrder() const {
  switch (kind_) {
    case YoungKind::Identity:
      return 1.0;
    case YoungKind::Power:
      return param_;
    case YoungKind::PiecewiseLinear:
      return 1.0;
    default:
      return std::nullopt;
  }
}

}  // namespace riskq
