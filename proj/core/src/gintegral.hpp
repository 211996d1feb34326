#pragma once

// Internal bridge between distributions and mu_g integration: reflected step
// profiles with precomputed piece masses, the generic quantile-map integral,
// and an evaluator that amortizes both across the excess levels x that the
// risk-measure minimizers sweep.

#include <cmath>
#include <functional>
#include <optional>

#include "riskq/distortion.hpp"
#include "riskq/distribution.hpp"
#include "riskq/premium.hpp"
#include "riskq/young.hpp"

namespace riskq::detail {

// mu_g piece masses of the reflected step quantile u -> Q(1-u):
//   integral of h(Q(1-u)) dmu_g = sum_k w[k] * h(v[k]),
// with v nonincreasing (v[0] = Q(1)) and sum w = 1 exactly.
struct StepProfile {
  std::vector<double> w;
  std::vector<double> v;
};

inline StepProfile makeStepProfile(const StepView& sv, const DistortionFn& g) {
  StepProfile p;
  const size_t m = sv.breaks.size();
  p.w.reserve(m);
  p.v.reserve(m);
  double gl_prev = 0.0;  // evalGLeft(0)
  for (size_t k = 0; k < m; ++k) {
    size_t j = m - 1 - k;
    double end = (j >= 1) ? 1.0 - sv.breaks[j - 1] : 1.0;
    double gl_next = (end >= 1.0) ? 1.0 : g.evalGLeft(end);
    double w = std::max(gl_next - gl_prev, 0.0);
    gl_prev = gl_next;
    if (w > 0.0) {
      p.w.push_back(w);
      p.v.push_back(sv.values[j]);
    }
  }
  return p;
}

// Integral of h(Q_d(1-u)) dmu_g.  The flags say whether |h(q)| blows up as q
// approaches an infinite essSup (upper tail; integrand edge u=0) or an
// infinite essInf (lower tail; edge u=1).
inline ExtendedValue integrateQuantileMap(const Distribution& d,
                                          const DistortionFn& g,
                                          const std::function<double(double)>& h,
                                          bool unbounded_upper_tail,
                                          bool unbounded_lower_tail,
                                          const QuadOptions& opts = {},
                                          const std::vector<double>& extra_breaks = {}) {
  if (auto sv = d.stepView()) {
    StepFunction f;
    const size_t m = sv->breaks.size();
    f.values.resize(m);
    f.cuts.resize(m - 1);
    for (size_t k = 0; k < m; ++k) {
      f.values[k] = h(sv->values[m - 1 - k]);
      if (k + 1 < m) f.cuts[k] = 1.0 - sv->breaks[m - 2 - k];
    }
    return integrateAgainstG(f, g);
  }
  Integrand ig;
  ig.f = [d, h](double u) {
    double q;
    if (u >= 1.0) q = d.essInf();
    else if (u <= 0.5) q = d.quantileUpper(u);  // stable deep in the tail
    else q = d.quantile(1.0 - u);
    return h(q);
  };
  for (double b : d.quantileBreakpoints()) ig.breakpoints.push_back(1.0 - b);
  for (double b : extra_breaks)
    if (b > 0.0 && b < 1.0) ig.breakpoints.push_back(b);
  std::sort(ig.breakpoints.begin(), ig.breakpoints.end());
  ig.unbounded_near0 = unbounded_upper_tail && std::isinf(d.essSup());
  ig.unbounded_near1 = unbounded_lower_tail && std::isinf(d.essInf());
  return integrateAgainstG(ig, g, opts);
}

// Premium integrals for the excess family (X-x)^+ over fixed (d, g, phi).
// For step quantiles the mu_g masses are computed once; bind(x) then gives
// O(n) evaluations of psi and of the power moments across solver iterations.
class ExcessPsiEvaluator {
 public:
  ExcessPsiEvaluator(Distribution d, DistortionFn g, YoungFn phi,
                     QuadOptions opts = {})
      : d_(std::move(d)), g_(std::move(g)), phi_(std::move(phi)), opts_(opts) {
    if (auto sv = d_.stepView()) profile_ = makeStepProfile(*sv, g_);
  }

  const Distribution& dist() const { return d_; }
  const DistortionFn& distortion() const { return g_; }
  const YoungFn& young() const { return phi_; }
  const QuadOptions& quadOptions() const { return opts_; }

  class Bound {
   public:
    Bound(const ExcessPsiEvaluator& ev, double x) : ev_(ev), x_(x) {
      if (ev_.profile_) {
        const auto& p = *ev_.profile_;
        e_.resize(p.v.size());
        for (size_t i = 0; i < e_.size(); ++i)
          e_[i] = std::max(p.v[i] - x_, 0.0);  // (-inf - x)^+ = 0
      }
    }

    // psi(a) = integral of phi((Q(1-u)-x)^+ / a) dmu_g
    ExtendedValue psi(double a) const {
      if (ev_.profile_) {
        const auto& w = ev_.profile_->w;
        double total = 0;
        for (size_t i = 0; i < w.size(); ++i) {
          double t = e_[i] / a;
          if (std::isinf(t)) return infinitePiece();
          total += w[i] * ev_.phi_.evalPhi(t);
        }
        if (std::isinf(total)) return infinitePiece();
        return total;
      }
      const YoungFn& phi = ev_.phi_;
      double x = x_;
      // the positive part kinks the integrand at u = P(X > x), and each kink
      // t of phi maps to u = P(X > x + a t)
      std::vector<double> kinks{ev_.d_.survival(x_)};
      for (double t : phi.kinks()) kinks.push_back(ev_.d_.survival(x_ + a * t));
      return integrateQuantileMap(
          ev_.d_, ev_.g_,
          [&phi, x, a](double q) { return phi.evalPhi(std::max(q - x, 0.0) / a); },
          /*upper*/ true, /*lower*/ false, ev_.opts_, kinks);
    }

    // When exactly one piece carries all of mu_g (pure-atom distortions,
    // constant risks), psi(a) = phi(e/a) and the premium is e/invPhi(1-alpha)
    // in closed form.
    std::optional<double> singleChargedExcess() const {
      if (ev_.profile_ && e_.size() == 1 && ev_.profile_->w[0] == 1.0)
        return e_[0];
      return std::nullopt;
    }

    // integral of ((Q(1-u)-x)^+)^c dmu_g
    ExtendedValue momentPow(double c) const {
      if (ev_.profile_) {
        const auto& w = ev_.profile_->w;
        double total = 0;
        for (size_t i = 0; i < w.size(); ++i) {
          double e = e_[i];
          if (std::isinf(e)) return infinitePiece();
          total += w[i] * (c == 1.0 ? e : (c == 2.0 ? e * e : std::pow(e, c)));
        }
        return total;
      }
      double x = x_;
      return integrateQuantileMap(
          ev_.d_, ev_.g_,
          [x, c](double q) { return std::pow(std::max(q - x, 0.0), c); },
          /*upper*/ true, /*lower*/ false, ev_.opts_, {ev_.d_.survival(x_)});
    }

   private:
    static ExtendedValue infinitePiece() {
      return ExtendedValue::infinite(
          {0, kInf, "infinite excess value with positive mass"});
    }
    const ExcessPsiEvaluator& ev_;
    double x_;
    std::vector<double> e_;
  };

  Bound bind(double x) const { return Bound(*this, x); }

 private:
  friend class Bound;
  Distribution d_;
  DistortionFn g_;
  YoungFn phi_;
  QuadOptions opts_;
  std::optional<StepProfile> profile_;
};

// The premium of (X - x)^+ for the evaluator's (d, g, phi); shared by the
// public premium entry points and the risk-measure minimizers.
PremiumResult solvePremium(const ExcessPsiEvaluator& ev, double x, double alpha,
                           const PremiumOptions& opts);

}  // namespace riskq::detail
