#include "riskq/premium.hpp"

#include <algorithm>
#include <cmath>

#include "gintegral.hpp"

namespace riskq {

namespace detail {

PremiumResult solvePremium(const ExcessPsiEvaluator& ev, double x, double alpha,
                           const PremiumOptions& opts) {
  const Distribution& d = ev.dist();
  const DistortionFn& g = ev.distortion();
  const YoungFn& phi = ev.young();
  const double target = 1.0 - alpha;  // > 0

  PremiumResult r;
  // zero short-circuit: Y = (X-x)^+ is the zero risk, or g vanishes on
  // [0, P(Y > 0)); then psi = 0 everywhere and the infimum 0 is not attained
  double ess_sup_y = std::max(d.essSup() - x, 0.0);
  if (ess_sup_y == 0.0 || g.evalGLeft(d.survival(x)) == 0.0) return r;

  auto bound = ev.bind(x);

  // single charged piece: psi(a) = phi(e/a), exact inverse
  if (!opts.force_bisection) {
    if (auto e = bound.singleChargedExcess()) {
      if (std::isinf(*e))
        throw NotInSpaceError("premium: infinite excess carries all the mass");
      r.value = *e / phi.invPhi(target);
      r.attained = r.value > 0;
      r.achieved_equality = r.value > 0;
      r.bracket_lo = r.bracket_hi = r.value;
      return r;
    }
  }

  // power-family phi: psi(a) = S / a^c solves in closed form
  if (!opts.force_bisection && (phi.kind() == YoungKind::Identity ||
                                phi.kind() == YoungKind::Power)) {
    double c = (phi.kind() == YoungKind::Power) ? phi.param() : 1.0;
    ExtendedValue s = bound.momentPow(c);
    if (s.isInf())
      throw NotInSpaceError(
          "premium: psi diverges at every scale (power-type phi is Delta_2)");
    r.value = std::pow(s.value() / target, 1.0 / c);
    r.attained = r.value > 0;
    r.achieved_equality = r.value > 0;
    r.bracket_lo = r.bracket_hi = r.value;
    return r;
  }

  auto psiAt = [&bound](double a) { return bound.psi(a); };
  double qinv = phi.invPhi(target);
  int iters = 0;

  // upper end of the bracket: psi(a_hi) <= target
  double a_hi;
  ExtendedValue psi_hi;
  if (std::isfinite(ess_sup_y)) {
    a_hi = ess_sup_y / qinv;
    psi_hi = psiAt(a_hi), ++iters;
    int guard = 0;
    while ((psi_hi.isInf() || psi_hi.value() > target) && guard++ < 16)
      a_hi *= 2, psi_hi = psiAt(a_hi), ++iters;
    if (psi_hi.isInf() || psi_hi.value() > target)
      throw NonConvergenceError("premium: no upper bracket above essSup/invPhi");
  } else {
    a_hi = 1.0;
    psi_hi = psiAt(a_hi), ++iters;
    int doublings = 0;
    while (psi_hi.isInf() || psi_hi.value() > target) {
      if (psi_hi.isInf() && phi.isDelta2())
        throw NotInSpaceError(
            "premium: psi infinite and phi is Delta_2, so psi is infinite "
            "for every scale");
      if (psi_hi.isInf() && doublings >= 20)
        throw NotInSpaceError(
            "premium: no finite psi value for a up to 2^20");
      if (++doublings > 140)
        throw NonConvergenceError("premium: upper bracket search exhausted");
      a_hi *= 2, psi_hi = psiAt(a_hi), ++iters;
    }
  }

  // lower end from the Jensen envelope rho_g(Y)/invPhi(1-alpha) <= premium
  ExtendedValue rho_y = bound.momentPow(1.0);
  if (rho_y.isInf())
    throw NotInSpaceError("premium: rho_g of the excess risk is infinite");
  double a_lo = std::max(rho_y.value() / qinv, 1e-300);
  if (a_lo > a_hi) a_lo = a_hi;
  ExtendedValue psi_lo = psiAt(a_lo);
  ++iters;
  int halvings = 0;
  while (!psi_lo.isInf() && psi_lo.value() <= target) {
    // the premium sits at or below a_lo; shift the bracket down
    a_hi = a_lo;
    psi_hi = psi_lo;
    a_lo *= 0.5;
    psi_lo = psiAt(a_lo), ++iters;
    if (++halvings > 1100) break;  // cannot happen: psi -> inf as a -> 0
  }

  // bracketed root search on psi(a) - target: regula falsi alternated with
  // plain bisection so the bracket provably halves every other step
  double f_lo = psi_lo.isInf() ? kInf : psi_lo.value() - target;
  double f_hi = psi_hi.value() - target;
  auto widthTarget = [&]() {
    double w = opts.tol * std::max(1.0, a_hi);
    if (opts.abs_tol > 0) w = std::min(w, opts.abs_tol);
    return std::max(w, 4e-16 * a_hi);  // floating-point floor
  };
  while (a_hi - a_lo > widthTarget() && iters < opts.max_iterations) {
    double mid;
    if (iters % 2 == 1 && std::isfinite(f_lo) && f_lo > 0 && f_hi < 0) {
      mid = (a_lo * f_hi - a_hi * f_lo) / (f_hi - f_lo);
      double w = a_hi - a_lo;
      mid = std::min(std::max(mid, a_lo + 0.05 * w), a_hi - 0.05 * w);
    } else {
      mid = 0.5 * (a_lo + a_hi);
    }
    ExtendedValue pm = psiAt(mid);
    ++iters;
    double fm = pm.isInf() ? kInf : pm.value() - target;
    if (fm <= 0) {
      a_hi = mid;
      f_hi = fm;
    } else {
      a_lo = mid;
      f_lo = fm;
    }
  }

  r.value = 0.5 * (a_lo + a_hi);
  r.attained = r.value > 0;
  r.bracket_lo = a_lo;
  r.bracket_hi = a_hi;
  r.iterations = iters;
  ExtendedValue check = psiAt(r.value);
  r.achieved_equality =
      check.isFinite() &&
      std::abs(check.value() - target) <= 10 * opts.tol * std::max(1.0, target);
  return r;
}

}  // namespace detail

ExtendedValue psi(const Distribution& d, const DistortionFn& g,
                  const YoungFn& phi, double a) {
  if (!(a > 0)) throw DomainError("psi: a must be positive");
  if (!(d.essInf() >= 0)) throw DomainError("psi: risk must be nonnegative");
  detail::ExcessPsiEvaluator ev(d, g, phi);
  return ev.bind(0.0).psi(a);
}

PremiumResult orliczLorentzPremium(const Distribution& d, const DistortionFn& g,
                                   const YoungFn& phi, double alpha,
                                   const PremiumOptions& opts) {
  if (!(alpha < 1)) throw DomainError("premium: alpha must be < 1");
  if (!(d.essInf() >= 0)) throw DomainError("premium: risk must be nonnegative");
  detail::ExcessPsiEvaluator ev(d, g, phi);
  return detail::solvePremium(ev, 0.0, alpha, opts);
}

PremiumResult orliczPremium(const Distribution& d, const YoungFn& phi,
                            double alpha, const PremiumOptions& opts) {
  return orliczLorentzPremium(d, DistortionFn::identity(), phi, alpha, opts);
}

PremiumResult luxemburgNorm(const Distribution& d, const YoungFn& phi,
                            const PremiumOptions& opts) {
  return orliczLorentzPremium(d, DistortionFn::identity(), phi, 0.0, opts);
}

MembershipResult membership(const Distribution& d, const DistortionFn& g,
                            const YoungFn& phi) {
  if (std::isfinite(d.essInf()) && std::isfinite(d.essSup()))
    return {MembershipStatus::Member, "bounded risk"};

  // analytic comparison for exponential-type lower tails against a density
  // decaying like exp(-c/(1-u)) near 1
  const TailHint& hint = d.tailHint();
  if (hint.exp_inv_growth_lower && g.expInvDecayAtOne()) {
    if (auto p = phi.polyGrowthOrder()) {
      double growth = *hint.exp_inv_growth_lower * *p;
      double decay = *g.expInvDecayAtOne();
      if (growth >= decay)
        return {MembershipStatus::NotMember,
                "analytic tail comparison: quantile growth dominates the "
                "density decay"};
      if (std::isfinite(d.essSup()))
        return {MembershipStatus::Member,
                "analytic tail comparison: density decay dominates"};
    }
  }

  int divergent = 0, inconclusive = 0;
  for (int k = 0; k <= 20; ++k) {
    double a = std::pow(2.0, k);
    ExtendedValue val;
    try {
      val = detail::integrateQuantileMap(
          d, g,
          [&phi, a](double q) { return phi.evalPhi(std::abs(q) / a); },
          /*upper*/ true, /*lower*/ true);
    } catch (const AccuracyError&) {
      ++inconclusive;
      continue;
    }
    if (val.isFinite())
      return {MembershipStatus::Member,
              "finite integral at a = 2^" + std::to_string(k)};
    ++divergent;
    if (phi.isDelta2())
      return {MembershipStatus::NotMember,
              "divergent integral with Delta_2 phi: one probe decides"};
  }
  if (inconclusive == 0)
    return {MembershipStatus::NotMember,
            "divergence detected at every probed scale up to 2^20"};
  return {MembershipStatus::Unknown,
          std::to_string(inconclusive) + " of 21 probes inconclusive"};
}

}  // namespace riskq
