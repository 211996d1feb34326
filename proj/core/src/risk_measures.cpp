#include "riskq/risk_measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "gintegral.hpp"
#include "quadrature.hpp"
#include "riskq/orders.hpp"

namespace riskq {

namespace {

// rho_g as a signed pair of nonnegative integrals
double rhoSigned(const Distribution& d, const DistortionFn& g) {
  ExtendedValue pos = detail::integrateQuantileMap(
      d, g, [](double q) { return std::max(q, 0.0); },
      /*upper*/ true, /*lower*/ false);
  ExtendedValue neg = detail::integrateQuantileMap(
      d, g, [](double q) { return std::max(-q, 0.0); },
      /*upper*/ false, /*lower*/ true);
  if (pos.isInf() || neg.isInf())
    throw NotInSpaceError("distortionRho: risk is not in L_g (divergent tail)");
  return pos.value() - neg.value();
}

// Exact x-space integral for step quantiles:
//   -int_{-inf}^0 (1 - w(S(x))) dx + int_0^inf w(S(x)) dx
// for a survival weighting w with w(1) = 1 and w(0) = 0.
template <class W>
double stepSurvivalIntegral(const StepView& sv, W&& w) {
  const size_t m = sv.breaks.size();
  for (double v : sv.values)
    if (!std::isfinite(v))
      throw NotInSpaceError("survival representation diverges on an infinite piece");
  double total = 0;
  if (sv.values.front() > 0) total += sv.values.front();
  if (sv.values.back() < 0) total += sv.values.back();
  for (size_t j = 0; j + 1 < m; ++j) {
    double s_j = 1.0 - sv.breaks[j];  // survival on [p_j, p_{j+1})
    double wj = w(s_j);
    double p0 = sv.values[j], p1 = sv.values[j + 1];
    double pos_len = std::max(p1, 0.0) - std::max(p0, 0.0);
    double neg_len = std::min(p1, 0.0) - std::min(p0, 0.0);
    total += wj * pos_len - (1.0 - wj) * neg_len;
  }
  return total;
}

// Quadrature with a doubling tail for the unbounded ends of the x-space
// representation.  integrand >= 0 and -> 0 in the tail direction.
double tailQuadrature(const detail::Fn& f, double from, bool upward,
                      const std::vector<double>& cuts) {
  double total = 0;
  double t_prev = from;
  double step = 1.0;
  double prev_inc = kInf;
  int flat = 0;
  for (int k = 0; k < 80; ++k) {
    double t_next = upward ? t_prev + step : t_prev - step;
    double lo = std::min(t_prev, t_next), hi = std::max(t_prev, t_next);
    auto out = detail::gkPiecewise(f, lo, hi, cuts, 1e-12, 1e-14, 256);
    if (!out.finite)
      throw NotInSpaceError("survival representation: non-finite integrand");
    total += out.value;
    double inc = std::abs(out.value);
    if (std::abs(total) > 1e12)
      throw NotInSpaceError("survival representation diverges");
    if (inc <= std::max(1e-13, 1e-11 * std::max(1.0, std::abs(total)))) {
      double r = (std::isfinite(prev_inc) && prev_inc > 0)
                     ? std::min(inc / prev_inc, 0.9)
                     : 0.5;
      return total + out.value * r / (1.0 - r);
    }
    flat = (inc >= prev_inc * 0.999) ? flat + 1 : 0;
    if (flat >= 6)
      throw NotInSpaceError("survival representation diverges (non-Cauchy tail)");
    prev_inc = inc;
    t_prev = t_next;
    step *= 2;
  }
  throw AccuracyError("survival representation: tail quadrature exhausted",
                      prev_inc);
}

}  // namespace

double varAt(const Distribution& d, double alpha) {
  if (!(alpha > 0 && alpha <= 1)) throw DomainError("varAt: alpha outside (0,1]");
  return d.quantile(alpha);
}

double distortionRho(const Distribution& d, const DistortionFn& g) {
  return rhoSigned(d, g);
}

double distortionRhoSurvival(const Distribution& d, const DistortionFn& g) {
  auto weight = [&g](double s) { return g.evalGLeft(s); };
  if (auto sv = d.stepView()) return stepSurvivalIntegral(*sv, weight);

  // x-locations where g(S(x)-) jumps: survival crossing an atom of g
  std::vector<double> cuts = d.supportPoints();
  for (const auto& a : g.atoms())
    if (a.location > 0 && a.location < 1)
      cuts.push_back(d.quantile(1.0 - a.location));
  std::sort(cuts.begin(), cuts.end());

  double ess_inf = d.essInf(), ess_sup = d.essSup();
  auto pos_f = [&](double x) { return g.evalGLeft(d.survival(x)); };
  auto neg_f = [&](double x) { return 1.0 - g.evalGLeft(d.survival(x)); };

  double total = 0;
  // positive half-line
  if (ess_sup > 0) {
    if (std::isfinite(ess_sup)) {
      auto out = detail::gkPiecewise(pos_f, 0.0, ess_sup, cuts, 1e-12, 1e-13, 4000);
      if (!out.finite) throw NotInSpaceError("survival representation diverges");
      total += out.value;
    } else {
      double mid = std::max(1.0, d.quantile(0.75));
      auto out = detail::gkPiecewise(pos_f, 0.0, mid, cuts, 1e-12, 1e-13, 4000);
      total += out.value + tailQuadrature(pos_f, mid, /*upward*/ true, cuts);
    }
  }
  // negative half-line
  if (ess_inf < 0) {
    if (std::isfinite(ess_inf)) {
      auto out = detail::gkPiecewise(neg_f, ess_inf, 0.0, cuts, 1e-12, 1e-13, 4000);
      if (!out.finite) throw NotInSpaceError("survival representation diverges");
      total -= out.value;
    } else {
      double mid = std::min(-1.0, d.quantile(0.25));
      auto out = detail::gkPiecewise(neg_f, mid, 0.0, cuts, 1e-12, 1e-13, 4000);
      total -= out.value + tailQuadrature(neg_f, mid, /*upward*/ false, cuts);
    }
  }
  return total;
}

double tvar(const Distribution& d, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("tvar: alpha outside (0,1)");
  return distortionRho(d, DistortionFn::tvarClamp(alpha));
}

double tvarRU(const Distribution& d, double alpha, double tol) {
  if (!(alpha > 0 && alpha < 1)) throw DomainError("tvarRU: alpha outside (0,1)");
  double x_star = d.quantile(alpha);
  auto objective = [&](double x) -> double {
    ExtendedValue sl = stopLoss(d, x);
    if (sl.isInf()) throw NotInSpaceError("tvarRU: stop-loss diverges");
    return sl.value() / (1.0 - alpha) + x;
  };
  double value = objective(x_star);
  // the quantile is the known minimizer; assert local optimality
  double eps = std::max(1e-6, 1e-6 * std::abs(x_star));
  if (objective(x_star + eps) < value - tol ||
      objective(x_star - eps) < value - tol)
    throw AccuracyError("tvarRU: objective not locally optimal at the quantile",
                        tol);
  return value;
}

double hgSigma(const Distribution& d, const DistortionFn& g, const YoungFn& phi,
               double alpha, double x, double tol) {
  if (!(alpha < 1)) throw DomainError("hgSigma: alpha must be < 1");
  detail::ExcessPsiEvaluator ev(d, g, phi);
  PremiumOptions popts;
  popts.tol = tol;
  return detail::solvePremium(ev, x, alpha, popts).value + x;
}

// ---------------------------------------------------------------------------

HGResult distortionHG(const Distribution& d, const DistortionFn& g,
                      const YoungFn& phi, double alpha, const HGOptions& opts) {
  if (!phi.normalized())
    throw DomainError("distortionHG: phi must be normalized (phi(1) = 1)");
  if (!(alpha >= 0 && alpha < 1))
    throw DomainError("distortionHG: alpha outside [0,1)");

  detail::ExcessPsiEvaluator ev(d, g, phi);
  PremiumOptions popts;
  popts.tol = opts.tol;

  HGResult res;
  auto sigma = [&](double x) {
    ++res.iterations;
    return detail::solvePremium(ev, x, alpha, popts).value + x;
  };

  const double rho = rhoSigned(d, g);
  const double ess_sup = d.essSup(), ess_inf = d.essInf();

  if (alpha > 0) {
    res.mode = HGMode::Minimized;
    double q = phi.invPhi(1.0 - alpha);  // < 1 for normalized phi
    double upper = std::isfinite(ess_sup) ? ess_sup : varAt(d, 1.0 - 1e-6);
    double sigma0 = sigma(0.0);
    double lower =
        (q < 1.0) ? (rho / q - sigma0) / (1.0 / q - 1.0) : upper - 1.0;
    if (!(lower <= upper)) lower = upper - std::max(1.0, std::abs(upper));

    double best_x = upper, best_f = kInf;
    auto probe = [&](double x) {
      double f = sigma(x);
      if (f < best_f) best_f = f, best_x = x;
      return f;
    };

    // for unbounded risks the quantile proxy may sit left of the minimizer
    if (!std::isfinite(ess_sup)) {
      int expand = 0;
      while (expand++ < 40 &&
             probe(upper) < probe(upper - 0.01 * (upper - lower)))
        upper += std::max(1.0, upper - lower);
    }

    double a = lower, b = upper;
    const double xscale = std::max({1.0, std::abs(a), std::abs(b)});
    probe(a);
    probe(b);
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = probe(x1), f2 = probe(x2);
    int golden_iters = 0;
    while (golden_iters++ < opts.max_iterations) {
      if (b - a <= opts.xtol * xscale && std::abs(f1 - f2) <= opts.ftol) break;
      if (f1 <= f2) {
        b = x2, x2 = x1, f2 = f1;
        x1 = b - gr * (b - a);
        f1 = probe(x1);
      } else {
        a = x1, x1 = x2, f1 = f2;
        x2 = a + gr * (b - a);
        f2 = probe(x2);
      }
    }
    // the minimum of a convex sigma over an empirical risk often sits exactly
    // on a support point; probing them inside the final bracket can only
    // lower the reported value
    double pad = std::max(b - a, opts.xtol * xscale);
    auto support = d.supportPoints();
    auto lo_it = std::lower_bound(support.begin(), support.end(), a - pad);
    auto hi_it = std::upper_bound(support.begin(), support.end(), b + pad);
    for (auto it = lo_it; it != hi_it; ++it) probe(*it);

    res.value = best_f;
    res.minimizer = best_x;
    res.sigma_at_minimizer = best_f;
    // location bounds for the minimizer (with Y1 = Y2 = X)
    double slack = std::max(1e-7 * xscale, 10 * opts.xtol * xscale);
    double loc_lo = (rho - q * res.value) / (1.0 - q);
    res.converged =
        best_x <= res.value + slack && best_x >= loc_lo - slack;
    return res;
  }

  // alpha = 0: sigma is increasing, so the value is its limit at -inf
  auto [cm, cp] = phi.derivsAt1();
  double rho_pos = rhoSigned(d.positivePart(), g);
  double rho_negneg = rhoSigned(d.negativePartNeg(), g);
  res.bounds = {{rho, (cp / cm) * rho_pos + (cm / cp) * rho_negneg}};

  double scale = std::max(
      1.0, std::abs(std::isfinite(ess_sup) ? ess_sup : varAt(d, 1.0 - 1e-6)));
  if (opts.allow_shortcut && phi.isDelta2() && cp - cm <= 1e-12 * cp) {
    res.mode = HGMode::ShortcutRhoG;
    res.value = rho;
    double x_confirm = (std::isfinite(ess_inf) ? ess_inf : -1.0) - scale;
    double s_confirm = sigma(x_confirm);
    res.sigma_at_minimizer = s_confirm;
    res.converged = s_confirm >= res.value - 1e-6 * scale &&
                    s_confirm <= res.bounds->second + 1e-6 * scale;
    return res;
  }

  res.mode = HGMode::Limit;
  // premium errors must stay absolute along the schedule, or the sigma
  // differences drown in bracket noise that grows with |x|
  popts.abs_tol = 0.125 * opts.ftol;
  double x0 = std::isfinite(ess_inf) ? ess_inf : -1.0;
  double prev = sigma(x0);
  std::vector<double> trail{prev};
  for (int k = 0; k < opts.max_steps; ++k) {
    double x_k = x0 - std::ldexp(scale, k);  // x0 - 2^k * s
    double cur = sigma(x_k);
    trail.push_back(cur);
    if (std::abs(cur - prev) <= opts.ftol) {
      res.value = cur;
      res.sigma_at_minimizer = cur;
      return res;
    }
    prev = cur;
  }
  std::ostringstream msg;
  msg << "distortionHG: limit schedule did not stabilize; last sigma values:";
  for (size_t i = trail.size() >= 5 ? trail.size() - 5 : 0; i < trail.size(); ++i)
    msg << ' ' << trail[i];
  throw NonConvergenceError(msg.str());
}

// ---------------------------------------------------------------------------

double choquetIntegral(const Distribution& discrete, const DistortionFn& h) {
  if (h.evalG(0.0) != 0.0)
    throw DomainError("choquetIntegral: capacity requires h(0) = 0");
  auto sv = discrete.stepView();
  if (!sv)
    throw UnsupportedError("choquetIntegral: discrete risks only");
  return stepSurvivalIntegral(*sv, [&h](double s) { return h.evalG(s); });
}

double rdeu(const Distribution& d, const YoungFn& phi, const DistortionFn& h) {
  if (!(d.essInf() >= 0)) throw DomainError("rdeu: risk must be nonnegative");
  auto sv = d.stepView();
  if (!sv) throw UnsupportedError("rdeu: discrete risks only");
  // U(-X) = -phi(X) on the same sample weights
  std::vector<double> points(sv->values.size()), probs(sv->values.size());
  double prev = 0;
  for (size_t j = 0; j < sv->values.size(); ++j) {
    points[j] = -phi.evalPhi(sv->values[j]);
    probs[j] = sv->breaks[j] - prev;
    prev = sv->breaks[j];
  }
  return choquetIntegral(Distribution::discrete(points, probs), h);
}

double rdeuQuantileSide(const Distribution& d, const YoungFn& phi,
                        const DistortionFn& h) {
  if (!(d.essInf() >= 0))
    throw DomainError("rdeuQuantileSide: risk must be nonnegative");
  if (h.evalG(0.0) != 0.0)
    throw DomainError("rdeuQuantileSide: capacity requires h(0) = 0");
  auto sv = d.stepView();
  if (!sv) throw UnsupportedError("rdeuQuantileSide: discrete risks only");
  // weights of g(u) = 1 - h((1-u)-): g(u-) = 1 - h(1-u), so piece masses of
  // [t_k, t_{k+1}) are h(1-t_k) - h(1-t_{k+1})
  const size_t m = sv->breaks.size();
  double total = 0;
  double t = 0.0;
  for (size_t k = 0; k < m; ++k) {
    size_t j = m - 1 - k;
    double t_next = (j >= 1) ? 1.0 - sv->breaks[j - 1] : 1.0;
    double w = h.evalG(1.0 - t) - h.evalG(1.0 - t_next);
    total += w * phi.evalPhi(sv->values[j]);
    t = t_next;
  }
  return -total;
}

}  // namespace riskq
