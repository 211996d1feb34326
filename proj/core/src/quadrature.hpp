#pragma once

// Internal quadrature engine: adaptive Gauss-Kronrod 7/15 with breakpoint
// splitting, plus a truncated-integral ladder for integrands that are
// singular at an interval edge (geometric tail extrapolation, divergence
// classification).

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "riskq/distortion.hpp"
#include "riskq/errors.hpp"
#include "riskq/extended.hpp"

namespace riskq::detail {

using Fn = std::function<double(double)>;

struct QuadOut {
  double value = 0;
  double err = 0;
  bool finite = true;  // false if a node evaluated to +-inf/NaN
};

// One Gauss-Kronrod 7/15 panel on [a,b].
inline QuadOut gk15(const Fn& f, double a, double b) {
  static const double XGK[8] = {
      0.991455371120813, 0.949107912342759, 0.864864423359769,
      0.741531185599394, 0.586087235467691, 0.405845151377397,
      0.207784955007898, 0.000000000000000};
  static const double WGK[8] = {
      0.022935322010529, 0.063092092629979, 0.104790010322250,
      0.140653259715525, 0.169004726639267, 0.190350578064785,
      0.204432940075298, 0.209482141084728};
  static const double WG[4] = {0.129484966168870, 0.279705391489277,
                               0.381830050505119, 0.417959183673469};

  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double kron = WGK[7] * fc;
  double gauss = WG[3] * fc;
  QuadOut out;
  if (!std::isfinite(fc)) out.finite = false;
  for (int i = 0; i < 7; ++i) {
    double x = h * XGK[i];
    double f1 = f(c - x), f2 = f(c + x);
    if (!std::isfinite(f1) || !std::isfinite(f2)) out.finite = false;
    kron += WGK[i] * (f1 + f2);
    if (i % 2 == 1) gauss += WG[i / 2] * (f1 + f2);
  }
  kron *= h;
  gauss *= h;
  out.value = kron;
  double diff = std::abs(kron - gauss);
  out.err = diff * std::sqrt(std::max(diff, 1e-300)) * 200.0;
  out.err = std::min(out.err, diff * 200.0);
  if (!std::isfinite(out.value)) out.finite = false;
  return out;
}

// Adaptive subdivision until the summed error estimate meets tolerance.
inline QuadOut gkAdaptive(const Fn& f, double a, double b, double rel_tol,
                          double abs_tol, int max_panels) {
  struct Iv {
    double a, b, value, err;
    bool finite;
  };
  QuadOut first = gk15(f, a, b);
  std::vector<Iv> ivs{{a, b, first.value, first.err, first.finite}};
  int panels = 1;
  auto worst = [&]() {
    size_t w = 0;
    for (size_t i = 1; i < ivs.size(); ++i)
      if (ivs[i].err > ivs[w].err) w = i;
    return w;
  };
  while (panels < max_panels) {
    double total = 0, errsum = 0;
    bool finite = true;
    for (auto& iv : ivs) {
      total += iv.value;
      errsum += iv.err;
      finite = finite && iv.finite;
    }
    if (!finite) break;
    if (errsum <= std::max(abs_tol, rel_tol * std::abs(total))) break;
    size_t w = worst();
    Iv iv = ivs[w];
    if (iv.b - iv.a < 1e-15 * std::max(1.0, std::abs(iv.a))) break;
    double m = 0.5 * (iv.a + iv.b);
    QuadOut l = gk15(f, iv.a, m), r = gk15(f, m, iv.b);
    ivs[w] = {iv.a, m, l.value, l.err, l.finite};
    ivs.push_back({m, iv.b, r.value, r.err, r.finite});
    ++panels;
  }
  QuadOut out;
  for (auto& iv : ivs) {
    out.value += iv.value;
    out.err += iv.err;
    out.finite = out.finite && iv.finite;
  }
  return out;
}

// Integrate over [a,b], splitting at the given interior breakpoints.
inline QuadOut gkPiecewise(const Fn& f, double a, double b,
                           const std::vector<double>& pts, double rel_tol,
                           double abs_tol, int max_panels) {
  std::vector<double> cuts{a};
  for (double p : pts)
    if (p > a + 1e-15 && p < b - 1e-15) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  QuadOut out;
  int budget = std::max(max_panels / static_cast<int>(cuts.size()), 32);
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    QuadOut piece = gkAdaptive(f, cuts[i], cuts[i + 1], rel_tol,
                               abs_tol / static_cast<double>(cuts.size() - 1), budget);
    out.value += piece.value;
    out.err += piece.err;
    out.finite = out.finite && piece.finite;
  }
  return out;
}

enum class LadderStatus { Converged, Divergent, Inaccurate };

struct LadderOut {
  LadderStatus status = LadderStatus::Converged;
  double value = 0;
  double achieved = kInf;  // uncertainty bound when inaccurate
  int level = 0;
  double growth = 0;
};

// Integral of f over the interval between `fixed` and `edge` where f may be
// singular at `edge` (which is excluded).  Truncations approach the edge
// geometrically, t_k = edge + (fixed-edge) * 4^-k; divergence is classified
// from the increment-decay ratios at level 20; convergent tails keep
// refining as far as the floating-point grid allows and the remainder is
// extrapolated geometrically.
inline LadderOut edgeLadder(const Fn& f, double fixed, double edge,
                            const std::vector<double>& pts,
                            const QuadOptions& opts) {
  const int kDetectLevel = 20;
  LadderOut out;
  double total = 0;
  double prev_inc = kInf;
  double last_chunk = 0;
  std::vector<double> ratios;
  double t_prev = fixed;

  auto lastRatios = [&](double& rlo, double& rmid, double& rhi) {
    size_t n = ratios.size();
    double r1 = ratios[n - 3], r2 = ratios[n - 2], r3 = ratios[n - 1];
    rlo = std::min({r1, r2, r3});
    rhi = std::max({r1, r2, r3});
    rmid = r1 + r2 + r3 - rlo - rhi;
  };

  for (int k = 1; k <= 40; ++k) {
    double width = (fixed - edge) * std::pow(0.25, k);
    double t_k = edge + width;
    if (t_k == t_prev || t_k == edge) break;  // floating-point grid exhausted
    double lo = std::min(t_prev, t_k), hi = std::max(t_prev, t_k);
    QuadOut chunk = gkPiecewise(f, lo, hi, pts, opts.rel_tol, opts.abs_tol,
                                std::max(64, opts.max_panels / 24));
    out.level = k;
    if (!chunk.finite) {
      out.status = LadderStatus::Divergent;
      out.growth = kInf;
      return out;
    }
    total += chunk.value;
    double inc = std::abs(chunk.value);
    if (std::abs(total) > 1e12) {
      out.status = LadderStatus::Divergent;
      out.growth = std::abs(total);
      return out;
    }
    if (std::isfinite(prev_inc) && prev_inc > 0) ratios.push_back(inc / prev_inc);
    // No early acceptance: a zero or tiny increment is not conclusive, since
    // the integrand may put all of its mass arbitrarily close to the edge.
    if (k == kDetectLevel && ratios.size() >= 3) {
      double rlo, rmid, rhi;
      lastRatios(rlo, rmid, rhi);
      if (rmid >= 0.98) {
        out.status = LadderStatus::Divergent;
        out.growth = rmid;
        return out;
      }
    }
    prev_inc = inc;
    last_chunk = chunk.value;
    t_prev = t_k;
  }

  if (ratios.size() < 3) {
    out.status = LadderStatus::Inaccurate;
    out.achieved = prev_inc;
    return out;
  }
  double rlo, rmid, rhi;
  lastRatios(rlo, rmid, rhi);
  if (rmid >= 0.98) {
    out.status = LadderStatus::Divergent;
    out.growth = rmid;
    return out;
  }
  if (rhi < 0.95) {
    // geometric tail in the signed increments
    double tail_mid = last_chunk * rmid / (1.0 - rmid);
    double tail_hi = last_chunk * rhi / (1.0 - rhi);
    double tail_lo = last_chunk * rlo / (1.0 - rlo);
    double uncertainty = std::abs(tail_hi - tail_lo);
    double tol = std::max(opts.abs_tol * 1e3,
                          opts.rel_tol * 1e3 * std::max(1.0, std::abs(total)));
    if (uncertainty <= std::max(tol, 1e-10)) {
      out.value = total + tail_mid;
      out.achieved = uncertainty;
      return out;
    }
    out.status = LadderStatus::Inaccurate;
    out.achieved = uncertainty;
    return out;
  }
  out.status = LadderStatus::Inaccurate;
  out.achieved = prev_inc;
  return out;
}

}  // namespace riskq::detail
