#include "riskq/orders.hpp"

#include <algorithm>
#include <cmath>

#include "gintegral.hpp"

namespace riskq {

namespace {

const DistortionFn& lebesgue() {
  static const DistortionFn g = DistortionFn::identity();
  return g;
}

// finite probe range covering the essential support
std::pair<double, double> finiteRange(const Distribution& d) {
  double lo = d.essInf(), hi = d.essSup();
  if (!std::isfinite(lo)) lo = d.quantile(1e-9);
  if (!std::isfinite(hi)) hi = d.quantile(1.0 - 1e-9);
  return {lo, hi};
}

}  // namespace

ExtendedValue stopLoss(const Distribution& d, double deductible) {
  if (deductible >= d.essSup()) return 0.0;
  return detail::integrateQuantileMap(
      d, lebesgue(),
      [deductible](double q) { return std::max(q - deductible, 0.0); },
      /*upper*/ true, /*lower*/ false, {}, {d.survival(deductible)});
}

OrderCheck stDominates(const Distribution& d1, const Distribution& d2) {
  OrderCheck out;
  out.grid = d1.quantileBreakpoints();
  auto b2 = d2.quantileBreakpoints();
  out.grid.insert(out.grid.end(), b2.begin(), b2.end());
  const int kRefine = 1000;
  for (int i = 1; i <= kRefine; ++i)
    out.grid.push_back((i - 0.5) / kRefine);
  out.grid.push_back(1.0);
  std::sort(out.grid.begin(), out.grid.end());
  out.grid.erase(std::unique(out.grid.begin(), out.grid.end()), out.grid.end());

  out.holds = true;
  for (double u : out.grid) {
    double q1 = d1.quantile(u), q2 = d2.quantile(u);
    if (q1 == q2) continue;  // covers the +-inf ties
    if (!(q1 <= q2 + 1e-12)) {
      out.holds = false;
      out.witness = u;
      break;
    }
  }
  return out;
}

OrderCheck slDominates(const Distribution& d1, const Distribution& d2) {
  OrderCheck out;
  auto [lo1, hi1] = finiteRange(d1);
  auto [lo2, hi2] = finiteRange(d2);
  double lo = std::min(lo1, lo2), hi = std::max(hi1, hi2);

  out.grid = d1.supportPoints();
  auto s2 = d2.supportPoints();
  out.grid.insert(out.grid.end(), s2.begin(), s2.end());
  const int kRefine = 256;
  for (int i = 0; i <= kRefine; ++i)
    out.grid.push_back(lo + (hi - lo) * i / kRefine);
  std::sort(out.grid.begin(), out.grid.end());
  out.grid.erase(std::unique(out.grid.begin(), out.grid.end()), out.grid.end());

  out.holds = true;
  for (double t : out.grid) {
    ExtendedValue s1v = stopLoss(d1, t), s2v = stopLoss(d2, t);
    if (s1v.isInf() || s2v.isInf())
      throw AccuracyError("slDominates: stop-loss transform diverges on the grid",
                          kInf);
    if (!(s1v.value() <= s2v.value() + 1e-10)) {
      out.holds = false;
      out.witness = t;
      break;
    }
  }
  return out;
}

Distribution CoupledPair::pointwiseSum() const {
  std::vector<double> zs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) zs[i] = xs[i] + ys[i];
  return Distribution::empirical(std::move(zs));
}

CoupledPair comonotonicCoupling(const Distribution& d1, const Distribution& d2,
                                std::size_t n) {
  if (n < 1) throw DomainError("comonotonicCoupling: n must be >= 1");
  CoupledPair pair;
  pair.xs.resize(n);
  pair.ys.resize(n);
  for (std::size_t i = 1; i <= n; ++i) {
    double u = (static_cast<double>(i) - 0.5) / static_cast<double>(n);
    pair.xs[i - 1] = d1.quantile(u);
    pair.ys[i - 1] = d2.quantile(u);
  }
  return pair;
}

bool independentStyleSumCheck(const CoupledPair& pair) {
  Distribution sum = pair.pointwiseSum();
  Distribution comon =
      Distribution::comonotonicSum(pair.marginalX(), pair.marginalY());
  return slDominates(sum, comon).holds;
}

}  // namespace riskq
