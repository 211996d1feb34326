#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "riskq/distribution.hpp"
#include "riskq/extended.hpp"

namespace riskq {

// Grid-based order verdicts are decision procedures only up to the grid
// resolution; the grid used is carried alongside the verdict.  For step
// quantiles the grid contains every breakpoint, so the check is exact there.
struct OrderCheck {
  bool holds = false;
  std::vector<double> grid;
  std::optional<double> witness;  // first grid point where the order fails
};

// E((X - deductible)^+); +inf with a diagnostic when the upper tail diverges.
ExtendedValue stopLoss(const Distribution& d, double deductible);

// X <=_st Y: quantile(d1, u) <= quantile(d2, u) + 1e-12 on the merged
// breakpoint grid plus 1000 midpoint refinement points.
OrderCheck stDominates(const Distribution& d1, const Distribution& d2);

// X <=_sl Y: stopLoss(d1, t) <= stopLoss(d2, t) + 1e-10 over the merged
// support grid plus refinement.  Throws AccuracyError when a transform
// diverges on the probe grid.
OrderCheck slDominates(const Distribution& d1, const Distribution& d2);

// Aligned samples (X(w_i), Y(w_i)) on a common uniformly weighted sample
// space; the marginal empirical laws are recovered by sorting each sequence.
struct CoupledPair {
  std::vector<double> xs, ys;

  std::size_t size() const { return xs.size(); }
  Distribution marginalX() const { return Distribution::empirical(xs); }
  Distribution marginalY() const { return Distribution::empirical(ys); }
  Distribution pointwiseSum() const;
};

// Couples the two marginals comonotonically through the midpoint grid
// u_i = (i - 1/2) / n, so xs and ys are both sorted.
CoupledPair comonotonicCoupling(const Distribution& d1, const Distribution& d2,
                                std::size_t n);

// Any coupled pair's pointwise sum is sl-dominated by the comonotonic sum of
// its marginals; returns that verdict for the given pair.
bool independentStyleSumCheck(const CoupledPair& pair);

}  // namespace riskq
