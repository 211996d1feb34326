#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riskq/distortion.hpp"
#include "riskq/distribution.hpp"
#include "riskq/young.hpp"

namespace riskq {

struct Violation {
  std::uint64_t trial;
  std::string property;
  double lhs, rhs;
  double gap;  // scale-normalized excess; positive means violated
};

// Deterministic function of (suite inputs, seed, trials): identical runs
// produce identical reports regardless of the worker count.
struct SuiteReport {
  std::string suite;
  std::uint64_t trials = 0;
  std::vector<Violation> violations;  // gaps beyond tolerance, by trial index
  double max_gap = -kInf;             // largest normalized gap observed
  double tolerance = 0;
  bool passed = true;                 // max_gap <= tolerance
};

struct SuiteConfig {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 42;
  double tol = 1e-7;  // normalized axiom tolerance
  int jobs = 0;       // 0: hardware concurrency
};

// Seeded coherence trials for rho_{g,phi,alpha}: draws coupled pairs of
// bounded empirical risks (sizes 64-512, mixtures of affine Uniform /
// TwoPoint / Exponential components truncated to [-B, B], B in {1, 10, 100})
// and checks monotonicity, cash-invariance, positive homogeneity,
// subadditivity on the pointwise sum, and the rho_g / essSup sandwich.
SuiteReport coherenceSuite(const DistortionFn& g, const YoungFn& phi,
                           double alpha, const SuiteConfig& cfg = {});

// Monotone truncations X_n = min(X, 2^k) of Exponential(1) must satisfy
// rho(X_n) -> rho(X); asserts agreement within 1e-6 at n = 2^14.
SuiteReport fatouScenario(const DistortionFn& g, const YoungFn& phi,
                          double alpha);

// For g with a jump of mass m at u in [0,1): indicators X_n with
// P(X_n = 1) = p_n down to u keep rho_g(X_n) = g(p_n-) >= g(u) while
// rho_g(X) = g(u-), so the gap never drops below the jump mass.
SuiteReport reverseFatouCounterexample(const DistortionFn& g_discontinuous);

// Golden closed-form cases; gaps are normalized by each case's stated
// tolerance, so the report tolerance is 1.  `filter` selects cases by
// substring (empty = all).
SuiteReport paperExamplesSuite(const std::string& filter = "");

// Candidate search for the open problems ("coh", "rev_fatou", "fatou0").
// Emits unverified candidates only; never a correctness claim.
struct Candidate {
  std::uint64_t trial;
  std::string description;
  double gap;
};
std::vector<Candidate> searchCounterexamples(const std::string& problem,
                                             std::uint64_t trials,
                                             std::uint64_t seed);

}  // namespace riskq
