#include "riskq/harness.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "riskq/fixtures.hpp"
#include "riskq/orders.hpp"
#include "riskq/premium.hpp"
#include "riskq/risk_measures.hpp"

namespace riskq {

namespace {

// splitmix64; per-trial streams are derived by mixing (seed, trial) so the
// report does not depend on how trials are scheduled across workers
struct Rng {
  std::uint64_t s;
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
};

Rng trialRng(std::uint64_t seed, std::uint64_t trial) {
  Rng r{seed ^ (trial + 1) * 0xd1b54a32d192ed03ULL};
  r.next();
  r.next();
  return r;
}

// one mixture component: affine image of a base quantile
struct Component {
  int base;  // 0 uniform, 1 two-point, 2 exponential
  double a, b, p;
  double quantile(double u) const {
    double q;
    switch (base) {
      case 0: q = u; break;
      case 1: q = (u > 1.0 - p) ? 1.0 : 0.0; break;
      default: q = -std::log1p(-u); break;
    }
    return a * q + b;
  }
};

struct PairDraw {
  std::vector<double> xs, ys;
  double bound;
};

// coupled pair of bounded empirical risks; the dependence mode varies to
// stress subadditivity from comonotone through antithetic joints
PairDraw drawPair(Rng& rng) {
  static const double kBounds[3] = {1.0, 10.0, 100.0};
  PairDraw d;
  d.bound = kBounds[rng.below(3)];
  std::size_t n = 64 + rng.below(449);
  auto drawComponents = [&](std::vector<Component>& cs) {
    std::size_t k = 1 + rng.below(3);
    for (std::size_t i = 0; i < k; ++i) {
      Component c;
      c.base = static_cast<int>(rng.below(3));
      c.a = rng.uniform(0.0, d.bound);
      c.b = rng.uniform(-0.5 * d.bound, 0.5 * d.bound);
      c.p = rng.uniform(0.05, 0.95);
      cs.push_back(c);
    }
  };
  std::vector<Component> cx, cy;
  drawComponents(cx);
  drawComponents(cy);
  int mode = static_cast<int>(rng.below(4));  // 0 comon, 1 anti, 2 indep, 3 mix
  d.xs.resize(n);
  d.ys.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.uniform();
    double v;
    switch (mode) {
      case 0: v = u; break;
      case 1: v = 1.0 - u; break;
      case 2: v = rng.uniform(); break;
      default: v = (i % 2 == 0) ? u : rng.uniform(); break;
    }
    u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
    v = std::min(std::max(v, 1e-12), 1.0 - 1e-12);
    const Component& kx = cx[rng.below(cx.size())];
    const Component& ky = cy[rng.below(cy.size())];
    d.xs[i] = std::min(std::max(kx.quantile(u), -d.bound), d.bound);
    d.ys[i] = std::min(std::max(ky.quantile(v), -d.bound), d.bound);
  }
  return d;
}

struct Collector {
  std::vector<Violation>* out;
  double tol;
  double max_gap = -kInf;

  void check(std::uint64_t trial, const char* property, double lhs, double rhs,
             double scale) {
    double gap = (lhs - rhs) / scale;
    max_gap = std::max(max_gap, gap);
    if (gap > tol) out->push_back({trial, property, lhs, rhs, gap});
  }
  void checkAbs(std::uint64_t trial, const char* property, double lhs,
                double rhs, double scale) {
    double gap = std::abs(lhs - rhs) / scale;
    max_gap = std::max(max_gap, gap);
    if (gap > tol) out->push_back({trial, property, lhs, rhs, gap});
  }
};

void coherenceTrial(std::uint64_t trial, std::uint64_t seed,
                    const DistortionFn& g, const YoungFn& phi, double alpha,
                    Collector& col) {
  Rng rng = trialRng(seed, trial);
  PairDraw pd = drawPair(rng);
  double scale = std::max(1.0, pd.bound);

  HGOptions hopts;
  hopts.xtol = 1e-10;
  hopts.ftol = 1e-9;
  hopts.tol = 1e-11;
  auto rho = [&](const Distribution& dd) {
    return distortionHG(dd, g, phi, alpha, hopts).value;
  };

  Distribution X = Distribution::empirical(pd.xs);
  Distribution Y = Distribution::empirical(pd.ys);
  double rx = rho(X), ry = rho(Y);

  // monotonicity via the pointwise minimum on the common sample space
  std::vector<double> zs(pd.xs.size());
  for (std::size_t i = 0; i < zs.size(); ++i)
    zs[i] = std::min(pd.xs[i], pd.ys[i]);
  col.check(trial, "monotonicity", rho(Distribution::empirical(zs)), ry, scale);

  double b = rng.uniform(-scale, scale);
  col.checkAbs(trial, "cash_invariance", rho(X.shift(b)), rx + b, scale);

  double lam = rng.uniform(0.0, 2.0);
  col.checkAbs(trial, "positive_homogeneity", rho(X.scale(lam)), lam * rx,
               scale * (1.0 + lam));

  std::vector<double> sum(pd.xs.size());
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = pd.xs[i] + pd.ys[i];
  col.check(trial, "subadditivity", rho(Distribution::empirical(sum)), rx + ry,
            scale);

  col.check(trial, "sandwich_lower", distortionRho(X, g), rx, scale);
  col.check(trial, "sandwich_upper", rx, X.essSup(), scale);
}

}  // namespace

SuiteReport coherenceSuite(const DistortionFn& g, const YoungFn& phi,
                           double alpha, const SuiteConfig& cfg) {
  SuiteReport rep;
  rep.suite = "coherence";
  rep.trials = cfg.trials;
  rep.tolerance = cfg.tol;
  if (cfg.trials == 0) {
    rep.max_gap = 0;
    return rep;  // vacuously passed
  }

  unsigned jobs = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs)
                               : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<std::uint64_t>(jobs, cfg.trials);

  std::vector<std::vector<Violation>> parts(jobs);
  std::vector<double> gaps(jobs, -kInf);
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w]() {
      Collector col{&parts[w], cfg.tol};
      for (std::uint64_t t = w; t < cfg.trials; t += jobs)
        coherenceTrial(t, cfg.seed, g, phi, alpha, col);
      gaps[w] = col.max_gap;
    });
  }
  for (auto& th : workers) th.join();

  for (unsigned w = 0; w < jobs; ++w) {
    rep.max_gap = std::max(rep.max_gap, gaps[w]);
    rep.violations.insert(rep.violations.end(), parts[w].begin(), parts[w].end());
  }
  std::sort(rep.violations.begin(), rep.violations.end(),
            [](const Violation& a, const Violation& b) { return a.trial < b.trial; });
  rep.passed = rep.max_gap <= rep.tolerance;
  return rep;
}

SuiteReport fatouScenario(const DistortionFn& g, const YoungFn& phi,
                          double alpha) {
  SuiteReport rep;
  rep.suite = "fatou";
  rep.tolerance = 1e-6;
  Distribution X = Distribution::exponential(1.0);
  double limit = distortionHG(X, g, phi, alpha).value;

  double prev = -kInf;
  Collector col{&rep.violations, rep.tolerance};
  for (int k = 4; k <= 14; k += 2) {
    double n = std::ldexp(1.0, k);
    Distribution Xn = X.clamp(0.0, n);
    double v = distortionHG(Xn, g, phi, alpha).value;
    ++rep.trials;
    // monotone in n for an increasing truncation sequence
    col.check(rep.trials, "fatou_monotone", prev, v, 1.0);
    prev = v;
    if (k == 14) col.checkAbs(rep.trials, "fatou_limit", v, limit, 1.0);
  }
  rep.max_gap = col.max_gap;
  rep.passed = rep.max_gap <= rep.tolerance;
  return rep;
}

SuiteReport reverseFatouCounterexample(const DistortionFn& g) {
  if (g.atoms().empty())
    throw DomainError("reverseFatouCounterexample: g must jump somewhere in [0,1)");
  const double u = g.atoms().front().location;
  const double jump = g.atoms().front().mass;

  SuiteReport rep;
  rep.suite = "reverse_fatou";
  rep.tolerance = 1e-12;
  Collector col{&rep.violations, rep.tolerance};

  double rho_limit = g.evalGLeft(u);  // rho_g of the limit indicator
  for (int n = 2; n <= 50; ++n) {
    double p = u + (1.0 - u) / n;
    Distribution Xn = (p >= 1.0) ? Distribution::constant(1.0)
                                 : Distribution::twoPoint(0.0, 1.0, p);
    double r = distortionRho(Xn, g);
    ++rep.trials;
    // rho_g(X_n) - rho_g(X) must stay >= the jump mass
    col.check(static_cast<std::uint64_t>(n), "reverse_fatou_gap",
              jump, r - rho_limit, 1.0);
  }
  rep.max_gap = col.max_gap;
  rep.passed = rep.max_gap <= rep.tolerance;
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

YoungFn kinkedPhi() { return YoungFn::piecewiseLinear({1.0}, {1.0, 2.0}); }

std::vector<double> seededExponentialSamples(std::size_t n, std::uint64_t seed) {
  Rng rng = trialRng(seed, 7);
  std::vector<double> xs(n);
  for (auto& x : xs) x = -std::log1p(-std::min(rng.uniform(), 1.0 - 1e-12));
  return xs;
}

}  // namespace

SuiteReport paperExamplesSuite(const std::string& filter) {
  struct Entry {
    const char* name;
    double tol;
    std::function<double(Violation&)> err;  // absolute error
  };

  static const double kSqrt2 = std::sqrt(2.0);
  std::vector<Entry> entries;

  entries.push_back({"evalg-dirac", 0.0, [](Violation&) {
    DistortionFn g = DistortionFn::dirac(0.95);
    return std::abs(g.evalG(0.04) - 0.0) + std::abs(g.evalG(0.05) - 1.0);
  }});
  entries.push_back({"evalg-tvar", 1e-15, [](Violation&) {
    return std::abs(DistortionFn::tvarClamp(0.5).evalG(0.25) - 0.5);
  }});
  entries.push_back({"evalg-fatou", 1e-15, [](Violation&) {
    return std::abs(DistortionFn::exampleFatou().evalG(0.75) - 0.5);
  }});
  entries.push_back({"evalg-cone", 1e-15, [](Violation&) {
    return std::abs(DistortionFn::exampleCone().evalG(0.75) -
                    (1.0 - std::exp(-3.0)));
  }});
  entries.push_back({"kinked-metadata", 0.0, [](Violation&) {
    YoungFn phi = kinkedPhi();
    auto [cm, cp] = phi.derivsAt1();
    return std::abs(phi.invPhi(3.0) - 2.0) + std::abs(cm - 1.0) +
           std::abs(cp - 2.0);
  }});
  entries.push_back({"premium-zero-not-attained", 0.0, [](Violation&) {
    // P(X = 0) = 1/2 and g = max(2u-1, 0) vanishing on [0, 1/2)
    Distribution d = Distribution::twoPoint(0.0, 3.0, 0.5);
    PremiumResult r = orliczLorentzPremium(d, DistortionFn::exampleFatou(),
                                           YoungFn::power(2.0), 0.25);
    return std::abs(r.value) + (r.attained ? 1.0 : 0.0);
  }});
  entries.push_back({"premium-constant", 1e-10, [](Violation& v) {
    PremiumOptions popts;
    popts.tol = 1e-12;
    v.lhs = orliczLorentzPremium(Distribution::constant(2.0),
                                 DistortionFn::identity(), YoungFn::power(2.0),
                                 0.75, popts).value;
    v.rhs = 2.0 / std::sqrt(0.25);
    return std::abs(v.lhs - v.rhs);
  }});
  entries.push_back({"premium-twopoint-luxemburg", 1e-10, [](Violation& v) {
    v.lhs = luxemburgNorm(Distribution::twoPoint(0.0, 1.0, 0.5),
                          YoungFn::power(2.0)).value;
    v.rhs = 1.0 / kSqrt2;
    return std::abs(v.lhs - v.rhs);
  }});
  entries.push_back({"orlicz-exponential-mean", 1e-8, [](Violation& v) {
    v.lhs = orliczPremium(Distribution::exponential(1.0), YoungFn::identity(),
                          0.5).value;
    v.rhs = 2.0;  // E(X)/(1-alpha)
    return std::abs(v.lhs - v.rhs);
  }});
  entries.push_back({"hg-kinked", 1e-6, [](Violation& v) {
    YoungFn phi = kinkedPhi();
    double a = distortionHG(Distribution::uniform(0.0, 1.0),
                            DistortionFn::identity(), phi, 0.0).value;
    double b = distortionHG(Distribution::uniform(-1.0, 0.0),
                            DistortionFn::identity(), phi, 0.0).value;
    v.lhs = a;
    v.rhs = 2.0 - kSqrt2;
    return std::max(std::abs(a - (2.0 - kSqrt2)), std::abs(b - (1.0 - kSqrt2)));
  }});
  entries.push_back({"hg-dirac-var", 1e-12, [](Violation& v) {
    std::vector<double> xs;
    for (int i = 0; i < 64; ++i) xs.push_back(i / 16.0);  // dyadic fixture
    Distribution d = Distribution::empirical(xs);
    DistortionFn g = DistortionFn::dirac(0.9);
    v.rhs = varAt(d, 0.9);
    double worst = 0;
    for (double alpha : {0.0, 0.5}) {
      for (const YoungFn& phi : {YoungFn::power(2.0), kinkedPhi()}) {
        v.lhs = distortionHG(d, g, phi, alpha).value;
        worst = std::max(worst, std::abs(v.lhs - v.rhs));
      }
    }
    return worst;
  }});
  entries.push_back({"hg-tvar-identity", 1e-7, [](Violation& v) {
    Distribution d = Distribution::empirical(seededExponentialSamples(200, 42));
    v.lhs = distortionHG(d, DistortionFn::identity(), YoungFn::identity(), 0.9)
                .value;
    v.rhs = tvar(d, 0.9);
    return std::abs(v.lhs - v.rhs);
  }});
  entries.push_back({"hg-expectation-collapse", 1e-12, [](Violation& v) {
    HGResult r = distortionHG(Distribution::uniform(0.0, 1.0),
                              DistortionFn::identity(), YoungFn::power(2.0), 0.0);
    v.lhs = r.value;
    v.rhs = 0.5;
    return std::abs(v.lhs - v.rhs) +
           (r.mode == HGMode::ShortcutRhoG ? 0.0 : 1.0);
  }});
  entries.push_back({"ex-fatou-rho", 1e-12, [](Violation& v) {
    DistortionFn g = DistortionFn::exampleFatou();
    double worst = 0;
    for (int n = 2; n <= 50; ++n) {
      Distribution xn = Distribution::twoPoint(-double(n), 0.0, 1.0 - 1.0 / n);
      v.lhs = distortionRho(xn, g);
      v.rhs = -2.0;
      worst = std::max(worst, std::abs(v.lhs + 2.0));
    }
    return worst;
  }});
  entries.push_back({"ex-fatou-liminf-gap", 1e-12, [](Violation& v) {
    DistortionFn g = DistortionFn::exampleFatou();
    double rho_limit = distortionRho(Distribution::zero(), g);
    double rho_n = distortionRho(
        Distribution::twoPoint(-16.0, 0.0, 1.0 - 1.0 / 16.0), g);
    v.lhs = rho_limit - rho_n;
    v.rhs = 2.0;
    return std::abs(v.lhs - v.rhs);
  }});
  entries.push_back({"ex-cone-membership", 0.0, [](Violation&) {
    DistortionFn g = DistortionFn::exampleCone();
    YoungFn phi = YoungFn::identity();
    double bad = 0;
    if (membership(fixtures::coneX(), g, phi).status != MembershipStatus::Member)
      bad += 1.0;
    if (membership(fixtures::coneXY(), g, phi).status !=
        MembershipStatus::NotMember)
      bad += 1.0;
    return bad;
  }});
  entries.push_back({"ex-strconv-sigma", 1e-8, [](Violation& v) {
    Distribution d = Distribution::twoPoint(0.0, 1.0, 0.5);
    double worst = 0;
    for (double alpha : {0.0, 0.5}) {
      for (int i = 1; i < 10; ++i) {
        double x = i / 10.0;
        v.lhs = hgSigma(d, DistortionFn::identity(), YoungFn::power(2.0),
                        alpha, x);
        v.rhs = (1.0 - x) / std::sqrt(2.0 * (1.0 - alpha)) + x;
        worst = std::max(worst, std::abs(v.lhs - v.rhs));
      }
    }
    return worst;
  }});
  entries.push_back({"rdu-twopoint", 1e-12, [](Violation& v) {
    v.lhs = rdeu(Distribution::twoPoint(0.0, 1.0, 0.5), YoungFn::power(2.0),
                 DistortionFn::identity());
    v.rhs = -0.5;
    return std::abs(v.lhs - v.rhs);
  }});
  entries.push_back({"tvar-ru-minimizer", 1e-12, [](Violation& v) {
    Distribution d = Distribution::empirical({1.0, 2.0, 3.0, 4.0});
    v.lhs = tvarRU(d, 0.5);
    v.rhs = 3.5;
    return std::abs(v.lhs - v.rhs) + std::abs(tvar(d, 0.5) - 3.5);
  }});

  SuiteReport rep;
  rep.suite = "paper_examples";
  rep.tolerance = 1.0;  // gaps are normalized by each case's tolerance
  for (auto& e : entries) {
    if (!filter.empty() &&
        std::string(e.name).find(filter) == std::string::npos)
      continue;
    ++rep.trials;
    Violation v{rep.trials, e.name, 0, 0, 0};
    double err = e.err(v);
    double norm = (e.tol == 0.0) ? (err == 0.0 ? 0.0 : kInf) : err / e.tol;
    rep.max_gap = std::max(rep.max_gap, norm);
    if (norm > rep.tolerance) {
      v.gap = norm;
      rep.violations.push_back(v);
    }
  }
  if (rep.trials == 0) rep.max_gap = 0;
  rep.passed = rep.max_gap <= rep.tolerance;
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<Candidate> searchCounterexamples(const std::string& problem,
                                             std::uint64_t trials,
                                             std::uint64_t seed) {
  std::vector<Candidate> found;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = trialRng(seed ^ 0xabcdef, t);
    try {
      if (problem == "coh") {
        // non-concave g: does subadditivity still hold for alpha > 0?
        DistortionFn g = (t % 2 == 0) ? DistortionFn::dirac(rng.uniform(0.5, 0.99))
                                      : DistortionFn::exampleFatou();
        double alpha = rng.uniform(0.05, 0.9);
        PairDraw pd = drawPair(rng);
        Distribution X = Distribution::empirical(pd.xs);
        Distribution Y = Distribution::empirical(pd.ys);
        std::vector<double> sum(pd.xs.size());
        for (std::size_t i = 0; i < sum.size(); ++i)
          sum[i] = pd.xs[i] + pd.ys[i];
        YoungFn phi = (t % 3 == 0) ? YoungFn::identity() : YoungFn::power(2.0);
        double lhs = distortionHG(Distribution::empirical(sum), g, phi, alpha).value;
        double rhs = distortionHG(X, g, phi, alpha).value +
                     distortionHG(Y, g, phi, alpha).value;
        if (lhs > rhs + 1e-6 * std::max(1.0, pd.bound))
          found.push_back({t, "subadditivity gap with non-concave g", lhs - rhs});
      } else if (problem == "rev_fatou") {
        // continuous g, non-Delta_2 phi, decreasing truncated tails
        DistortionFn g = DistortionFn::power(rng.uniform(0.3, 1.0));
        YoungFn phi = YoungFn::expMinusOne();
        double alpha = rng.uniform(0.1, 0.9);
        Distribution X = Distribution::exponential(rng.uniform(0.5, 2.0));
        double lim = distortionHG(X.clamp(0.0, 4096.0), g, phi, alpha).value;
        double down = distortionHG(X.clamp(0.0, 64.0), g, phi, alpha).value;
        if (down > lim + 1e-4) found.push_back({t, "slow upper-truncation decay", down - lim});
      } else if (problem == "fatou0") {
        DistortionFn g = DistortionFn::power(rng.uniform(0.3, 1.0));
        YoungFn phi = kinkedPhi();
        Distribution X = Distribution::exponential(1.0);
        double full = distortionHG(X.clamp(0.0, 4096.0), g, phi, 0.0).value;
        double part = distortionHG(X.clamp(0.0, 64.0), g, phi, 0.0).value;
        if (part > full + 1e-4)
          found.push_back({t, "alpha=0 truncation non-monotone", part - full});
      } else {
        throw DomainError("searchCounterexamples: unknown problem id");
      }
    } catch (const NotInSpaceError&) {
      // candidate risks may fall outside the space; skip those draws
    }
  }
  return found;
}

}  // namespace riskq
