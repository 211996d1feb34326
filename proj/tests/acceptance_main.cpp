// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances are pinned in code next to each criterion.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "riskq/fixtures.hpp"
#include "riskq/harness.hpp"
#include "riskq/orders.hpp"
#include "riskq/premium.hpp"
#include "riskq/risk_measures.hpp"

using namespace riskq;

namespace {

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

YoungFn kinked() { return YoungFn::piecewiseLinear({1.0}, {1.0, 2.0}); }

double secondsSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct Outcome {
  bool ok;
  std::string detail;
};

Distribution seededExponentialEmpirical(std::size_t n, std::uint64_t seed) {
  Rng rng{seed};
  std::vector<double> xs(n);
  for (auto& x : xs)
    x = -std::log1p(-std::min(rng.uniform(), 1.0 - 1e-15));
  return Distribution::empirical(std::move(xs));
}

Distribution seededBoundedEmpirical(Rng& rng, std::size_t n, double lo,
                                    double hi) {
  std::vector<double> xs(n);
  for (auto& x : xs) x = rng.uniform(lo, hi);
  return Distribution::empirical(std::move(xs));
}

std::vector<DistortionFn> concaveMenu() {
  return {DistortionFn::identity(), DistortionFn::tvarClamp(0.9),
          DistortionFn::power(0.5), DistortionFn::exampleCone()};
}

// --------------------------------------------------------------------------

Outcome criterion1() {
  auto phi = kinked();
  auto g = DistortionFn::identity();
  char buf[160];

  auto t0 = std::chrono::steady_clock::now();
  double a = distortionHG(Distribution::uniform(0.0, 1.0), g, phi, 0.0).value;
  double ta = secondsSince(t0);
  t0 = std::chrono::steady_clock::now();
  double b = distortionHG(Distribution::uniform(-1.0, 0.0), g, phi, 0.0).value;
  double tb = secondsSince(t0);

  double err_a = std::abs(a - (2.0 - std::sqrt(2.0)));
  double err_b = std::abs(b - (1.0 - std::sqrt(2.0)));
  std::snprintf(buf, sizeof(buf),
                "|err|=(%.2e, %.2e) <= 1e-6, times=(%.3fs, %.3fs) < 1s", err_a,
                err_b, ta, tb);
  return {err_a <= 1e-6 && err_b <= 1e-6 && ta < 1.0 && tb < 1.0, buf};
}

Outcome criterion2() {
  auto d = seededExponentialEmpirical(1000, 42);
  auto g = DistortionFn::identity();
  auto phi = YoungFn::identity();
  double worst_hg = 0, worst_ru = 0;
  for (double alpha : {0.5, 0.9, 0.95}) {
    double hg = distortionHG(d, g, phi, alpha).value;
    double tv = tvar(d, alpha);
    double ru = tvarRU(d, alpha);
    worst_hg = std::max(worst_hg, std::abs(hg - tv));
    worst_ru = std::max(worst_ru, std::abs(tv - ru));
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "|hg-tvar|=%.2e <= 1e-7, |tvar-ru|=%.2e <= 1e-8",
                worst_hg, worst_ru);
  return {worst_hg <= 1e-7 && worst_ru <= 1e-8, buf};
}

Outcome criterion3() {
  double worst = 0;
  PremiumOptions opts;
  opts.tol = 1e-12;
  for (double b : {0.5, 1.0, 2.0, 10.0}) {
    for (const auto& phi : {YoungFn::power(2.0), kinked()}) {
      for (double alpha : {0.0, 0.5, 0.9}) {
        for (const auto& g : {DistortionFn::identity(), DistortionFn::power(0.5)}) {
          double pi =
              orliczLorentzPremium(Distribution::constant(b), g, phi, alpha, opts)
                  .value;
          worst = std::max(worst, std::abs(pi - b / phi.invPhi(1.0 - alpha)));
        }
      }
    }
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "max |pi(b) - b/invPhi(1-a)| = %.2e <= 1e-10",
                worst);
  return {worst <= 1e-10, buf};
}

Outcome criterion4() {
  // dyadic empirical fixtures keep every arithmetic step exact
  Rng rng{4242};
  std::vector<Distribution> fixtures;
  for (int f = 0; f < 3; ++f) {
    std::vector<double> xs(96 + 32 * f);
    for (auto& x : xs) x = std::floor(rng.uniform() * 8192.0) / 1024.0 - 2.0;
    fixtures.push_back(Distribution::empirical(xs));
  }
  int exact = 0, total = 0;
  for (const auto& d : fixtures) {
    for (double beta : {0.9, 0.99}) {
      double var = varAt(d, beta);
      for (const auto& phi : {YoungFn::power(2.0), kinked()}) {
        for (double alpha : {0.0, 0.5}) {
          ++total;
          double hg = distortionHG(d, DistortionFn::dirac(beta), phi, alpha).value;
          if (hg == var) ++exact;
        }
      }
    }
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%d/%d cases equal VaR_beta exactly", exact,
                total);
  return {exact == total, buf};
}

Outcome criterion5() {
  auto g = DistortionFn::identity();
  auto phi = YoungFn::power(2.0);
  HGOptions limit_only;
  limit_only.allow_shortcut = false;

  Rng rng{5};
  std::vector<double> xs(500);
  double mean_emp = 0;
  for (auto& x : xs) {
    x = rng.uniform(0.0, 3.0);
    mean_emp += x;
  }
  mean_emp /= 500.0;
  auto emp = Distribution::empirical(xs);

  double worst_limit = 0;
  bool exact_shortcut = true;
  for (const auto& [d, mean] :
       {std::pair<Distribution, double>{Distribution::uniform(0.0, 1.0), 0.5},
        std::pair<Distribution, double>{emp, mean_emp}}) {
    auto lim = distortionHG(d, g, phi, 0.0, limit_only);
    if (lim.mode != HGMode::Limit) return {false, "limit mode not taken"};
    worst_limit = std::max(worst_limit, std::abs(lim.value - mean));
    auto sc = distortionHG(d, g, phi, 0.0);
    if (sc.mode != HGMode::ShortcutRhoG || sc.value != distortionRho(d, g))
      exact_shortcut = false;
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf),
                "limit |value-E|=%.2e <= 1e-4, shortcut == rho_g: %s",
                worst_limit, exact_shortcut ? "yes" : "no");
  return {worst_limit <= 1e-4 && exact_shortcut, buf};
}

Outcome criterion6() {
  auto phi = kinked();  // c- = 1, c+ = 2
  auto [cm, cp] = phi.derivsAt1();
  Rng rng{6};
  auto menu = concaveMenu();
  int violations = 0;
  double worst = -kInf;
  for (int t = 0; t < 100; ++t) {
    auto d = seededBoundedEmpirical(rng, 48 + rng.below(80), -3.0, 4.0);
    const auto& g = menu[t % menu.size()];
    double v = distortionHG(d, g, phi, 0.0).value;
    double lower = distortionRho(d, g);
    double upper = (cp / cm) * distortionRho(d.positivePart(), g) +
                   (cm / cp) * distortionRho(d.negativePartNeg(), g);
    double gap = std::max(lower - v, v - upper);
    worst = std::max(worst, gap);
    if (gap > 1e-7) ++violations;
  }
  char buf[100];
  std::snprintf(buf, sizeof(buf), "violations=%d (worst slack %.2e <= 1e-7)",
                violations, worst);
  return {violations == 0, buf};
}

Outcome criterion7() {
  auto t0 = std::chrono::steady_clock::now();
  SuiteConfig cfg;
  cfg.trials = 1000;
  cfg.seed = 42;
  cfg.tol = 1e-7;
  std::uint64_t total_violations = 0;
  double worst = -kInf;
  int combos = 0;
  for (const auto& g : {DistortionFn::tvarClamp(0.9), DistortionFn::power(0.5),
                        DistortionFn::exampleCone()}) {
    for (const auto& phi : {YoungFn::identity(), YoungFn::power(2.0), kinked()}) {
      for (double alpha : {0.0, 0.25, 0.75}) {
        auto rep = coherenceSuite(g, phi, alpha, cfg);
        total_violations += rep.violations.size();
        worst = std::max(worst, rep.max_gap);
        ++combos;
      }
    }
  }
  double secs = secondsSince(t0);
  char buf[140];
  std::snprintf(buf, sizeof(buf),
                "%d combos x 1000 trials: %llu violations (max gap %.2e), %.1fs < 120s",
                combos, static_cast<unsigned long long>(total_violations), worst,
                secs);
  return {total_violations == 0 && secs < 120.0, buf};
}

Outcome criterion8() {
  auto g = DistortionFn::exampleFatou();
  double worst = 0;
  for (int n = 2; n <= 50; ++n) {
    auto xn = Distribution::twoPoint(-double(n), 0.0, 1.0 - 1.0 / n);
    worst = std::max(worst, std::abs(distortionRho(xn, g) - (-2.0)));
  }
  double liminf_gap = distortionRho(Distribution::zero(), g) - (-2.0);
  char buf[110];
  std::snprintf(buf, sizeof(buf),
                "max |rho_g(X_n)+2| = %.2e <= 1e-12; liminf gap = %g", worst,
                liminf_gap);
  return {worst <= 1e-12 && std::abs(liminf_gap - 2.0) <= 1e-12, buf};
}

Outcome criterion9() {
  auto g = DistortionFn::mixture({{0.5, 0.3}}, {{0.0, 1.0, {0.7, 0, 0, 0}}},
                                 false);
  double rho_limit = distortionRho(Distribution::twoPoint(0.0, 1.0, 0.5), g);
  double worst = kInf;
  for (int n = 2; n <= 50; ++n) {
    double p = 0.5 + 0.5 / n;
    auto xn = (p >= 1.0) ? Distribution::constant(1.0)
                         : Distribution::twoPoint(0.0, 1.0, p);
    worst = std::min(worst, distortionRho(xn, g) - rho_limit);
  }
  auto rep = reverseFatouCounterexample(g);
  char buf[110];
  std::snprintf(buf, sizeof(buf), "min gap = %.15g >= 0.3 - 1e-12; harness %s",
                worst, rep.passed ? "passed" : "failed");
  return {worst >= 0.3 - 1e-12 && rep.passed, buf};
}

Outcome criterion10() {
  auto g = DistortionFn::exampleCone();
  auto phi = YoungFn::identity();
  auto mx = membership(fixtures::coneX(), g, phi);
  auto mxy = membership(fixtures::coneXY(), g, phi);
  char buf[120];
  std::snprintf(buf, sizeof(buf), "X -> %s, X+Y -> %s",
                mx.status == MembershipStatus::Member ? "Member" : "not member",
                mxy.status == MembershipStatus::NotMember ? "NotMember"
                                                          : "not notmember");
  return {mx.status == MembershipStatus::Member &&
              mxy.status == MembershipStatus::NotMember,
          buf};
}

Outcome criterion11() {
  auto d = Distribution::twoPoint(0.0, 1.0, 0.5);
  auto g = DistortionFn::identity();
  auto phi = YoungFn::power(2.0);
  double worst = 0;
  for (double alpha : {0.0, 0.5}) {
    for (int i = 1; i <= 19; ++i) {
      double x = i / 20.0;
      double expect = (1.0 - x) / std::sqrt(2.0 * (1.0 - alpha)) + x;
      worst = std::max(worst, std::abs(hgSigma(d, g, phi, alpha, x) - expect));
    }
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "max closed-form error %.2e <= 1e-8", worst);
  return {worst <= 1e-8, buf};
}

Outcome criterion12() {
  Rng rng{12};
  auto gs = concaveMenu();
  std::vector<YoungFn> phis = {YoungFn::identity(), YoungFn::power(2.0), kinked()};
  double worst_conv = kInf, worst_mono = kInf;
  for (int c = 0; c < 50; ++c) {
    auto d = seededBoundedEmpirical(rng, 32 + rng.below(96), -2.0, 3.0);
    const auto& g = gs[c % gs.size()];
    const auto& phi = phis[c % phis.size()];
    double alpha = rng.uniform(0.05, 0.9);
    double lo = d.essInf() - 1.0, hi = d.essSup() + 0.5;
    std::vector<double> s_pos, s_zero;
    for (int i = 0; i <= 14; ++i) {
      double x = lo + (hi - lo) * i / 14.0;
      s_pos.push_back(hgSigma(d, g, phi, alpha, x));
      s_zero.push_back(hgSigma(d, g, phi, 0.0, x));
    }
    for (size_t i = 1; i + 1 < s_pos.size(); ++i)
      worst_conv = std::min(worst_conv, s_pos[i + 1] - 2 * s_pos[i] + s_pos[i - 1]);
    for (size_t i = 1; i < s_zero.size(); ++i)
      worst_mono = std::min(worst_mono, s_zero[i] - s_zero[i - 1]);
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf),
                "min 2nd diff %.2e >= -1e-7; min 1st diff (a=0) %.2e >= -1e-7",
                worst_conv, worst_mono);
  return {worst_conv >= -1e-7 && worst_mono >= -1e-7, buf};
}

Outcome criterion13() {
  Rng rng{13};
  std::vector<DistortionFn> hs = {
      DistortionFn::identity(), DistortionFn::tvarClamp(0.5),
      DistortionFn::exampleFatou(),
      DistortionFn::mixture({{0.25, 0.2}, {0.6, 0.3}},
                            {{0.0, 1.0, {0.5, 0, 0, 0}}}, false)};
  std::vector<YoungFn> phis = {YoungFn::identity(), YoungFn::power(2.0), kinked()};
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 2 + rng.below(15);  // <= 16 atoms
    std::vector<double> pts(n), probs(n);
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      pts[i] = rng.uniform(0.0, 6.0);
      probs[i] = 0.05 + rng.uniform();
      total += probs[i];
    }
    double run = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      probs[i] /= total;
      run += probs[i];
    }
    probs[n - 1] = 1.0 - run;
    auto d = Distribution::discrete(pts, probs);
    const auto& h = hs[t % hs.size()];
    const auto& phi = phis[t % phis.size()];
    worst = std::max(worst,
                     std::abs(rdeu(d, phi, h) - rdeuQuantileSide(d, phi, h)));
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "max |choquet - quantile side| = %.2e <= 1e-9",
                worst);
  return {worst <= 1e-9, buf};
}

Outcome criterion14() {
  Rng rng{14};
  std::vector<DistortionFn> gs = {
      DistortionFn::identity(),  DistortionFn::dirac(0.9),
      DistortionFn::tvarClamp(0.7), DistortionFn::power(0.5),
      DistortionFn::exampleCone(),  DistortionFn::exampleFatou(),
      DistortionFn::mixture({{0.5, 0.3}}, {{0.0, 1.0, {0.7, 0, 0, 0}}}, false)};
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    double b = (t % 3 == 0) ? 1.0 : ((t % 3 == 1) ? 10.0 : 100.0);
    auto d = seededBoundedEmpirical(rng, 16 + rng.below(185), -b, b);
    for (const auto& g : gs)
      worst = std::max(worst, std::abs(distortionRho(d, g) -
                                       distortionRhoSurvival(d, g)));
  }
  char buf[80];
  std::snprintf(buf, sizeof(buf), "max representation gap %.2e <= 1e-8", worst);
  return {worst <= 1e-8, buf};
}

Outcome criterion15() {
  Rng rng{15};
  auto gs = concaveMenu();
  std::vector<YoungFn> phis = {YoungFn::identity(), YoungFn::power(2.0), kinked()};
  int violations = 0, verified_pairs = 0;
  double worst = -kInf;
  for (int t = 0; t < 500; ++t) {
    std::size_t n = 24 + rng.below(40);
    std::vector<double> ys(n);
    for (auto& y : ys) y = rng.uniform(0.0, 5.0);
    // mean-preserving pairwise contractions produce an sl-dominated risk
    std::vector<double> xs = ys;
    for (int k = 0; k < 12; ++k) {
      std::size_t i = rng.below(n), j = rng.below(n);
      if (i == j) continue;
      double mid = 0.5 * (xs[i] + xs[j]);
      double pull = rng.uniform(0.0, 1.0);
      xs[i] += (mid - xs[i]) * pull;
      xs[j] += (mid - xs[j]) * pull;
    }
    auto lo = Distribution::empirical(xs);
    auto hi = Distribution::empirical(ys);
    if (t % 25 == 0) {
      if (!slDominates(lo, hi).holds) return {false, "construction broke sl order"};
      ++verified_pairs;
    }
    const auto& g = gs[t % gs.size()];
    const auto& phi = phis[t % phis.size()];
    double alpha = rng.uniform(0.0, 0.9);
    double gap = orliczLorentzPremium(lo, g, phi, alpha).value -
                 orliczLorentzPremium(hi, g, phi, alpha).value;
    worst = std::max(worst, gap);
    if (gap > 1e-8) ++violations;
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf),
                "violations=%d of 500 (worst gap %.2e <= 1e-8; %d pairs re-verified)",
                violations, worst, verified_pairs);
  return {violations == 0, buf};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> cs = {
      {"kinked-phi HG at alpha=0 equals 2-sqrt2 / 1-sqrt2", criterion1},
      {"HG/TVaR identity on seeded exponential samples", criterion2},
      {"constant premium formula b/invPhi(1-alpha)", criterion3},
      {"dirac-g collapse to VaR (exact)", criterion4},
      {"expectation collapse at alpha=0 (limit and shortcut)", criterion5},
      {"alpha=0 value bounds from the derivative ratios", criterion6},
      {"coherence suite over the concave menu", criterion7},
      {"rho_g(X_n) = -2 reproduction and liminf gap", criterion8},
      {"reverse-Fatou jump reproduction", criterion9},
      {"cone-domain membership verdicts", criterion10},
      {"two-point sigma closed form", criterion11},
      {"sigma shape: convexity and alpha=0 monotonicity", criterion12},
      {"RDEU Choquet / quantile-integral identity", criterion13},
      {"rho representation agreement on signed risks", criterion14},
      {"stop-loss order preserved by the premium", criterion15},
  };

  int failures = 0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    Outcome out;
    try {
      out = cs[i].run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %2zu  %s  [%s]\n", out.ok ? "PASS" : "FAIL", i + 1,
                cs[i].name, out.detail.c_str());
    std::fflush(stdout);
    if (!out.ok) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(cs.size()) - failures,
              cs.size());
  return failures == 0 ? 0 : 1;
}
