#include "riskq/distortion.hpp"

#include <algorithm>
#include <cmath>

#include "quadrature.hpp"

namespace riskq {

namespace {

// slope of the linear piece of the cone example, (4/3)(1 - e^-3)
double coneSlope() {
  static const double k = (4.0 / 3.0) * (1.0 - std::exp(-3.0));
  return k;
}

double polyEval(const std::array<double, 4>& c, double u) {
  return ((c[3] * u + c[2]) * u + c[1]) * u + c[0];
}

// antiderivative of the density polynomial, zero at 0
double polyPrim(const std::array<double, 4>& c, double u) {
  return (((c[3] / 4.0 * u + c[2] / 3.0) * u + c[1] / 2.0) * u + c[0]) * u;
}

bool polyIsZero(const std::array<double, 4>& c) {
  return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0;
}

double polyMinOn(const std::array<double, 4>& c, double lo, double hi) {
  double m = std::min(polyEval(c, lo), polyEval(c, hi));
  // stationary points of a cubic: roots of the quadratic derivative
  double a = 3 * c[3], b = 2 * c[2], d = c[1];
  if (a == 0) {
    if (b != 0) {
      double r = -d / b;
      if (r > lo && r < hi) m = std::min(m, polyEval(c, r));
    }
  } else {
    double disc = b * b - 4 * a * d;
    if (disc >= 0) {
      double s = std::sqrt(disc);
      for (double r : {(-b - s) / (2 * a), (-b + s) / (2 * a)})
        if (r > lo && r < hi) m = std::min(m, polyEval(c, r));
    }
  }
  return m;
}

double polyMaxOn(const std::array<double, 4>& c, double lo, double hi) {
  std::array<double, 4> neg{-c[0], -c[1], -c[2], -c[3]};
  return -polyMinOn(neg, lo, hi);
}

}  // namespace

// ---------------------------------------------------------------------------
// Builders

DistortionFn DistortionFn::identity() {
  DistortionFn g;
  g.kind_ = DistortionKind::Identity;
  g.segments_ = {{0.0, 1.0, {1.0, 0.0, 0.0, 0.0}}};
  g.concave_ = true;
  g.validate();
  return g;
}

DistortionFn DistortionFn::dirac(double beta) {
  if (!(beta > 0 && beta <= 1)) throw ValidationError("dirac: beta outside (0,1]");
  DistortionFn g;
  g.kind_ = DistortionKind::Dirac;
  g.param_ = beta;
  g.atoms_ = {{1.0 - beta, 1.0}};
  g.segments_ = {{0.0, 1.0, {0.0, 0.0, 0.0, 0.0}}};
  g.concave_ = (beta == 1.0);  // atom at 0 only
  g.validate();
  return g;
}

DistortionFn DistortionFn::tvarClamp(double alpha) {
  if (!(alpha >= 0 && alpha < 1))
    throw ValidationError("tvar_clamp: alpha outside [0,1)");
  DistortionFn g;
  g.kind_ = DistortionKind::TvarClamp;
  g.param_ = alpha;
  if (alpha == 0) {
    g.segments_ = {{0.0, 1.0, {1.0, 0.0, 0.0, 0.0}}};
  } else {
    g.segments_ = {{0.0, 1.0 - alpha, {1.0 / (1.0 - alpha), 0.0, 0.0, 0.0}},
                   {1.0 - alpha, 1.0, {0.0, 0.0, 0.0, 0.0}}};
  }
  g.concave_ = true;
  g.validate();
  return g;
}

DistortionFn DistortionFn::power(double gamma) {
  if (!(gamma > 0 && gamma <= 1)) throw ValidationError("power: gamma outside (0,1]");
  DistortionFn g;
  g.kind_ = DistortionKind::Power;
  g.param_ = gamma;
  g.concave_ = true;
  return g;
}

DistortionFn DistortionFn::exampleCone() {
  DistortionFn g;
  g.kind_ = DistortionKind::ExampleCone;
  g.concave_ = true;
  return g;
}

DistortionFn DistortionFn::exampleFatou() {
  DistortionFn g;
  g.kind_ = DistortionKind::ExampleFatou;
  g.segments_ = {{0.0, 0.5, {0.0, 0.0, 0.0, 0.0}},
                 {0.5, 1.0, {2.0, 0.0, 0.0, 0.0}}};
  g.concave_ = false;
  g.validate();
  return g;
}

DistortionFn DistortionFn::mixture(std::vector<DistortionAtom> atoms,
                                   std::vector<DistortionSegment> segments,
                                   bool concave) {
  DistortionFn g;
  g.kind_ = DistortionKind::Mixture;
  g.atoms_ = std::move(atoms);
  g.segments_ = std::move(segments);
  g.concave_ = concave;
  std::sort(g.atoms_.begin(), g.atoms_.end(),
            [](const DistortionAtom& a, const DistortionAtom& b) {
              return a.location < b.location;
            });
  std::sort(g.segments_.begin(), g.segments_.end(),
            [](const DistortionSegment& a, const DistortionSegment& b) {
              return a.lo < b.lo;
            });
  g.validate();
  return g;
}

void DistortionFn::validate() const {
  if (kind_ == DistortionKind::Power || kind_ == DistortionKind::ExampleCone)
    return;  // closed-form families
  auto& self = const_cast<DistortionFn&>(*this);

  double atom_total = 0;
  self.atom_prefix_.clear();
  for (auto& a : atoms_) {
    if (!(a.location >= 0 && a.location < 1))
      throw ValidationError("distortion: atom location outside [0,1)");
    if (!(a.mass > 0)) throw ValidationError("distortion: atom mass must be > 0");
    atom_total += a.mass;
    self.atom_prefix_.push_back(atom_total);
  }

  if (segments_.empty())
    throw ValidationError("distortion: segments must partition [0,1]");
  if (std::abs(segments_.front().lo) > 1e-12 ||
      std::abs(segments_.back().hi - 1.0) > 1e-12)
    throw ValidationError("distortion: segments must cover [0,1]");
  self.segments_.front().lo = 0.0;
  self.segments_.back().hi = 1.0;
  double cont_total = 0;
  self.seg_prefix_.clear();
  for (size_t i = 0; i < segments_.size(); ++i) {
    auto& s = self.segments_[i];
    if (i > 0) {
      if (std::abs(s.lo - segments_[i - 1].hi) > 1e-12)
        throw ValidationError("distortion: segments must be contiguous");
      s.lo = segments_[i - 1].hi;
    }
    if (!(s.lo < s.hi)) throw ValidationError("distortion: empty segment");
    if (polyMinOn(s.coef, s.lo, s.hi) < -1e-12)
      throw ValidationError("distortion: density must be nonnegative");
    self.seg_prefix_.push_back(cont_total);
    cont_total += polyPrim(s.coef, s.hi) - polyPrim(s.coef, s.lo);
  }
  if (std::abs(atom_total + cont_total - 1.0) > 1e-12)
    throw ValidationError("distortion: total mass must equal 1");

  if (concave_) {
    for (auto& a : atoms_)
      if (a.location != 0.0)
        throw ValidationError("concave distortion: atoms allowed only at 0");
    double prev_edge = kInf;
    for (auto& s : segments_) {
      // density must be nonincreasing: derivative <= 0 across the segment
      std::array<double, 4> der{s.coef[1], 2 * s.coef[2], 3 * s.coef[3], 0.0};
      if (polyMaxOn(der, s.lo, s.hi) > 1e-12)
        throw ValidationError("concave distortion: density must be nonincreasing");
      if (polyEval(s.coef, s.lo) > prev_edge + 1e-12)
        throw ValidationError("concave distortion: density jumps upward");
      prev_edge = polyEval(s.coef, s.hi);
    }
  }
}

// ---------------------------------------------------------------------------
// Evaluation

double DistortionFn::continuousPart(double u) const {
  // sum of segment density integrals over [0, u]
  double total = 0;
  for (size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (u <= s.lo) break;
    double hi = std::min(u, s.hi);
    total += polyPrim(s.coef, hi) - polyPrim(s.coef, s.lo);
  }
  return total;
}

double DistortionFn::evalG(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("evalG: u outside [0,1]");
  if (u >= 1.0) return 1.0;
  switch (kind_) {
    case DistortionKind::Identity:
      return u;
    case DistortionKind::Dirac:
      // u >= 1 - beta, written so decimal beta/u pairs round consistently
      return u + param_ >= 1.0 ? 1.0 : 0.0;
    case DistortionKind::TvarClamp:
      return std::min(u / (1.0 - param_), 1.0);
    case DistortionKind::Power:
      return std::pow(u, param_);
    case DistortionKind::ExampleCone:
      return u < 0.75 ? coneSlope() * u : 1.0 - std::exp(-u / (1.0 - u));
    case DistortionKind::ExampleFatou:
      return std::max(2.0 * u - 1.0, 0.0);
    case DistortionKind::Mixture: {
      double total = continuousPart(u);
      for (size_t i = 0; i < atoms_.size() && atoms_[i].location <= u; ++i)
        total += atoms_[i].mass;
      return std::min(std::max(total, 0.0), 1.0);
    }
  }
  return 0;  // unreachable
}

double DistortionFn::evalGLeft(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("evalGLeft: u outside [0,1]");
  if (u == 0.0) return 0.0;
  if (u >= 1.0) u = 1.0;
  switch (kind_) {
    case DistortionKind::Dirac:
      return u + param_ > 1.0 ? 1.0 : 0.0;
    case DistortionKind::Mixture: {
      double total = continuousPart(u);
      for (size_t i = 0; i < atoms_.size() && atoms_[i].location < u; ++i)
        total += atoms_[i].mass;
      return std::min(std::max(total, 0.0), 1.0);
    }
    default:
      return u == 1.0 ? 1.0 : evalG(u);  // continuous families
  }
}

bool DistortionFn::continuous() const { return atoms_.empty(); }

bool DistortionFn::hasAtomAtZero() const {
  return !atoms_.empty() && atoms_.front().location == 0.0;
}

std::optional<double> DistortionFn::expInvDecayAtOne() const {
  if (kind_ == DistortionKind::ExampleCone) return 1.0;
  return std::nullopt;
}

double DistortionFn::inverseG(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("inverseG: s outside [0,1]");
  switch (kind_) {
    case DistortionKind::Identity:
      return s;
    case DistortionKind::Power:
      return std::pow(s, 1.0 / param_);
    case DistortionKind::TvarClamp:
      return s * (1.0 - param_);
    case DistortionKind::ExampleFatou:
      return s == 0.0 ? 0.0 : 0.5 * (s + 1.0);
    case DistortionKind::ExampleCone: {
      if (s >= 1.0) return 1.0;
      double knee = 1.0 - std::exp(-3.0);
      if (s <= knee) return s / coneSlope();
      double L = -std::log1p(-s);
      return L / (1.0 + L);
    }
    case DistortionKind::Dirac:
      if (s == 0.0) return 0.0;
      if (s == 1.0) return atoms_[0].location;
      throw UnsupportedError("inverseG: dirac distortion jumps over s");
    case DistortionKind::Mixture: {
      if (evalG(0.0) >= s) return 0.0;
      double a = 0.0, b = 1.0;  // invariant: g(a) < s <= g(b)
      for (int i = 0; i < 200 && b - a > 1e-16; ++i) {
        double m = 0.5 * (a + b);
        if (evalG(m) >= s) b = m; else a = m;
      }
      if (std::abs(evalG(b) - s) > 1e-9)
        throw UnsupportedError("inverseG: distortion jumps over s");
      return b;
    }
  }
  return 0;  // unreachable
}

// ---------------------------------------------------------------------------
// Integration

ExtendedValue integrateAgainstG(const StepFunction& f, const DistortionFn& g) {
  if (f.values.size() != f.cuts.size() + 1)
    throw ValidationError("step function: values must have cuts.size()+1 entries");
  for (size_t i = 0; i < f.cuts.size(); ++i) {
    if (!(f.cuts[i] > 0 && f.cuts[i] < 1) ||
        (i > 0 && !(f.cuts[i] > f.cuts[i - 1])))
      throw ValidationError("step function: cuts must ascend inside (0,1)");
  }
  double total = 0;
  bool pos_inf = false, neg_inf = false;
  double gl_prev = 0.0;  // evalGLeft(0)
  for (size_t i = 0; i < f.values.size(); ++i) {
    double gl_next = (i < f.cuts.size()) ? g.evalGLeft(f.cuts[i]) : 1.0;
    double w = std::max(gl_next - gl_prev, 0.0);
    gl_prev = gl_next;
    if (w == 0.0) continue;
    double v = f.values[i];
    if (std::isinf(v)) {
      (v > 0 ? pos_inf : neg_inf) = true;
      continue;
    }
    total += w * v;
  }
  if (pos_inf && neg_inf)
    throw DomainError("step integral charges both +inf and -inf pieces");
  if (pos_inf)
    return ExtendedValue::infinite({0, kInf, "+inf piece with positive mass"});
  if (neg_inf)
    return ExtendedValue::infinite({0, kInf, "-inf piece with positive mass"}, -1.0);
  return total;
}

namespace {

using detail::LadderStatus;

struct Accum {
  double total = 0;
  std::optional<DivergenceNote> divergent;
  double sign = 1.0;

  void addDivergent(DivergenceNote note, double s = 1.0) {
    if (!divergent) {
      divergent = std::move(note);
      sign = s;
    }
  }
};

// Integrate h (= f times a weight) over [lo,hi] where h may be singular at
// the interval edges flagged by the caller.
void integratePiece(Accum& acc, const detail::Fn& h, double lo, double hi,
                    bool sing_lo, bool sing_hi, const std::vector<double>& pts,
                    const QuadOptions& opts) {
  if (acc.divergent) return;
  if (sing_lo && sing_hi) {
    double mid = 0.5 * (lo + hi);
    integratePiece(acc, h, lo, mid, true, false, pts, opts);
    integratePiece(acc, h, mid, hi, false, true, pts, opts);
    return;
  }
  if (sing_lo || sing_hi) {
    double edge = sing_lo ? lo : hi;
    double fixed = sing_lo ? hi : lo;
    auto out = detail::edgeLadder(h, fixed, edge, pts, opts);
    if (out.status == LadderStatus::Divergent) {
      acc.addDivergent({out.level, out.growth, "edge truncations fail the Cauchy test"});
      return;
    }
    if (out.status == LadderStatus::Inaccurate)
      throw AccuracyError("quadrature did not converge near a singular edge",
                          out.achieved);
    acc.total += (sing_lo ? out.value : out.value);
    return;
  }
  auto out = detail::gkPiecewise(h, lo, hi, pts, opts.rel_tol, opts.abs_tol,
                                 opts.max_panels);
  if (!out.finite) {
    acc.addDivergent({0, kInf, "non-finite integrand value inside the interval"});
    return;
  }
  if (out.err > std::max(opts.abs_tol * 1e3,
                         1e-8 * std::max(1.0, std::abs(out.value))))
    throw AccuracyError("adaptive quadrature did not converge", out.err);
  acc.total += out.value;
}

}  // namespace

ExtendedValue integrateAgainstG(const Integrand& f, const DistortionFn& g,
                                const QuadOptions& opts) {
  Accum acc;

  // atoms: the integrand is evaluated exactly at the atom location
  for (const auto& a : g.atoms()) {
    if (a.location == 0.0 && f.unbounded_near0) {
      acc.addDivergent({0, kInf, "atom at 0 meets an integrand unbounded at 0"});
      break;
    }
    double fv = f.f(a.location);
    if (std::isnan(fv)) throw DomainError("integrand evaluated to NaN at an atom");
    if (std::isinf(fv)) {
      acc.addDivergent({0, kInf, "infinite integrand value at an atom"},
                       fv > 0 ? 1.0 : -1.0);
      break;
    }
    acc.total += a.mass * fv;
  }
  if (acc.divergent)
    return ExtendedValue::infinite(*acc.divergent, acc.sign);

  switch (g.kind()) {
    case DistortionKind::Power: {
      // s = u^gamma maps mu_g to Lebesgue measure on [0,1]
      double gamma = g.param();
      auto h = [&f, gamma](double s) { return f.f(std::pow(s, 1.0 / gamma)); };
      std::vector<double> pts;
      for (double p : f.breakpoints) pts.push_back(std::pow(p, gamma));
      integratePiece(acc, h, 0.0, 1.0, f.unbounded_near0, f.unbounded_near1,
                     pts, opts);
      break;
    }
    case DistortionKind::ExampleCone: {
      integratePiece(
          acc, [&f](double u) { return f.f(u) * coneSlope(); }, 0.0, 0.75,
          f.unbounded_near0, false, f.breakpoints, opts);
      // On [3/4, 1) substitute v = 1 - g(u) = exp(-u/(1-u)), so dmu_g = -dv
      // and u = L/(1+L) with L = -log v.  Working in the offset coordinate v
      // keeps full floating-point resolution at the singular end u -> 1.
      auto h = [&f](double v) {
        double L = -std::log(v);
        return f.f(L / (1.0 + L));
      };
      double vmax = std::exp(-3.0);  // v at u = 3/4
      std::vector<double> pts;
      for (double p : f.breakpoints)
        if (p > 0.75) pts.push_back(std::exp(-p / (1.0 - p)));
      integratePiece(acc, h, 0.0, vmax, /*sing_lo=*/f.unbounded_near1, false,
                     pts, opts);
      break;
    }
    default: {
      for (const auto& s : g.segments()) {
        if (polyIsZero(s.coef)) continue;
        auto h = [&f, &s](double u) { return f.f(u) * polyEval(s.coef, u); };
        bool sing_lo = (s.lo == 0.0) && f.unbounded_near0;
        bool sing_hi = (s.hi == 1.0) && f.unbounded_near1;
        integratePiece(acc, h, s.lo, s.hi, sing_lo, sing_hi, f.breakpoints,
                       opts);
        if (acc.divergent) break;
      }
      break;
    }
  }
  if (acc.divergent) return ExtendedValue::infinite(*acc.divergent, acc.sign);
  return acc.total;
}

}  // namespace riskq
