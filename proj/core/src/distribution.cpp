#include "riskq/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace riskq {

namespace {

const TailHint kNoTail{};

void sortedUnique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void keepInterior(std::vector<double>& v) {
  v.erase(std::remove_if(v.begin(), v.end(),
                         [](double u) { return !(u > 0.0 && u < 1.0); }),
          v.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// Standard normal quantile.
//
// Initial estimate: P. J. Acklam's piecewise rational approximation
// (relative error below 1.15e-9 over (0,1)), refined by two Halley steps on
// erfc, which brings the result to within a few ulp.
double stdNormalQuantile(double p) {
  if (p <= 0.0) return -kInf;
  if (p >= 1.0) return kInf;

  static const double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;

  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
        (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
        ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  }

  static const double kSqrt2Pi = 2.5066282746310002;
  for (int i = 0; i < 2; ++i) {
    double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
  }
  return x;
}

// ---------------------------------------------------------------------------

struct Distribution::Rep {
  virtual ~Rep() = default;
  virtual double quantile(double u) const = 0;  // u in (0, 1]
  // Q(1-eps); override where the upper tail needs offset evaluation
  virtual double quantileUpper(double eps) const { return quantile(1.0 - eps); }
  virtual double survival(double x) const = 0;
  virtual double essInf() const = 0;
  virtual double essSup() const = 0;
  virtual void breakpoints(std::vector<double>& out) const { (void)out; }
  virtual std::optional<StepView> step() const { return std::nullopt; }
  virtual const TailHint& tail() const { return kNoTail; }
};

namespace {

using RepPtr = std::shared_ptr<const Distribution::Rep>;

// Piecewise-constant quantile: Q(u) = values[j] on (breaks[j-1], breaks[j]].
struct StepRep final : Distribution::Rep {
  std::vector<double> breaks;   // ascending, back() == 1
  std::vector<double> values;   // nondecreasing

  StepRep(std::vector<double> b, std::vector<double> v)
      : breaks(std::move(b)), values(std::move(v)) {}

  double quantile(double u) const override {
    auto it = std::lower_bound(breaks.begin(), breaks.end(), u);
    if (it == breaks.end()) --it;  // u == 1 with rounding slack
    return values[static_cast<size_t>(it - breaks.begin())];
  }
  double survival(double x) const override {
    auto it = std::upper_bound(values.begin(), values.end(), x);
    if (it == values.begin()) return 1.0;
    return 1.0 - breaks[static_cast<size_t>(it - values.begin()) - 1];
  }
  double essInf() const override { return values.front(); }
  double essSup() const override { return values.back(); }
  void breakpoints(std::vector<double>& out) const override {
    out.insert(out.end(), breaks.begin(), breaks.end() - 1);
  }
  std::optional<StepView> step() const override {
    return StepView{std::span(breaks), std::span(values)};
  }
};

// Continuous piecewise-linear quantile through knots (u[i], v[i]),
// constant on (0, u[0]].
struct PwlRep final : Distribution::Rep {
  std::vector<double> u;  // ascending, back() == 1
  std::vector<double> v;  // nondecreasing, finite

  PwlRep(std::vector<double> uu, std::vector<double> vv)
      : u(std::move(uu)), v(std::move(vv)) {}

  double quantile(double p) const override {
    if (p <= u.front()) return v.front();
    auto it = std::lower_bound(u.begin(), u.end(), p);
    size_t j = static_cast<size_t>(it - u.begin());
    if (u[j] == p) return v[j];
    double t = (p - u[j - 1]) / (u[j] - u[j - 1]);
    return v[j - 1] + t * (v[j] - v[j - 1]);
  }
  double survival(double x) const override {
    if (x < v.front()) return 1.0;
    if (x >= v.back()) return 0.0;
    // last knot with value <= x, then invert the strictly increasing segment
    auto it = std::upper_bound(v.begin(), v.end(), x);
    size_t j = static_cast<size_t>(it - v.begin()) - 1;
    double f;
    if (v[j + 1] == v[j]) {
      f = u[j + 1];
    } else {
      f = u[j] + (x - v[j]) / (v[j + 1] - v[j]) * (u[j + 1] - u[j]);
    }
    return 1.0 - f;
  }
  double essInf() const override { return v.front(); }
  double essSup() const override { return v.back(); }
  void breakpoints(std::vector<double>& out) const override {
    out.insert(out.end(), u.begin(), u.end() - 1);
  }
};

struct UniformRep final : Distribution::Rep {
  double a, b;
  UniformRep(double a_, double b_) : a(a_), b(b_) {}
  double quantile(double u) const override { return a + (b - a) * u; }
  double quantileUpper(double eps) const override { return b - (b - a) * eps; }
  double survival(double x) const override {
    if (x < a) return 1.0;
    if (x >= b) return 0.0;
    return (b - x) / (b - a);
  }
  double essInf() const override { return a; }
  double essSup() const override { return b; }
};

struct ExponentialRep final : Distribution::Rep {
  double rate;
  explicit ExponentialRep(double r) : rate(r) {}
  double quantile(double u) const override { return -std::log1p(-u) / rate; }
  double quantileUpper(double eps) const override {
    return eps <= 0 ? kInf : -std::log(eps) / rate;
  }
  double survival(double x) const override {
    return x <= 0.0 ? 1.0 : std::exp(-rate * x);
  }
  double essInf() const override { return 0.0; }
  double essSup() const override { return kInf; }
};

struct ParetoRep final : Distribution::Rep {
  double xm, shape;
  ParetoRep(double s, double a) : xm(s), shape(a) {}
  double quantile(double u) const override {
    return xm * std::pow(1.0 - u, -1.0 / shape);
  }
  double quantileUpper(double eps) const override {
    return xm * std::pow(eps, -1.0 / shape);
  }
  double survival(double x) const override {
    return x <= xm ? 1.0 : std::pow(xm / x, shape);
  }
  double essInf() const override { return xm; }
  double essSup() const override { return kInf; }
};

struct NormalRep final : Distribution::Rep {
  double mu, sigma;
  NormalRep(double m, double s) : mu(m), sigma(s) {}
  double quantile(double u) const override {
    return mu + sigma * stdNormalQuantile(u);
  }
  double quantileUpper(double eps) const override {
    return mu - sigma * stdNormalQuantile(eps);
  }
  double survival(double x) const override {
    return 0.5 * std::erfc((x - mu) / (sigma * std::numbers::sqrt2));
  }
  double essInf() const override { return -kInf; }
  double essSup() const override { return kInf; }
};

struct CallableRep final : Distribution::Rep {
  std::function<double(double)> qfn;
  std::function<double(double)> sfn;  // may be null
  double lo, hi;
  std::vector<double> bps;
  TailHint hint;

  double quantile(double u) const override { return qfn(u); }
  double survival(double x) const override;
  double essInf() const override { return lo; }
  double essSup() const override { return hi; }
  void breakpoints(std::vector<double>& out) const override {
    out.insert(out.end(), bps.begin(), bps.end());
  }
  const TailHint& tail() const override { return hint; }
};

// F(x) = sup{u : Q(u) <= x} by monotone bisection on u.
double bisectCdf(const Distribution::Rep& rep, double x) {
  if (rep.essSup() <= x) return 1.0;
  if (rep.quantile(1e-300) > x) return 0.0;
  double a = 0.0, b = 1.0;
  for (int i = 0; i < 200 && b - a > 1e-17; ++i) {
    double mid = 0.5 * (a + b);
    if (rep.quantile(mid) <= x) a = mid; else b = mid;
  }
  return a;
}

double CallableRep::survival(double x) const {
  if (sfn) return sfn(x);
  return 1.0 - bisectCdf(*this, x);
}

struct AffineRep final : Distribution::Rep {
  RepPtr inner;
  double a, b;  // a > 0
  AffineRep(RepPtr in, double a_, double b_) : inner(std::move(in)), a(a_), b(b_) {}
  double quantile(double u) const override { return a * inner->quantile(u) + b; }
  double quantileUpper(double eps) const override {
    return a * inner->quantileUpper(eps) + b;
  }
  double survival(double x) const override { return inner->survival((x - b) / a); }
  double essInf() const override { return a * inner->essInf() + b; }
  double essSup() const override { return a * inner->essSup() + b; }
  void breakpoints(std::vector<double>& out) const override {
    inner->breakpoints(out);
  }
  const TailHint& tail() const override { return inner->tail(); }
};

struct ClampRep final : Distribution::Rep {
  RepPtr inner;
  double lo, hi;
  ClampRep(RepPtr in, double lo_, double hi_)
      : inner(std::move(in)), lo(lo_), hi(hi_) {}
  double quantile(double u) const override {
    return std::min(std::max(inner->quantile(u), lo), hi);
  }
  double quantileUpper(double eps) const override {
    return std::min(std::max(inner->quantileUpper(eps), lo), hi);
  }
  double survival(double x) const override {
    if (x < lo) return 1.0;
    if (x >= hi) return 0.0;
    return inner->survival(x);
  }
  double essInf() const override {
    return std::min(std::max(inner->essInf(), lo), hi);
  }
  double essSup() const override {
    return std::min(std::max(inner->essSup(), lo), hi);
  }
  void breakpoints(std::vector<double>& out) const override {
    inner->breakpoints(out);
    if (std::isfinite(lo) && inner->essInf() < lo && lo < inner->essSup())
      out.push_back(1.0 - inner->survival(lo));
    if (std::isfinite(hi) && inner->essInf() < hi && hi < inner->essSup())
      out.push_back(1.0 - inner->survival(hi));
  }
};

struct SumRep final : Distribution::Rep {
  RepPtr lhs, rhs;
  SumRep(RepPtr l, RepPtr r) : lhs(std::move(l)), rhs(std::move(r)) {}
  double quantile(double u) const override {
    double q = lhs->quantile(u) + rhs->quantile(u);
    if (std::isnan(q))
      throw ValidationError("comonotonic sum of opposite-signed infinite quantiles");
    return q;
  }
  double quantileUpper(double eps) const override {
    return lhs->quantileUpper(eps) + rhs->quantileUpper(eps);
  }
  double survival(double x) const override { return 1.0 - bisectCdf(*this, x); }
  double essInf() const override { return lhs->essInf() + rhs->essInf(); }
  double essSup() const override { return lhs->essSup() + rhs->essSup(); }
  void breakpoints(std::vector<double>& out) const override {
    lhs->breakpoints(out);
    rhs->breakpoints(out);
  }
};

std::shared_ptr<const StepRep> makeStep(std::vector<double> breaks,
                                        std::vector<double> values) {
  // merge adjacent pieces carrying the same value
  std::vector<double> nb, nv;
  nb.reserve(breaks.size());
  nv.reserve(values.size());
  for (size_t j = 0; j < breaks.size(); ++j) {
    if (!nv.empty() && nv.back() == values[j]) {
      nb.back() = breaks[j];
    } else {
      nb.push_back(breaks[j]);
      nv.push_back(values[j]);
    }
  }
  return std::make_shared<StepRep>(std::move(nb), std::move(nv));
}

// Apply a nondecreasing map to the values of a step quantile.
template <class F>
RepPtr mapStep(const StepView& sv, F&& f) {
  std::vector<double> b(sv.breaks.begin(), sv.breaks.end());
  std::vector<double> v(sv.values.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = f(sv.values[i]);
  return makeStep(std::move(b), std::move(v));
}

}  // namespace

// ---------------------------------------------------------------------------
// Factories

Distribution Distribution::empirical(std::vector<double> samples) {
  if (samples.empty()) throw ValidationError("empirical: no samples");
  for (double s : samples)
    if (!std::isfinite(s)) throw ValidationError("empirical: non-finite sample");
  std::sort(samples.begin(), samples.end());
  const size_t n = samples.size();
  std::vector<double> breaks(n);
  for (size_t i = 0; i < n; ++i)
    breaks[i] = static_cast<double>(i + 1) / static_cast<double>(n);
  return Distribution(makeStep(std::move(breaks), std::move(samples)));
}

Distribution Distribution::discrete(std::vector<double> points,
                                    std::vector<double> probs) {
  if (points.empty() || points.size() != probs.size())
    throw ValidationError("discrete: points/probs size mismatch");
  std::vector<size_t> idx(points.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return points[a] < points[b]; });
  double total = 0;
  std::vector<double> breaks, values;
  for (size_t i : idx) {
    if (!std::isfinite(points[i])) throw ValidationError("discrete: non-finite point");
    if (probs[i] < 0) throw ValidationError("discrete: negative probability");
    if (probs[i] == 0) continue;
    total += probs[i];
    breaks.push_back(total);
    values.push_back(points[i]);
  }
  if (breaks.empty() || std::abs(total - 1.0) > 1e-12)
    throw ValidationError("discrete: probabilities must sum to 1");
  breaks.back() = 1.0;
  return Distribution(makeStep(std::move(breaks), std::move(values)));
}

Distribution Distribution::uniform(double a, double b) {
  if (!(a <= b) || !std::isfinite(a) || !std::isfinite(b))
    throw ValidationError("uniform: require finite a <= b");
  if (a == b) return constant(a);
  return Distribution(std::make_shared<UniformRep>(a, b));
}

Distribution Distribution::exponential(double rate) {
  if (!(rate > 0)) throw ValidationError("exponential: rate must be positive");
  return Distribution(std::make_shared<ExponentialRep>(rate));
}

Distribution Distribution::pareto(double scale, double shape) {
  if (!(scale > 0) || !(shape > 0))
    throw ValidationError("pareto: scale and shape must be positive");
  return Distribution(std::make_shared<ParetoRep>(scale, shape));
}

Distribution Distribution::normal(double mean, double sd) {
  if (!(sd >= 0) || !std::isfinite(mean) || !std::isfinite(sd))
    throw ValidationError("normal: bad parameters");
  if (sd == 0) return constant(mean);
  return Distribution(std::make_shared<NormalRep>(mean, sd));
}

Distribution Distribution::twoPoint(double x0, double x1, double p) {
  if (!(x0 < x1)) throw ValidationError("two_point: require x0 < x1");
  if (!(p >= 0 && p <= 1)) throw ValidationError("two_point: p outside [0,1]");
  if (p == 0) return constant(x0);
  if (p == 1) return constant(x1);
  return Distribution(makeStep({1.0 - p, 1.0}, {x0, x1}));
}

Distribution Distribution::piecewiseQuantile(std::vector<double> breaks,
                                             std::vector<double> values,
                                             QuantileInterp interp) {
  if (breaks.empty() || breaks.size() != values.size())
    throw ValidationError("quantile_pw: breaks/values size mismatch");
  for (size_t i = 0; i + 1 < breaks.size(); ++i)
    if (!(breaks[i] < breaks[i + 1]))
      throw ValidationError("quantile_pw: breaks must be strictly increasing");
  if (!(breaks.front() > 0) || std::abs(breaks.back() - 1.0) > 1e-12)
    throw ValidationError("quantile_pw: breaks must lie in (0,1] and end at 1");
  breaks.back() = 1.0;
  for (size_t i = 0; i + 1 < values.size(); ++i)
    if (!(values[i] <= values[i + 1]))
      throw ValidationError("quantile_pw: values must be nondecreasing");
  for (size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) throw ValidationError("quantile_pw: NaN value");
    bool edge = (i == 0 || i + 1 == values.size());
    if (!std::isfinite(values[i]) && !(edge && interp == QuantileInterp::Step))
      throw ValidationError(
          "quantile_pw: infinite values only at the edges of a step quantile");
  }
  if (interp == QuantileInterp::Step)
    return Distribution(makeStep(std::move(breaks), std::move(values)));
  return Distribution(std::make_shared<PwlRep>(std::move(breaks), std::move(values)));
}

Distribution Distribution::constant(double b) {
  if (!std::isfinite(b)) throw ValidationError("constant: non-finite value");
  return Distribution(makeStep({1.0}, {b}));
}

Distribution Distribution::fromQuantile(std::function<double(double)> quantile,
                                        double ess_inf, double ess_sup,
                                        std::vector<double> breakpoints,
                                        std::function<double(double)> survival,
                                        TailHint tail) {
  auto rep = std::make_shared<CallableRep>();
  rep->qfn = std::move(quantile);
  rep->sfn = std::move(survival);
  rep->lo = ess_inf;
  rep->hi = ess_sup;
  sortedUnique(breakpoints);
  keepInterior(breakpoints);
  rep->bps = std::move(breakpoints);
  rep->hint = tail;
  return Distribution(std::move(rep));
}

// ---------------------------------------------------------------------------
// Observers

double Distribution::quantile(double u) const {
  if (!(u > 0.0 && u <= 1.0))
    throw DomainError("quantile: u must lie in (0,1]");
  return rep_->quantile(u);
}

double Distribution::quantileUpper(double eps) const {
  if (!(eps >= 0.0 && eps < 1.0))
    throw DomainError("quantileUpper: eps must lie in [0,1)");
  return rep_->quantileUpper(eps);
}

double Distribution::survival(double x) const { return rep_->survival(x); }
double Distribution::essInf() const { return rep_->essInf(); }
double Distribution::essSup() const { return rep_->essSup(); }

std::vector<double> Distribution::quantileBreakpoints() const {
  std::vector<double> out;
  rep_->breakpoints(out);
  sortedUnique(out);
  keepInterior(out);
  return out;
}

std::optional<StepView> Distribution::stepView() const { return rep_->step(); }

std::vector<double> Distribution::supportPoints() const {
  std::vector<double> out;
  if (auto sv = rep_->step()) {
    for (double v : sv->values)
      if (std::isfinite(v)) out.push_back(v);
  } else if (auto* pwl = dynamic_cast<const PwlRep*>(rep_.get())) {
    out = pwl->v;
  }
  sortedUnique(out);
  return out;
}

const TailHint& Distribution::tailHint() const { return rep_->tail(); }

// ---------------------------------------------------------------------------
// Transforms

Distribution Distribution::shift(double b) const {
  if (!std::isfinite(b)) throw DomainError("shift: non-finite offset");
  if (b == 0) return *this;
  if (auto sv = rep_->step())
    return Distribution(mapStep(*sv, [b](double v) { return v + b; }));
  if (auto* pwl = dynamic_cast<const PwlRep*>(rep_.get())) {
    std::vector<double> v(pwl->v);
    for (double& x : v) x += b;
    return Distribution(std::make_shared<PwlRep>(pwl->u, std::move(v)));
  }
  if (auto* aff = dynamic_cast<const AffineRep*>(rep_.get()))
    return Distribution(std::make_shared<AffineRep>(aff->inner, aff->a, aff->b + b));
  return Distribution(std::make_shared<AffineRep>(rep_, 1.0, b));
}

Distribution Distribution::scale(double lambda) const {
  if (!(lambda >= 0) || !std::isfinite(lambda))
    throw DomainError("scale: factor must be finite and nonnegative");
  if (lambda == 0) return zero();
  if (lambda == 1) return *this;
  if (auto sv = rep_->step())
    return Distribution(mapStep(*sv, [lambda](double v) { return lambda * v; }));
  if (auto* pwl = dynamic_cast<const PwlRep*>(rep_.get())) {
    std::vector<double> v(pwl->v);
    for (double& x : v) x *= lambda;
    return Distribution(std::make_shared<PwlRep>(pwl->u, std::move(v)));
  }
  if (auto* aff = dynamic_cast<const AffineRep*>(rep_.get()))
    return Distribution(
        std::make_shared<AffineRep>(aff->inner, lambda * aff->a, lambda * aff->b));
  return Distribution(std::make_shared<AffineRep>(rep_, lambda, 0.0));
}

Distribution Distribution::clamp(double lo, double hi) const {
  if (!(lo <= hi)) throw DomainError("clamp: require lo <= hi");
  if (auto sv = rep_->step())
    return Distribution(mapStep(
        *sv, [lo, hi](double v) { return std::min(std::max(v, lo), hi); }));
  if (auto* pwl = dynamic_cast<const PwlRep*>(rep_.get())) {
    // insert knots where the quantile crosses the clamp levels, then clamp
    std::vector<double> u, v;
    auto push = [&](double uu, double vv) {
      if (!u.empty() && u.back() == uu && v.back() == vv) return;
      u.push_back(uu);
      v.push_back(vv);
    };
    for (size_t i = 0; i + 1 <= pwl->u.size(); ++i) {
      push(pwl->u[i], std::min(std::max(pwl->v[i], lo), hi));
      if (i + 1 == pwl->u.size()) break;
      double v0 = pwl->v[i], v1 = pwl->v[i + 1];
      double u0 = pwl->u[i], u1 = pwl->u[i + 1];
      for (double level : {lo, hi}) {
        if (std::isfinite(level) && v0 < level && level < v1) {
          double t = (level - v0) / (v1 - v0);
          push(u0 + t * (u1 - u0), level);
        }
      }
    }
    std::vector<size_t> order(u.size());
    for (size_t i = 0; i < u.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return u[a] < u[b]; });
    std::vector<double> uu, vv;
    for (size_t i : order) {
      if (!uu.empty() && uu.back() == u[i]) continue;
      uu.push_back(u[i]);
      vv.push_back(v[i]);
    }
    return Distribution(std::make_shared<PwlRep>(std::move(uu), std::move(vv)));
  }
  return Distribution(std::make_shared<ClampRep>(rep_, lo, hi));
}

Distribution Distribution::positivePart() const { return clamp(0.0, kInf); }
Distribution Distribution::negativePartNeg() const { return clamp(-kInf, 0.0); }
Distribution Distribution::excess(double x) const {
  if (!std::isfinite(x)) throw DomainError("excess: non-finite threshold");
  return shift(-x).positivePart();
}

Distribution Distribution::comonotonicSum(const Distribution& d1,
                                          const Distribution& d2) {
  // adding a constant is a shift
  if (d2.essInf() == d2.essSup() && std::isfinite(d2.essInf()))
    return d1.shift(d2.essInf());
  if (d1.essInf() == d1.essSup() && std::isfinite(d1.essInf()))
    return d2.shift(d1.essInf());

  auto s1 = d1.stepView(), s2 = d2.stepView();
  if (s1 && s2) {
    std::vector<double> merged(s1->breaks.begin(), s1->breaks.end());
    merged.insert(merged.end(), s2->breaks.begin(), s2->breaks.end());
    sortedUnique(merged);
    std::vector<double> vals(merged.size());
    for (size_t i = 0; i < merged.size(); ++i)
      vals[i] = d1.rep_->quantile(merged[i]) + d2.rep_->quantile(merged[i]);
    return Distribution(makeStep(std::move(merged), std::move(vals)));
  }
  auto* p1 = dynamic_cast<const PwlRep*>(d1.rep_.get());
  auto* p2 = dynamic_cast<const PwlRep*>(d2.rep_.get());
  if (p1 && p2) {
    std::vector<double> merged(p1->u);
    merged.insert(merged.end(), p2->u.begin(), p2->u.end());
    sortedUnique(merged);
    std::vector<double> vals(merged.size());
    for (size_t i = 0; i < merged.size(); ++i)
      vals[i] = p1->quantile(merged[i]) + p2->quantile(merged[i]);
    return Distribution(std::make_shared<PwlRep>(std::move(merged), std::move(vals)));
  }
  return Distribution(std::make_shared<SumRep>(d1.rep_, d2.rep_));
}

}  // namespace riskq
