#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "riskq/distribution.hpp"

using namespace riskq;

namespace {

// deterministic generator for the property checks
struct Rng {
  std::uint64_t s;
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

std::vector<Distribution> menagerie() {
  return {
      Distribution::empirical({1, 2, 3, 4, 5}),
      Distribution::empirical({-2.5, -1, 0, 0, 7.25}),
      Distribution::discrete({-1, 0, 2}, {0.25, 0.5, 0.25}),
      Distribution::uniform(0, 1),
      Distribution::uniform(-3, 4),
      Distribution::exponential(1.0),
      Distribution::pareto(1.0, 2.0),
      Distribution::normal(0.0, 1.0),
      Distribution::twoPoint(0, 1, 0.5),
      Distribution::piecewiseQuantile({0.25, 0.5, 1.0}, {-1, 0, 3},
                                      QuantileInterp::Step),
      Distribution::piecewiseQuantile({0.25, 0.5, 1.0}, {-1, 0, 3},
                                      QuantileInterp::Linear),
      Distribution::constant(2.0),
  };
}

}  // namespace

TEST_CASE("empirical quantile follows y_ceil(u n)") {
  auto d = Distribution::empirical({1, 2, 3, 4, 5});
  CHECK(d.quantile(0.5) == 3.0);
  CHECK(d.quantile(1.0) == 5.0);
  CHECK(d.quantile(0.2) == 1.0);       // exactly at a breakpoint
  CHECK(d.quantile(0.2 + 1e-12) == 2.0);
  CHECK(d.quantile(1e-9) == 1.0);
  CHECK_THROWS_AS(d.quantile(0.0), DomainError);
  CHECK_THROWS_AS(d.quantile(1.5), DomainError);
}

TEST_CASE("parametric quantiles") {
  CHECK(Distribution::uniform(0, 1).quantile(0.25) == 0.25);
  CHECK(Distribution::exponential(2.0).quantile(0.5) ==
        doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-14));
  CHECK(Distribution::pareto(1.0, 2.0).quantile(0.75) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(Distribution::exponential(1.0).quantile(1.0) == kInf);
  // standard normal quantile against classical table values
  CHECK(Distribution::normal(0, 1).quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(Distribution::normal(0, 1).quantile(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(Distribution::normal(1, 2).quantile(0.841344746068543) ==
        doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("survival examples") {
  CHECK(Distribution::uniform(0, 1).survival(0.3) == doctest::Approx(0.7));
  CHECK(Distribution::twoPoint(0, 1, 0.5).survival(0.0) == 0.5);
  CHECK(Distribution::empirical({1, 2, 3, 4, 5}).survival(3.0) == 0.4);
  CHECK(Distribution::empirical({1, 2, 3, 4, 5}).survival(5.0) == 0.0);
  CHECK(Distribution::empirical({1, 2, 3, 4, 5}).survival(0.5) == 1.0);
}

TEST_CASE("excess transform") {
  auto u = Distribution::uniform(0, 1).excess(0.5);
  for (double p : {0.1, 0.5, 0.7, 0.99})
    CHECK(u.quantile(p) == doctest::Approx(std::max(p - 0.5, 0.0)).epsilon(1e-14));

  auto z = Distribution::empirical({1, 2, 3}).excess(5.0);
  CHECK(z.isZero());

  auto e = Distribution::empirical({-1, 2}).excess(0.0);
  CHECK(e.quantile(0.5) == 0.0);
  CHECK(e.quantile(1.0) == 2.0);
}

TEST_CASE("shift, scale, clamp") {
  CHECK(Distribution::uniform(0, 1).shift(2.0).quantile(0.5) == 2.5);
  CHECK(Distribution::exponential(1.0).scale(0.0).isZero());
  auto c = Distribution::empirical({-5, 0, 5}).clamp(-1, 1);
  CHECK(c.quantile(1.0 / 3) == -1.0);
  CHECK(c.quantile(2.0 / 3) == 0.0);
  CHECK(c.quantile(1.0) == 1.0);
  CHECK_THROWS_AS(Distribution::uniform(0, 1).scale(-1.0), DomainError);
  CHECK_THROWS_AS(Distribution::uniform(0, 1).clamp(1.0, 0.0), DomainError);
}

TEST_CASE("comonotonic sums") {
  auto s = Distribution::comonotonicSum(Distribution::uniform(0, 1),
                                        Distribution::uniform(0, 1));
  for (double p : {0.25, 0.5, 0.75})
    CHECK(s.quantile(p) == doctest::Approx(2 * p).epsilon(1e-14));

  auto d = Distribution::empirical({3, 1, 4});
  auto same = Distribution::comonotonicSum(d, Distribution::zero());
  for (double p : {0.1, 0.5, 0.9})
    CHECK(same.quantile(p) == d.quantile(p));

  auto e = Distribution::comonotonicSum(Distribution::empirical({1, 2}),
                                        Distribution::empirical({10, 20}));
  CHECK(e.quantile(0.5) == 11.0);
  CHECK(e.quantile(1.0) == 22.0);
}

TEST_CASE("quantiles are nondecreasing on a dense grid") {
  const int kGrid = 10000;
  for (const auto& d : menagerie()) {
    double prev = -kInf;
    for (int i = 1; i <= kGrid; ++i) {
      double q = d.quantile(static_cast<double>(i) / kGrid);
      CHECK(q >= prev);
      prev = q;
    }
    CHECK(d.essSup() >= d.essInf());
    if (std::isfinite(d.essSup())) CHECK(d.quantile(1.0) == d.essSup());
  }
}

TEST_CASE("Galois duality between quantile and cdf") {
  Rng rng{2024};
  for (const auto& d : menagerie()) {
    for (int k = 0; k < 400; ++k) {
      double u = std::min(std::max(rng.uniform(), 1e-9), 1.0 - 1e-12);
      double x = d.quantile(0.05 + 0.9 * rng.uniform());
      if (!std::isfinite(x)) continue;
      bool lhs = u <= d.cdf(x);
      bool rhs = d.quantile(u) <= x;
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("survival round-trip against the quantile") {
  for (const auto& d : menagerie()) {
    for (int i = 1; i < 100; ++i) {
      double u = i / 100.0;
      double q = d.quantile(u);
      if (!std::isfinite(q)) continue;
      // survival just below the quantile keeps at least 1-u mass
      CHECK(d.survival(q - 1e-9) >= 1.0 - u - 1e-9);
    }
  }
}

TEST_CASE("excess then shift identity") {
  for (const auto& d : menagerie()) {
    for (double x : {-1.0, 0.0, 0.4, 2.0}) {
      auto e = d.excess(x);
      for (int i = 1; i <= 50; ++i) {
        double u = i / 50.0;
        double q = d.quantile(u);
        if (!std::isfinite(q)) continue;
        CHECK(e.quantile(u) + x == doctest::Approx(std::max(q, x)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("scaling distributes over comonotonic sums") {
  auto d = Distribution::empirical({-1, 0.5, 2, 8});
  auto s = Distribution::comonotonicSum(d.scale(0.75), d.scale(1.5));
  for (int i = 1; i <= 40; ++i) {
    double u = i / 40.0;
    CHECK(s.quantile(u) == doctest::Approx(2.25 * d.quantile(u)).epsilon(1e-14));
  }
}

TEST_CASE("piecewise quantile validation") {
  CHECK_THROWS_AS(Distribution::piecewiseQuantile({0.5, 1.0}, {2, 1},
                                                  QuantileInterp::Step),
                  ValidationError);
  CHECK_THROWS_AS(Distribution::piecewiseQuantile({0.5, 0.9}, {1, 2},
                                                  QuantileInterp::Step),
                  ValidationError);
  CHECK_THROWS_AS(
      Distribution::piecewiseQuantile({0.5, 1.0}, {-kInf, 2.0},
                                      QuantileInterp::Linear),
      ValidationError);
  // infinite edge on a step quantile is allowed
  auto d = Distribution::piecewiseQuantile({0.25, 1.0}, {-kInf, 1.0},
                                           QuantileInterp::Step);
  CHECK(d.quantile(0.2) == -kInf);
  CHECK(d.essInf() == -kInf);
}

TEST_CASE("discrete validation and aggregation") {
  CHECK_THROWS_AS(Distribution::discrete({1, 2}, {0.5, 0.6}), ValidationError);
  auto d = Distribution::discrete({2, 1, 1}, {0.25, 0.25, 0.5});
  CHECK(d.quantile(0.75) == 1.0);
  CHECK(d.quantile(0.76) == 2.0);
  CHECK(d.survival(1.0) == doctest::Approx(0.25));
}

TEST_CASE("piecewise linear survival inverts the quantile") {
  auto d = Distribution::piecewiseQuantile({0.2, 0.6, 1.0}, {0.0, 1.0, 1.0},
                                           QuantileInterp::Linear);
  CHECK(d.quantile(0.1) == 0.0);
  CHECK(d.quantile(0.4) == doctest::Approx(0.5));
  CHECK(d.survival(0.5) == doctest::Approx(0.6));
  CHECK(d.survival(1.0) == 0.0);   // flat top: all mass at or below 1
  CHECK(d.survival(-0.1) == 1.0);
}
