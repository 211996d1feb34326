#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "riskq/orders.hpp"

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
};
}  // namespace

TEST_CASE("stop-loss transform") {
  CHECK(stopLoss(Distribution::uniform(0, 1), 0.0).value() ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(stopLoss(Distribution::uniform(0, 1), 0.5).value() ==
        doctest::Approx(0.125).epsilon(1e-12));
  CHECK(stopLoss(Distribution::empirical({1, 2, 3}), 5.0).value() == 0.0);
  CHECK(stopLoss(Distribution::exponential(1.0), 2.0).value() ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
  auto heavy = stopLoss(Distribution::pareto(1.0, 0.5), 0.0);
  CHECK(heavy.isInf());
  CHECK(heavy.note().has_value());
}

TEST_CASE("stop-loss transform is nonincreasing and convex in the deductible") {
  Rng rng{4};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> xs(40);
    for (auto& x : xs) x = 10.0 * rng.uniform() - 3.0;
    auto d = Distribution::empirical(xs);
    std::vector<double> vals;
    for (int i = -10; i <= 20; ++i) vals.push_back(stopLoss(d, 0.5 * i).value());
    for (size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] <= vals[i - 1] + 1e-12);
    for (size_t i = 1; i + 1 < vals.size(); ++i)
      CHECK(vals[i + 1] - 2 * vals[i] + vals[i - 1] >= -1e-10);
  }
}

TEST_CASE("stochastic dominance") {
  auto d = Distribution::empirical({0.0, 1.0, 4.0});
  CHECK(stDominates(d, d.shift(1.0)).holds);
  CHECK(stDominates(d, d).holds);
  auto cross = stDominates(Distribution::empirical({1, 3}),
                           Distribution::empirical({2, 2}));
  CHECK_FALSE(cross.holds);
  CHECK(cross.witness.has_value());
  CHECK_FALSE(stDominates(d.shift(1.0), d).holds);
  CHECK(stDominates(Distribution::uniform(0, 1), Distribution::exponential(1.0))
            .holds);  // -log(1-u) >= u
}

TEST_CASE("stop-loss dominance") {
  // st-dominated pairs are sl-dominated
  auto d = Distribution::empirical({0.0, 2.0, 5.0});
  CHECK(slDominates(d, d.shift(0.5)).holds);
  // mean-preserving spread
  CHECK(slDominates(Distribution::empirical({1, 1}),
                    Distribution::empirical({0, 2})).holds);
  CHECK_FALSE(slDominates(Distribution::empirical({0, 2}),
                          Distribution::empirical({1, 1})).holds);
  CHECK_THROWS_AS(slDominates(Distribution::pareto(1.0, 0.5),
                              Distribution::pareto(1.0, 0.5)),
                  AccuracyError);
}

TEST_CASE("st implies sl on random pairs") {
  Rng rng{42};
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> xs(30), ys(30);
    for (int i = 0; i < 30; ++i) {
      xs[i] = 4.0 * rng.uniform();
      ys[i] = xs[i] + 2.0 * rng.uniform();  // pointwise larger
    }
    auto d1 = Distribution::empirical(xs);
    auto d2 = Distribution::empirical(ys);
    REQUIRE(stDominates(d1, d2).holds);
    CHECK(slDominates(d1, d2).holds);
  }
}

TEST_CASE("comonotonic coupling") {
  auto d = Distribution::exponential(1.0);
  auto pair = comonotonicCoupling(d, d, 64);
  CHECK(pair.xs == pair.ys);
  CHECK(std::is_sorted(pair.xs.begin(), pair.xs.end()));
  CHECK_THROWS_AS(comonotonicCoupling(d, d, 0), DomainError);

  // comonotonic coupling reproduces the comonotonic sum exactly
  CHECK(independentStyleSumCheck(pair));
}

TEST_CASE("any coupling is sl-dominated by the comonotonic rearrangement") {
  Rng rng{2718};
  for (int trial = 0; trial < 20; ++trial) {
    CoupledPair pair;
    std::size_t n = 16 + rng.next() % 64;
    pair.xs.resize(n);
    pair.ys.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pair.xs[i] = 5.0 * rng.uniform() - 1.0;
      pair.ys[i] = 3.0 * rng.uniform();
    }
    CHECK(independentStyleSumCheck(pair));
  }
  // anti-aligned pair from identical marginals
  CoupledPair anti;
  for (int i = 0; i < 32; ++i) {
    anti.xs.push_back(i);
    anti.ys.push_back(31 - i);
  }
  CHECK(independentStyleSumCheck(anti));
}
