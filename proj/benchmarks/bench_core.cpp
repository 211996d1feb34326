#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "riskq/distortion.hpp"
#include "riskq/premium.hpp"
#include "riskq/risk_measures.hpp"

using namespace riskq;

namespace {

std::vector<double> samples(std::size_t n) {
  std::uint64_t s = 99;
  std::vector<double> xs(n);
  for (auto& x : xs) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    x = static_cast<double>(z >> 11) * 0x1.0p-53 * 10.0 - 3.0;
  }
  return xs;
}

YoungFn kinked() { return YoungFn::piecewiseLinear({1.0}, {1.0, 2.0}); }

}  // namespace

static void BM_DistortionRhoStep(benchmark::State& state) {
  auto d = Distribution::empirical(samples(state.range(0)));
  auto g = DistortionFn::power(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(distortionRho(d, g));
}
BENCHMARK(BM_DistortionRhoStep)->Arg(64)->Arg(512)->Arg(4096);

static void BM_PremiumClosedForm(benchmark::State& state) {
  auto d = Distribution::empirical(samples(state.range(0))).positivePart();
  auto g = DistortionFn::tvarClamp(0.9);
  auto phi = YoungFn::power(2.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(orliczLorentzPremium(d, g, phi, 0.25).value);
}
BENCHMARK(BM_PremiumClosedForm)->Arg(64)->Arg(512)->Arg(4096);

static void BM_PremiumBracketed(benchmark::State& state) {
  auto d = Distribution::empirical(samples(state.range(0))).positivePart();
  auto g = DistortionFn::tvarClamp(0.9);
  auto phi = kinked();
  for (auto _ : state)
    benchmark::DoNotOptimize(orliczLorentzPremium(d, g, phi, 0.25).value);
}
BENCHMARK(BM_PremiumBracketed)->Arg(64)->Arg(512)->Arg(4096);

static void BM_DistortionHGMinimized(benchmark::State& state) {
  auto d = Distribution::empirical(samples(state.range(0)));
  auto g = DistortionFn::power(0.5);
  auto phi = kinked();
  for (auto _ : state)
    benchmark::DoNotOptimize(distortionHG(d, g, phi, 0.5).value);
}
BENCHMARK(BM_DistortionHGMinimized)->Arg(64)->Arg(512);

static void BM_DistortionHGLimit(benchmark::State& state) {
  auto d = Distribution::empirical(samples(state.range(0)));
  auto g = DistortionFn::power(0.5);
  auto phi = kinked();
  for (auto _ : state)
    benchmark::DoNotOptimize(distortionHG(d, g, phi, 0.0).value);
}
BENCHMARK(BM_DistortionHGLimit)->Arg(64)->Arg(512);

static void BM_PsiQuadratureSmooth(benchmark::State& state) {
  auto d = Distribution::exponential(1.0);
  auto g = DistortionFn::identity();
  auto phi = YoungFn::power(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(psi(d, g, phi, 2.0).value());
}
BENCHMARK(BM_PsiQuadratureSmooth);

BENCHMARK_MAIN();
