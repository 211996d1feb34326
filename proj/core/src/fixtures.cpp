#include "riskq/fixtures.hpp"

#include <cmath>

namespace riskq::fixtures {

Distribution coneX() {
  auto quantile = [](double u) {
    return u <= 0.5 ? -std::exp(1.0 / (2.0 * u)) : 0.0;
  };
  // F(x) = 1/(2 ln(-x)) for x < -e, 1/2 on [-e, 0), 1 for x >= 0
  auto survival = [](double x) {
    if (x >= 0.0) return 0.0;
    if (x >= -std::exp(1.0)) return 0.5;
    return 1.0 - 0.5 / std::log(-x);
  };
  TailHint hint;
  hint.exp_inv_growth_lower = 0.5;
  return Distribution::fromQuantile(quantile, -kInf, 0.0, {0.5}, survival, hint);
}

Distribution coneXY() {
  auto quantile = [](double u) { return -std::exp(1.0 / u); };
  auto survival = [](double x) {
    if (x >= -std::exp(1.0)) return 0.0;
    return 1.0 - 1.0 / std::log(-x);
  };
  TailHint hint;
  hint.exp_inv_growth_lower = 1.0;
  return Distribution::fromQuantile(quantile, -kInf, -std::exp(1.0), {}, survival,
                                    hint);
}

}  // namespace riskq::fixtures
