#pragma once

#include "riskq/distribution.hpp"

namespace riskq::fixtures {

// Unbounded-below risks used by the cone-domain membership scenarios.
// The pair demonstrates that a membership domain need not be closed under
// addition even for a concave distortion function.

// Quantile -e^{1/(2u)} on (0, 1/2], 0 on (1/2, 1].  Lower-tail growth
// coefficient 1/2, so it belongs to the cone example's domain.
Distribution coneX();

// Quantile -e^{1/u} on (0, 1]: the comonotonic-style sum of two copies of the
// previous risk's halves.  Growth coefficient 1; not in the cone domain.
Distribution coneXY();

}  // namespace riskq::fixtures
