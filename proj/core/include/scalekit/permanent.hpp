#pragma once

#include "scalekit/nonneg_matrix.hpp"
#include "scalekit/rational.hpp"

namespace scalekit {

// Exact permanent by Ryser's formula with Gray-code updates; n <= 12.
// Throws DimensionTooLarge above that.
Rational permanent_exact(const NonNegMatrix& a);

// Ryser over an arbitrary square rational matrix (signs allowed); same limit.
Rational permanent_exact(const std::vector<std::vector<Rational>>& rows);

}  // namespace scalekit
