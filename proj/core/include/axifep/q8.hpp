#pragma once

// Eight-node serendipity quadrilateral and tensor-product Gauss rules.

#include <array>

#include "axifep/types.hpp"

namespace axifep::fem {

struct Q8Eval {
  std::array<double, 8> value;
  std::array<Vec2, 8> dparent;  // (d/dxi, d/deta)
};

Q8Eval q8_shape(const Vec2& xi);

/// Parent coordinates of the eight nodes in element ordering.
const std::array<Vec2, 8>& q8_nodes();

struct GaussPoint {
  Vec2 xi;
  double weight;
};

/// Full 3x3 rule; index = 3 * (eta index) + (xi index).
const std::array<GaussPoint, 9>& gauss_3x3();

}  // namespace axifep::fem
