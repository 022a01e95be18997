#include "axifep/q8.hpp"

#include <cmath>

namespace axifep::fem {

const std::array<Vec2, 8>& q8_nodes() {
  static const std::array<Vec2, 8> nodes = {Vec2(-1, -1), Vec2(1, -1), Vec2(1, 1), Vec2(-1, 1),
                                            Vec2(0, -1),  Vec2(1, 0),  Vec2(0, 1), Vec2(-1, 0)};
  return nodes;
}

Q8Eval q8_shape(const Vec2& p) {
  const double x = p.x();
  const double y = p.y();
  Q8Eval e;
  const auto& nodes = q8_nodes();
  for (int a = 0; a < 4; ++a) {
    const double xa = nodes[a].x();
    const double ya = nodes[a].y();
    const double sx = 1.0 + xa * x;
    const double sy = 1.0 + ya * y;
    e.value[a] = 0.25 * sx * sy * (xa * x + ya * y - 1.0);
    e.dparent[a] = Vec2(0.25 * xa * sy * (2.0 * xa * x + ya * y),
                        0.25 * ya * sx * (xa * x + 2.0 * ya * y));
  }
  for (int a = 4; a < 8; ++a) {
    const double xa = nodes[a].x();
    const double ya = nodes[a].y();
    if (xa == 0.0) {
      e.value[a] = 0.5 * (1.0 - x * x) * (1.0 + ya * y);
      e.dparent[a] = Vec2(-x * (1.0 + ya * y), 0.5 * ya * (1.0 - x * x));
    } else {
      e.value[a] = 0.5 * (1.0 + xa * x) * (1.0 - y * y);
      e.dparent[a] = Vec2(0.5 * xa * (1.0 - y * y), -y * (1.0 + xa * x));
    }
  }
  return e;
}

const std::array<GaussPoint, 9>& gauss_3x3() {
  static const std::array<GaussPoint, 9> rule = [] {
    const double a = std::sqrt(0.6);
    const double pts[3] = {-a, 0.0, a};
    const double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    std::array<GaussPoint, 9> r{};
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) r[3 * j + i] = {Vec2(pts[i], pts[j]), w[i] * w[j]};
    return r;
  }();
  return rule;
}

}  // namespace axifep::fem
