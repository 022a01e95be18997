#include "axifep/scenario.hpp"

#include <limits>

namespace axifep::fem {

mcc::MatParams benchmark_params() {
  return mcc::MatParams::make(1.375e9, 0.375, 765e6, 0.0, 0.0, 1.0, -2.4e8);
}

DirichletSet cylinder_ramp_bcs(const MeshAxi& mesh, const CylinderSetup& setup, double t) {
  DirichletSet bcs;
  for (int n : mesh.bset("inner")) {
    const double z = mesh.nodes[static_cast<std::size_t>(n)].y();
    bcs.add(dof_index(n, 0), setup.u_bar * (z - 0.5 * setup.height) * (2.0 / setup.height) * t);
    bcs.add(dof_index(n, 1), 0.0);
  }
  bcs.add_nodes(mesh.bset("top"), 1, 0.0);
  bcs.add_nodes(mesh.bset("bottom"), 1, 0.0);
  bcs.add_axis(mesh);
  return bcs;
}

std::vector<TrackedPoint> benchmark_points(const CylinderSetup& s) {
  return {{"A", Vec2(s.r_int, s.height), -1},
          {"B", Vec2(s.r_ext, s.height), -1},
          {"C", Vec2(s.r_int, 0.0), -1},
          {"D", Vec2(s.r_ext, 0.0), -1}};
}

int nearest_gp(const std::vector<GpRecord>& gps, const Vec2& pos) {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gps.size(); ++i) {
    const double d = (gps[i].ref_pos - pos).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace axifep::fem
