#pragma once

// The thick-walled cylinder benchmark: geometry, material and the inner-wall
// shear ramp.

#include <string>
#include <vector>

#include "axifep/dirichlet.hpp"
#include "axifep/solver.hpp"

namespace axifep::fem {

struct CylinderSetup {
  double r_int = 10.0;
  double r_ext = 15.0;
  double height = 10.0;
  int n_r = 5;
  int n_z = 10;
  double u_bar = 1.0;  // radial displacement amplitude at the inner wall
};

/// E = 1.375e9, nu = 0.375, H = 765e6, kappa = 0, m = 1, p_c0 = -2.4e8.
mcc::MatParams benchmark_params();

/// Inner wall: u_r = u_bar (Z - H/2)(2/H) t, u_z = 0. Top and bottom: u_z = 0.
DirichletSet cylinder_ramp_bcs(const MeshAxi& mesh, const CylinderSetup& setup, double t);

struct TrackedPoint {
  std::string label;
  Vec2 pos;  // requested reference (R, Z)
  int gp = -1;
};

/// Points A-D of the benchmark: A inner top, B outer top, C inner bottom,
/// D outer bottom.
std::vector<TrackedPoint> benchmark_points(const CylinderSetup& setup);

/// Index of the Gauss point closest to pos in the reference configuration;
/// ties go to the lowest index.
int nearest_gp(const std::vector<GpRecord>& gps, const Vec2& pos);

}  // namespace axifep::fem
