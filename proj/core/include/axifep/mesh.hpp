#pragma once

// Structured Q8 meshes of the (R, Z) half-plane.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "axifep/types.hpp"

namespace axifep::fem {

/// Node ordering inside an element: corners counter-clockwise from (-1,-1),
/// then the midsides of edges (-1,-1)-(1,-1), (1,-1)-(1,1), (1,1)-(-1,1), (-1,1)-(-1,-1).
using Q8Conn = std::array<int, 8>;

struct MeshAxi {
  std::vector<Vec2> nodes;  // (R, Z)
  std::vector<Q8Conn> elems;
  /// Named boundary node sets: "inner", "outer", "bottom", "top", "axis".
  std::map<std::string, std::vector<int>> bsets;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elems() const { return static_cast<int>(elems.size()); }
  int num_dofs() const { return 2 * num_nodes(); }
  const std::vector<int>& bset(const std::string& name) const;
};

/// Degree of freedom index of node n in direction dir (0 = radial, 1 = axial).
constexpr int dof_index(int node, int dir) { return 2 * node + dir; }

/// Hollow cylinder R_int <= R <= R_ext, 0 <= Z <= H split into n_R x n_Z
/// elements. Throws ConfigError on invalid geometry.
MeshAxi gen_cylinder_mesh(double r_int, double r_ext, double height, int n_r, int n_z);

/// Reference coordinates of the nodes of one element.
std::array<Vec2, 8> element_coords(const MeshAxi& mesh, int elem);

}  // namespace axifep::fem
