#include "axifep/mesh.hpp"

#include <cmath>
#include <sstream>

namespace axifep::fem {

const std::vector<int>& MeshAxi::bset(const std::string& name) const {
  const auto it = bsets.find(name);
  if (it == bsets.end()) throw ConfigError("unknown boundary set '" + name + "'");
  return it->second;
}

MeshAxi gen_cylinder_mesh(double r_int, double r_ext, double height, int n_r, int n_z) {
  std::ostringstream err;
  if (!(r_int > 0.0)) err << "R_int must be positive; ";
  if (!(r_ext > r_int)) err << "R_ext must exceed R_int; ";
  if (!(height > 0.0)) err << "H must be positive; ";
  if (n_r < 1 || n_z < 1) err << "element counts must be at least 1; ";
  if (!err.str().empty()) throw ConfigError("invalid cylinder mesh: " + err.str());

  // Lattice (i, j) with 0 <= i <= 2 n_r, 0 <= j <= 2 n_z; points with both
  // indices odd are element centres and carry no node.
  const int ni = 2 * n_r + 1;
  const int nj = 2 * n_z + 1;
  std::vector<int> id(static_cast<std::size_t>(ni * nj), -1);
  MeshAxi mesh;
  mesh.nodes.reserve(static_cast<std::size_t>(ni * nj - n_r * n_z));
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < ni; ++i) {
      if (i % 2 == 1 && j % 2 == 1) continue;
      id[static_cast<std::size_t>(j * ni + i)] = mesh.num_nodes();
      const double r = (i == ni - 1) ? r_ext : r_int + (r_ext - r_int) * i / (ni - 1);
      const double z = (j == nj - 1) ? height : height * j / (nj - 1);
      mesh.nodes.emplace_back(r, z);
    }
  auto at = [&](int i, int j) { return id[static_cast<std::size_t>(j * ni + i)]; };

  for (int ez = 0; ez < n_z; ++ez)
    for (int er = 0; er < n_r; ++er) {
      const int i0 = 2 * er;
      const int j0 = 2 * ez;
      mesh.elems.push_back({at(i0, j0), at(i0 + 2, j0), at(i0 + 2, j0 + 2), at(i0, j0 + 2),
                            at(i0 + 1, j0), at(i0 + 2, j0 + 1), at(i0 + 1, j0 + 2),
                            at(i0, j0 + 1)});
    }

  auto& inner = mesh.bsets["inner"];
  auto& outer = mesh.bsets["outer"];
  auto& bottom = mesh.bsets["bottom"];
  auto& top = mesh.bsets["top"];
  auto& axis = mesh.bsets["axis"];
  for (int j = 0; j < nj; ++j) {
    if (at(0, j) >= 0) inner.push_back(at(0, j));
    if (at(ni - 1, j) >= 0) outer.push_back(at(ni - 1, j));
  }
  for (int i = 0; i < ni; ++i) {
    bottom.push_back(at(i, 0));
    top.push_back(at(i, nj - 1));
  }
  for (int n = 0; n < mesh.num_nodes(); ++n)
    if (mesh.nodes[static_cast<std::size_t>(n)].x() == 0.0) axis.push_back(n);
  return mesh;
}

std::array<Vec2, 8> element_coords(const MeshAxi& mesh, int elem) {
  std::array<Vec2, 8> c;
  const Q8Conn& conn = mesh.elems.at(static_cast<std::size_t>(elem));
  for (int a = 0; a < 8; ++a) c[static_cast<std::size_t>(a)] = mesh.nodes[static_cast<std::size_t>(conn[a])];
  return c;
}

}  // namespace axifep::fem
