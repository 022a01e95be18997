#include "axifep/dirichlet.hpp"

#include <cmath>
#include <sstream>

namespace axifep::fem {

void DirichletSet::add(int dof, double value) {
  if (!std::isfinite(value)) throw ConfigError("prescribed value must be finite");
  const auto [it, inserted] = values_.emplace(dof, value);
  if (!inserted && it->second != value) {
    std::ostringstream os;
    os << "dof " << dof << " prescribed twice with conflicting values " << it->second << " and "
       << value;
    throw ConfigError(os.str());
  }
}

void DirichletSet::add_nodes(const std::vector<int>& nodes, int dir, double value) {
  for (int n : nodes) add(dof_index(n, dir), value);
}

void DirichletSet::add_axis(const MeshAxi& mesh) {
  const auto it = mesh.bsets.find("axis");
  if (it != mesh.bsets.end()) add_nodes(it->second, 0, 0.0);
}

ReducedSystem apply_dirichlet(const SparseMat& K, const Eigen::VectorXd& residual,
                              const DirichletSet& bcs) {
  const int n = static_cast<int>(residual.size());
  ReducedSystem rs;
  std::vector<int> map(static_cast<std::size_t>(n), -1);
  for (int d = 0; d < n; ++d) {
    if (bcs.contains(d)) {
      rs.fixed_dofs.push_back(d);
    } else {
      map[static_cast<std::size_t>(d)] = static_cast<int>(rs.free_dofs.size());
      rs.free_dofs.push_back(d);
    }
  }
  for (const auto& [dof, v] : bcs.values())
    if (dof < 0 || dof >= n) throw ConfigError("prescribed dof " + std::to_string(dof) + " out of range");

  const int nf = static_cast<int>(rs.free_dofs.size());
  rs.r_f.resize(nf);
  for (int i = 0; i < nf; ++i) rs.r_f(i) = residual(rs.free_dofs[static_cast<std::size_t>(i)]);
  rs.reactions.resize(static_cast<int>(rs.fixed_dofs.size()));
  for (std::size_t i = 0; i < rs.fixed_dofs.size(); ++i)
    rs.reactions(static_cast<int>(i)) = residual(rs.fixed_dofs[i]);

  if (K.rows() == n && K.cols() == n) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(K.nonZeros()));
    for (int c = 0; c < K.outerSize(); ++c)
      for (SparseMat::InnerIterator it(K, c); it; ++it) {
        const int i = map[static_cast<std::size_t>(it.row())];
        const int j = map[static_cast<std::size_t>(it.col())];
        if (i >= 0 && j >= 0) trip.emplace_back(i, j, it.value());
      }
    rs.K_ff.resize(nf, nf);
    rs.K_ff.setFromTriplets(trip.begin(), trip.end());
  }
  return rs;
}

void impose(const DirichletSet& bcs, Eigen::VectorXd& u) {
  for (const auto& [dof, v] : bcs.values()) u(dof) = v;
}

}  // namespace axifep::fem
