#pragma once

// Prescribed displacements and the reduced (free-dof) linear system.

#include <map>
#include <string>
#include <vector>

#include "axifep/assembly.hpp"
#include "axifep/mesh.hpp"

namespace axifep::fem {

class DirichletSet {
 public:
  /// Prescribes one dof. Re-prescribing the same value is allowed; a
  /// different value throws ConfigError.
  void add(int dof, double value);
  /// Prescribes direction dir (0 radial, 1 axial) on every node of a set.
  void add_nodes(const std::vector<int>& nodes, int dir, double value);
  /// Radial dof = 0 on every node of the "axis" set.
  void add_axis(const MeshAxi& mesh);

  const std::map<int, double>& values() const { return values_; }
  bool empty() const { return values_.empty(); }
  bool contains(int dof) const { return values_.count(dof) != 0; }

 private:
  std::map<int, double> values_;
};

struct ReducedSystem {
  std::vector<int> free_dofs;
  std::vector<int> fixed_dofs;
  SparseMat K_ff;
  Eigen::VectorXd r_f;        // residual on free dofs
  Eigen::VectorXd reactions;  // residual on fixed dofs, ordered as fixed_dofs
};

/// Row/column elimination of the prescribed dofs. The displacement vector the
/// residual was evaluated at must already carry the prescribed values, so the
/// eliminated columns contribute nothing to the free right-hand side.
ReducedSystem apply_dirichlet(const SparseMat& K, const Eigen::VectorXd& residual,
                              const DirichletSet& bcs);

/// Writes the prescribed values into u.
void impose(const DirichletSet& bcs, Eigen::VectorXd& u);

}  // namespace axifep::fem
