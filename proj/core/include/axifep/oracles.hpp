#pragma once

// Brute-force reference computations used to verify the solver layers. They
// avoid the code paths they check: the sub-stepping integrator re-derives the
// energy, stress and yield function in full tensor form, the cavity fixture
// writes the trigonometric chain out explicitly, and the quadrature oracle
// carries its own shape functions and Gauss-Legendre rule.

#include <array>
#include <vector>

#include "axifep/material_mcc.hpp"
#include "axifep/solver.hpp"

namespace axifep::oracles {

struct CavityReport {
  Mat3 F_cart;
  Mat3 F_cyl;
  double J_cart;  // det F_cart
  double J_cyl;   // det F_cyl * r / R
};

/// Radial expansion r = alpha R of a hollow cylinder at angle Theta.
CavityReport cavity_fixture(double alpha, double R, double theta);

struct SubstepResult {
  Mat3 eps_e;
  Mat3 zeta;
  double z;
  double gamma;  // accumulated plastic multiplier
  bool plastic;
};

/// Forward-Euler integration of the associative flow rule along the piecewise
/// linear elastic-strain path, n_sub sub-steps per segment. The first path
/// entry is the initial elastic strain and must be admissible. n_sub >= 100.
SubstepResult substep_integrate(const std::vector<Mat3>& eps_path, double z0,
                                const mcc::MatParams& p, int n_sub);

struct FdReport {
  double h = 0.0;
  double max_rel_error = 0.0;  // max |K_fd - K| / max |K|
  int worst_row = -1;
  int worst_col = -1;
};

/// Central differences of the assembled internal force of the model's
/// formulation around u against its analytic stiffness. Only the dofs in
/// `dofs` are perturbed and compared (all dofs when empty).
FdReport fd_global_stiffness(const fem::Model& model, const Eigen::VectorXd& u, double h,
                             const std::vector<int>& dofs = {});

enum class QuadIntegrand { Volume, FIntComponent };

// Eigen vectors are not zeroed by value-initialisation.
inline std::array<Vec2, 8> zero_nodes() {
  std::array<Vec2, 8> a;
  a.fill(Vec2::Zero());
  return a;
}

struct QuadRequest {
  std::array<Vec2, 8> coords = zero_nodes();  // reference node positions, Q8 ordering
  QuadIntegrand tag = QuadIntegrand::Volume;
  // FIntComponent only: one load step from the stress-free state.
  std::array<Vec2, 8> u = zero_nodes();
  mcc::MatParams params{};
  int node = 0;
  int dir = 0;
  int points = 64;  // per parent axis
};

/// Tensor-product Gauss-Legendre integral over one element of
/// volume: R dR dZ; f_int component: J_p zeta : grad(psi_N e_dir) R dR dZ.
double quadrature_oracle(const QuadRequest& req);

/// n-point Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace axifep::oracles
