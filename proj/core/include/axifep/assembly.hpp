#pragma once

// Residual and consistent stiffness of the axisymmetric Q8 discretisation in
// the Updated- and Total-Lagrangian forms.
//
// Volumes, forces and stiffness are per radian: the 2 pi factor of the
// axisymmetric integrals cancels in the Newton update and is dropped.
//
// In the axisymmetric pattern the mixed components of symmetric tensors equal
// their physical components, so b^e, zeta and the Kirchhoff stress are stored
// as ordinary symmetric matrices. Two-point tensors keep their mixed
// components (hoop entry identically 1); physical_defgrad converts.

#include <Eigen/Sparse>
#include <array>
#include <vector>

#include "axifep/material_mcc.hpp"
#include "axifep/mesh.hpp"

namespace axifep::fem {

enum class Formulation { UL, TL };

const char* to_string(Formulation f);

using SparseMat = Eigen::SparseMatrix<double>;

/// Kinematic and constitutive state of one Gauss point at a time station.
struct GpState {
  mcc::MatState mat;
  Mat3 F = Mat3::Identity();       // two-point mixed components X^a_A
  Mat3 Cp_inv = Mat3::Identity();  // inverse plastic right Cauchy-Green (physical)
  double r = 1.0;                  // current radius
  double z_cur = 0.0;              // current axial position
  double J = 1.0;
  double J_p = 1.0;
  Mat3 sigma = Mat3::Zero();  // Cauchy stress
};

struct GpRecord {
  int elem = -1;
  int gp = -1;
  double weight = 0.0;
  Vec2 xi = Vec2::Zero();
  Vec2 ref_pos = Vec2::Zero();  // (R, Z)
  double dV0 = 0.0;             // R * weight * det(dX/dxi)
  std::array<double, 8> shape{};
  std::array<Vec2, 8> dshape_ref{};  // dPsi_N / d(R, Z)
  GpState committed;
  GpState trial;
};

/// Builds the Gauss-point records of a mesh in the undeformed state.
std::vector<GpRecord> make_gp_records(const MeshAxi& mesh);

/// Physical components of a two-point tensor given in mixed components.
Mat3 physical_defgrad(const Mat3& f_mixed, double r_ref, double r_cur);

struct AssemblyOptions {
  bool with_stiffness = true;
  int threads = 0;  // 0: AXIFEP_THREADS or hardware concurrency
};

struct AssemblyResult {
  Eigen::VectorXd f_int;  // full dof vector
  SparseMat K;            // empty unless requested
};

/// Updated-Lagrangian assembly: shape derivatives on the current geometry and
/// the deformation gradient built incrementally from the last converged step.
/// Trial states are written into GpRecord::trial.
AssemblyResult assemble_ul(const MeshAxi& mesh, std::vector<GpRecord>& gps,
                           const Eigen::VectorXd& u_total, const Eigen::VectorXd& u_inc,
                           const mcc::MatParams& params, const AssemblyOptions& opt = {});

/// Total-Lagrangian assembly with reference shape derivatives and the total
/// deformation gradient.
AssemblyResult assemble_tl(const MeshAxi& mesh, std::vector<GpRecord>& gps,
                           const Eigen::VectorXd& u_total, const mcc::MatParams& params,
                           const AssemblyOptions& opt = {});

/// Spatial Kirchhoff-based tangent at one Gauss point: d(tau : G) = G : a : l
/// with l the spatial gradient of the displacement increment.
struct SpatialResponse {
  mcc::ReturnResult rr;
  Mat3 tau;
  Tensor4 a;
  double J_e;
  double J_p;
};

SpatialResponse spatial_response(const Mat3& b_trial, double z_prev, double J,
                                 const mcc::MatParams& params, bool with_tangent);

/// Number of worker threads used by the assembly.
int assembly_threads(int requested = 0);

}  // namespace axifep::fem
