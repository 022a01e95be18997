#pragma once

// Hencky-type hyperelasticity with Modified Cam-Clay plasticity formulated on
// the zeta stress (zeta = J^e sigma) and the Eshelby-zeta stress
// xi = zeta - (stored energy) 1.
//
// Sign convention: tensile stresses are positive and the consolidation pressure
// is stored negative (p_c0 < 0), so the yield ellipse spans p in [p_c, 0].
// Compaction drives z < 0 and beta = dPsi~/dz < 0, enlarging |p_c|.
//
// All tensors handed to this module are symmetric components in an orthonormal
// frame. For the axisymmetric pattern the mixed cylindrical components used by
// the element layer coincide with them on every non-zero entry.

#include "axifep/types.hpp"

namespace axifep::mcc {

struct MatParams {
  double E = 0.0;
  double nu = 0.0;
  double K = 0.0;  // derived: E / (3 (1 - 2 nu))
  double G = 0.0;  // derived: E / (2 (1 + nu))
  double H = 0.0;
  double kappa = 0.0;
  double alpha_h = 0.0;
  double m = 1.0;
  double p_c0 = 0.0;  // signed, negative in compression

  /// Builds a validated parameter set; throws DomainError on invalid input.
  static MatParams make(double E, double nu, double H, double kappa, double alpha_h, double m,
                        double p_c0);
  void validate() const;
  /// Stress scale used to nondimensionalise the local problem.
  double stress_scale() const;
};

/// Converged Gauss-point state.
struct MatState {
  Mat3 b_e = Mat3::Identity();
  Mat3 eps_e = Mat3::Zero();
  Mat3 zeta = Mat3::Zero();
  double z = 0.0;
  double J_e = 1.0;
  double dgamma = 0.0;
  bool yielded = false;
};

struct TangentPack {
  Tensor4 D_alg = Tensor4::Zero();    // d zeta / d eps^{e,tr}
  Tensor4 dE_dEtr = Tensor4::Zero();  // d eps^e / d eps^{e,tr}
};

struct StoredEnergy {
  double psi;       // elastic part
  double psi_hard;  // hardening part
  double total() const { return psi + psi_hard; }
};

struct Invariants {
  double p;
  Mat3 s;
  double rho;
  double q;
};

struct ReturnResult {
  MatState state;
  TangentPack tangent;
  double phi = 0.0;      // yield function at the returned state (Pa^2)
  int iterations = 0;    // local Newton iterations, 0 on the elastic branch
};

inline constexpr double kDefaultTol = 1e-10;
inline constexpr int kMaxLocalIterations = 50;

StoredEnergy stored_energy(const Mat3& eps_e, double z, const MatParams& p);
double hardening_energy(double z, const MatParams& p);
/// beta = dPsi~/dz.
double hardening_beta(double z, const MatParams& p);
/// d beta / dz.
double hardening_modulus(double z, const MatParams& p);
/// p_c = p_c0 + beta.
double consolidation_pressure(double z, const MatParams& p);

/// zeta = K eps_v 1 + 2 G dev(eps).
Mat3 zeta_stress(const Mat3& eps_e, const MatParams& p);
/// K 1(x)1 + 2G (I_sym - 1/3 1(x)1).
Tensor4 elastic_modulus(const MatParams& p);

Invariants invariants(const Mat3& t);
Mat3 eshelby_zeta(const Mat3& zeta, double psi_total);
/// (q/m)^2 + p (p - p_c), p_c = p_c0 + beta.
double yield(const Mat3& xi, double beta, const MatParams& p);

/// Return map driven by the trial logarithmic strain (symmetric components).
/// tol is relative to the largest trial principal strain.
/// Throws ConstitutiveError on local Newton failure or a negative multiplier.
ReturnResult return_map_strain(const Mat3& eps_trial, double z_prev, const MatParams& p,
                               double tol = kDefaultTol);

/// Return map driven by the trial elastic left Cauchy-Green tensor in mixed
/// components at the given radius. State tensors are returned in the same
/// mixed components; the tangent lives in the symmetrised frame.
ReturnResult return_map(const Mat3& b_e_trial, double z_prev, const MatParams& p,
                        double tol = kDefaultTol, double radius = 1.0);

struct FdReport {
  double h = 0.0;
  double max_rel_error = 0.0;
  int worst_row = -1;
  int worst_col = -1;
};

/// Central differences of zeta with respect to the trial log strain against
/// D_alg. Error is max |D_fd - D_alg| / max |D_alg|. h must lie in [1e-8, 1e-4].
FdReport tangent_fd_check(const Mat3& b_e_trial, double z_prev, const MatParams& p, double h);
/// Same check with the trial state given by its log strain; no range check on h.
FdReport tangent_fd_check_strain(const Mat3& eps_trial, double z_prev, const MatParams& p,
                                 double h);

}  // namespace axifep::mcc
