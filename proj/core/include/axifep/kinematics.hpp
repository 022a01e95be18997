#pragma once

// Deformation gradients in cylindrical mixed components, built from
// displacement covariant derivatives, plus the strain measures and Jacobians
// derived from them.
//
// Index placement follows the two-point convention X^a_A: rows carry the
// current (spatial) index, columns the reference one. Metrics are rebuilt from
// the radii stored alongside the components.

#include "axifep/cylgeo.hpp"
#include "axifep/types.hpp"

namespace axifep::kin {

/// Two-point tensor X^a_A with the radii needed for metric evaluation.
struct DefGrad {
  Mat3 comp = Mat3::Identity();
  double r_ref = 1.0;
  double r_cur = 1.0;

  /// det(X^a_A) * r_cur / r_ref.
  double jacobian() const;
};

/// Elastic left Cauchy-Green state and its logarithmic strain (mixed components).
struct ElasticState {
  Mat3 b_e = Mat3::Identity();
  Mat3 eps_e = Mat3::Zero();
  double J_e = 1.0;
};

struct JacobianSplit {
  double J;
  double J_e;
  double J_p;
};

/// X^a_A = S^a_B (delta^B_A + U^B|_A). Throws InvertedElementError on det <= 0.
DefGrad defgrad_total(const Mat3& u_partials, const cylgeo::Shifter& s);

/// X(t) = X_inc * X(t_n), X_inc = S_inc (I + dU|). The incremental shifter maps
/// the previously converged radius onto the current one.
DefGrad defgrad_incremental(const Mat3& u_inc_partials, const cylgeo::Shifter& s_inc,
                            const DefGrad& f_prev);

/// (X^{-1})^A_d = (S^{-1})^A_a (delta^a_d - u^a|_d) from spatial displacement
/// derivatives; s is the reference->current shifter of the same map.
Mat3 defgrad_inverse_spatial(const Mat3& u_partials, const cylgeo::Shifter& s);

/// (X^T)^A_a = X^b_B g^{BA}(ref) g_{ab}(cur).
Mat3 transpose(const DefGrad& f);
/// Maps a reference-current transpose back to the two-point components X^a_A.
Mat3 transpose_back(const Mat3& ft, double r_ref, double r_cur);

/// b^a_b = X^a_A (X^T)^A_b.
Mat3 left_cauchy_green(const DefGrad& f);
/// C^A_B = (X^T)^A_a X^a_B.
Mat3 right_cauchy_green(const DefGrad& f);

/// eps = 1/2 log b (mixed components at r_cur); J_e = exp(tr eps).
/// Throws StateError for a non-positive eigenvalue.
ElasticState log_strain(const Mat3& b_mixed, double r_cur);

/// b^{e,tr} = X_inc b_prev X_inc^T, with the transpose taken between the
/// previously converged radius (f_inc.r_ref) and the current one.
Mat3 trial_elastic_b(const DefGrad& f_inc, const Mat3& b_prev);

/// J = det(X) r/R, J_e = exp(tr eps_e), J_p = J / J_e.
JacobianSplit jacobian_split(const DefGrad& f, const ElasticState& es);

/// Trace of a mixed tensor, T^a_b delta^b_a.
inline double trace_mixed(const Mat3& t) { return t.trace(); }

/// T^{ab} g_{ab}, computed from mixed components through the contravariant metric.
double trace_via_metric(const Mat3& t_mixed, double radius);

}  // namespace axifep::kin
