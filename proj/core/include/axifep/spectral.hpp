#pragma once

// Spectral machinery for isotropic functions of symmetric second-order tensors.
//
// Mixed components T^a_b in the cylindrical chart are not symmetric in general;
// with the diagonal metric g = diag(1, r^2, 1) the similarity g^{1/2} T g^{-1/2}
// is symmetric and has the same eigenvalues. For the axisymmetric sparsity
// pattern the similarity leaves every non-zero component unchanged.

#include <functional>

#include "axifep/types.hpp"

namespace axifep::spectral {

struct SymEig {
  Vec3 values;
  Mat3 vectors;  // column k is the eigenvector of values(k)
};

/// True when T has no coupling between the hoop index and the in-plane indices.
bool is_axisymmetric_pattern(const Mat3& t, double rel_tol = 1e-13);

/// Eigen-decomposition of a symmetric matrix. Axisymmetric patterns use the
/// closed-form 2x2 solver on the (r,z) block plus the decoupled hoop entry.
SymEig sym_eig(const Mat3& sym);

/// g^{1/2} T g^{-1/2} for mixed (upper, lower) components at radius r.
Mat3 symmetrise_mixed(const Mat3& mixed, double radius);
/// Inverse of symmetrise_mixed.
Mat3 unsymmetrise_mixed(const Mat3& sym, double radius);

/// Relative gap below which two eigenvalues are treated as coincident.
inline constexpr double kCoalescenceTol = 1e-8;

/// f(T) = Q diag(f(lambda)) Q^T.
Mat3 apply(const SymEig& eig, const std::function<double(double)>& f);

/// Derivative d f(T) / d T for arbitrary (not necessarily symmetric)
/// perturbations, evaluated at a symmetric T. Repeated eigenvalues use the
/// confluent limit f'(lambda).
Tensor4 derivative(const SymEig& eig, const std::function<double(double)>& f,
                   const std::function<double(double)>& df);

Mat3 log_sym(const Mat3& sym);
Mat3 exp_sym(const Mat3& sym);
/// d log(T) / d T at symmetric positive definite T.
Tensor4 dlog_sym(const Mat3& sym);

}  // namespace axifep::spectral
