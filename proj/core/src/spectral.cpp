#include "axifep/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace axifep::spectral {

bool is_axisymmetric_pattern(const Mat3& t, double rel_tol) {
  const double scale = std::max(t.cwiseAbs().maxCoeff(), 1e-300);
  const double tol = rel_tol * scale;
  return std::abs(t(kR, kTheta)) <= tol && std::abs(t(kTheta, kR)) <= tol &&
         std::abs(t(kZ, kTheta)) <= tol && std::abs(t(kTheta, kZ)) <= tol;
}

SymEig sym_eig(const Mat3& sym) {
  SymEig out;
  if (is_axisymmetric_pattern(sym)) {
    const double a = sym(kR, kR);
    const double c = sym(kZ, kZ);
    const double b = 0.5 * (sym(kR, kZ) + sym(kZ, kR));
    const double angle = 0.5 * std::atan2(2.0 * b, a - c);
    const double cs = std::cos(angle);
    const double sn = std::sin(angle);
    out.values(0) = a * cs * cs + 2.0 * b * sn * cs + c * sn * sn;
    out.values(1) = sym(kTheta, kTheta);
    out.values(2) = a * sn * sn - 2.0 * b * sn * cs + c * cs * cs;
    out.vectors.setZero();
    out.vectors(kR, 0) = cs;
    out.vectors(kZ, 0) = sn;
    out.vectors(kTheta, 1) = 1.0;
    out.vectors(kR, 2) = -sn;
    out.vectors(kZ, 2) = cs;
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Mat3> solver(0.5 * (sym + sym.transpose()));
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

Mat3 symmetrise_mixed(const Mat3& mixed, double radius) {
  Mat3 s = mixed;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double si = (i == kTheta) ? radius : 1.0;
      const double sj = (j == kTheta) ? radius : 1.0;
      s(i, j) = mixed(i, j) * si / sj;
    }
  return s;
}

Mat3 unsymmetrise_mixed(const Mat3& sym, double radius) {
  Mat3 m = sym;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double si = (i == kTheta) ? radius : 1.0;
      const double sj = (j == kTheta) ? radius : 1.0;
      m(i, j) = sym(i, j) * sj / si;
    }
  return m;
}

Mat3 apply(const SymEig& eig, const std::function<double(double)>& f) {
  Vec3 fv;
  for (int i = 0; i < 3; ++i) fv(i) = f(eig.values(i));
  return eig.vectors * fv.asDiagonal() * eig.vectors.transpose();
}

Tensor4 derivative(const SymEig& eig, const std::function<double(double)>& f,
                   const std::function<double(double)>& df) {
  const Vec3& lam = eig.values;
  const Mat3& q = eig.vectors;
  const double scale = std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
  Mat3 gamma;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j || std::abs(lam(i) - lam(j)) <= kCoalescenceTol * scale)
        gamma(i, j) = df(0.5 * (lam(i) + lam(j)));
      else
        gamma(i, j) = (f(lam(i)) - f(lam(j))) / (lam(i) - lam(j));
    }
  Tensor4 d = Tensor4::Zero();
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l)
      for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) {
          double acc = 0.0;
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
              acc += q(k, i) * q(l, j) * gamma(i, j) * q(m, i) * q(n, j);
          d(pair_index(k, l), pair_index(m, n)) = acc;
        }
  return d;
}

Mat3 log_sym(const Mat3& sym) {
  const SymEig e = sym_eig(sym);
  return apply(e, [](double x) { return std::log(x); });
}

Mat3 exp_sym(const Mat3& sym) {
  const SymEig e = sym_eig(sym);
  return apply(e, [](double x) { return std::exp(x); });
}

Tensor4 dlog_sym(const Mat3& sym) {
  const SymEig e = sym_eig(sym);
  return derivative(e, [](double x) { return std::log(x); }, [](double x) { return 1.0 / x; });
}

}  // namespace axifep::spectral
