#include "axifep/material_mcc.hpp"

#include <cmath>
#include <sstream>

#include "axifep/spectral.hpp"

namespace axifep::mcc {

MatParams MatParams::make(double E, double nu, double H, double kappa, double alpha_h, double m,
                          double p_c0) {
  MatParams p;
  p.E = E;
  p.nu = nu;
  p.H = H;
  p.kappa = kappa;
  p.alpha_h = alpha_h;
  p.m = m;
  p.p_c0 = p_c0;
  p.K = E / (3.0 * (1.0 - 2.0 * nu));
  p.G = E / (2.0 * (1.0 + nu));
  p.validate();
  return p;
}

void MatParams::validate() const {
  std::ostringstream os;
  if (!(E > 0.0)) os << "E must be positive; ";
  if (!(nu > -1.0 && nu < 0.5)) os << "nu must lie in (-1, 0.5); ";
  if (!(m > 0.0)) os << "m must be positive; ";
  if (!(H >= 0.0)) os << "H must be non-negative; ";
  if (!std::isfinite(p_c0)) os << "p_c0 must be finite; ";
  if (kappa != 0.0 && !(alpha_h > 0.0)) os << "alpha must be positive when kappa != 0; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw DomainError("invalid material parameters: " + msg);
}

double MatParams::stress_scale() const { return p_c0 != 0.0 ? std::abs(p_c0) : G; }

namespace {

bool exponential_hardening(const MatParams& p) { return p.kappa != 0.0 && p.alpha_h > 0.0; }

}  // namespace

double hardening_energy(double z, const MatParams& p) {
  double e = z * z;
  if (exponential_hardening(p)) {
    const double t = std::exp(-p.alpha_h * z) - 1.0;
    e += p.kappa / p.alpha_h * t * t;
  }
  return 0.5 * p.H * e;
}

double hardening_beta(double z, const MatParams& p) {
  double b = z;
  if (exponential_hardening(p)) {
    const double ez = std::exp(-p.alpha_h * z);
    b += p.kappa * ez * (1.0 - ez);
  }
  return p.H * b;
}

double hardening_modulus(double z, const MatParams& p) {
  double h = 1.0;
  if (exponential_hardening(p)) {
    const double ez = std::exp(-p.alpha_h * z);
    h += p.kappa * p.alpha_h * (2.0 * ez * ez - ez);
  }
  return p.H * h;
}

double consolidation_pressure(double z, const MatParams& p) {
  return p.p_c0 + hardening_beta(z, p);
}

StoredEnergy stored_energy(const Mat3& eps_e, double z, const MatParams& p) {
  const double ev = eps_e.trace();
  const Mat3 dev = eps_e - ev / 3.0 * Mat3::Identity();
  // 3/2 G eps_q^2 with eps_q^2 = 2/3 e:e
  const double psi = 0.5 * p.K * ev * ev + p.G * ddot(dev, dev);
  return {psi, hardening_energy(z, p)};
}

Mat3 zeta_stress(const Mat3& eps_e, const MatParams& p) {
  const double ev = eps_e.trace();
  return p.K * ev * Mat3::Identity() + 2.0 * p.G * (eps_e - ev / 3.0 * Mat3::Identity());
}

Tensor4 elastic_modulus(const MatParams& p) {
  const Mat3 one = Mat3::Identity();
  const Tensor4 vol = outer(one, one);
  return p.K * vol + 2.0 * p.G * (identity4_sym() - vol / 3.0);
}

Invariants invariants(const Mat3& t) {
  Invariants inv;
  inv.p = t.trace() / 3.0;
  inv.s = t - inv.p * Mat3::Identity();
  inv.rho = std::sqrt(ddot(inv.s, inv.s));
  inv.q = std::sqrt(1.5) * inv.rho;
  return inv;
}

Mat3 eshelby_zeta(const Mat3& zeta, double psi_total) {
  return zeta - psi_total * Mat3::Identity();
}

double yield(const Mat3& xi, double beta, const MatParams& p) {
  const Invariants inv = invariants(xi);
  const double pc = p.p_c0 + beta;
  const double qm = inv.q / p.m;
  return qm * qm + inv.p * (inv.p - pc);
}

namespace {

// Principal-space quantities of the local problem for given principal elastic
// strains and z.
struct PrincipalEval {
  Vec3 zeta;
  Vec3 xi;
  double p = 0.0;      // mean of xi
  double beta = 0.0;
  double h = 0.0;      // d beta / dz
  double pc = 0.0;
  Vec3 n;              // dPhi / dxi
  double phi = 0.0;
  Eigen::Matrix3d dxi_deps;  // d xi_k / d eps_j
};

PrincipalEval eval_principal(const Vec3& eps, double z, const MatParams& p) {
  PrincipalEval e;
  const double ev = eps.sum();
  const Vec3 dev = eps - Vec3::Constant(ev / 3.0);
  e.zeta = Vec3::Constant(p.K * ev) + 2.0 * p.G * dev;
  const double psi = 0.5 * p.K * ev * ev + p.G * dev.squaredNorm();
  const double psi_total = psi + hardening_energy(z, p);
  e.xi = e.zeta - Vec3::Constant(psi_total);
  e.p = e.xi.sum() / 3.0;
  const Vec3 s = e.xi - Vec3::Constant(e.p);
  e.beta = hardening_beta(z, p);
  e.h = hardening_modulus(z, p);
  e.pc = p.p_c0 + e.beta;
  const double m2 = p.m * p.m;
  e.n = 3.0 / m2 * s + Vec3::Constant((2.0 * e.p - e.pc) / 3.0);
  e.phi = 1.5 * s.squaredNorm() / m2 + e.p * (e.p - e.pc);
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j)
      e.dxi_deps(k, j) = p.K + 2.0 * p.G * ((k == j ? 1.0 : 0.0) - 1.0 / 3.0) - e.zeta(j);
  return e;
}

// d n_i / d xi_k for the MCC yield function.
Eigen::Matrix3d dn_dxi(const MatParams& p) {
  Eigen::Matrix3d d;
  const double m2 = p.m * p.m;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) d(i, k) = 3.0 / m2 * ((i == k ? 1.0 : 0.0) - 1.0 / 3.0) + 2.0 / 9.0;
  return d;
}

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

// Scaled residual: unknowns (eps_1..3, z, g) with g = dgamma * P; the yield
// residual is divided by P^2.
Vec5 local_residual(const Vec5& y, const Vec3& eps_tr, double z_prev, const MatParams& p,
                    double P) {
  const Vec3 eps = y.head<3>();
  const double z = y(3);
  const double g = y(4);
  const PrincipalEval e = eval_principal(eps, z, p);
  Vec5 r;
  r.head<3>() = eps - eps_tr + g * e.n / P;
  r(3) = z - z_prev - g * e.p / P;
  r(4) = e.phi / (P * P);
  return r;
}

Mat5 local_jacobian(const Vec5& y, const MatParams& p, double P) {
  const Vec3 eps = y.head<3>();
  const double z = y(3);
  const double g = y(4);
  const PrincipalEval e = eval_principal(eps, z, p);
  const Eigen::Matrix3d dn = dn_dxi(p);
  const Eigen::Matrix3d dn_deps = dn * e.dxi_deps;
  // dxi/dz = -beta 1 ; dn/dbeta = -1/3
  const Vec3 dn_dz = dn * Vec3::Constant(-e.beta) - Vec3::Constant(e.h / 3.0);
  const Vec3 dp_deps = e.dxi_deps.colwise().sum().transpose() / 3.0;
  const double dp_dz = -e.beta;

  Mat5 J = Mat5::Zero();
  J.topLeftCorner<3, 3>() = Eigen::Matrix3d::Identity() + g / P * dn_deps;
  J.block<3, 1>(0, 3) = g / P * dn_dz;
  J.block<3, 1>(0, 4) = e.n / P;
  J.block<1, 3>(3, 0) = -g / P * dp_deps.transpose();
  J(3, 3) = 1.0 - g / P * dp_dz;
  J(3, 4) = -e.p / P;
  J.block<1, 3>(4, 0) = (e.dxi_deps.transpose() * e.n).transpose() / (P * P);
  J(4, 3) = (e.n.dot(Vec3::Constant(-e.beta)) - e.p * e.h) / (P * P);
  J(4, 4) = 0.0;
  return J;
}

// Assembles d eps^e / d eps^tr from the principal block a_ij and the trial
// eigenbasis q, including the spin terms for the off-diagonal components.
Tensor4 assemble_strain_tangent(const Eigen::Matrix3d& a, const Vec3& eps, const Vec3& eps_tr,
                                const Mat3& q) {
  Eigen::Matrix3d theta;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) {
        theta(i, j) = 0.0;
        continue;
      }
      const double gap = eps_tr(i) - eps_tr(j);
      theta(i, j) = std::abs(gap) > 1e-8 ? (eps(i) - eps(j)) / gap : a(i, i) - a(i, j);
    }
  Tensor4 t = Tensor4::Zero();
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l)
      for (int m = 0; m < 3; ++m)
        for (int n = 0; n < 3; ++n) {
          double acc = 0.0;
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
              acc += a(i, j) * q(k, i) * q(l, i) * q(m, j) * q(n, j);
              if (i != j)
                acc += theta(i, j) * q(k, i) * q(l, j) * 0.5 *
                       (q(m, i) * q(n, j) + q(m, j) * q(n, i));
            }
          t(pair_index(k, l), pair_index(m, n)) = acc;
        }
  return t;
}

}  // namespace

ReturnResult return_map_strain(const Mat3& eps_trial, double z_prev, const MatParams& p,
                               double tol) {
  const Mat3 eps_sym = 0.5 * (eps_trial + eps_trial.transpose());
  const spectral::SymEig eig = spectral::sym_eig(eps_sym);
  const Vec3 eps_tr = eig.values;
  const Mat3& q = eig.vectors;
  const double P = p.stress_scale();

  ReturnResult out;
  const PrincipalEval trial = eval_principal(eps_tr, z_prev, p);

  auto finish = [&](const Vec3& eps, double z, double dgamma, const Eigen::Matrix3d& a,
                    bool plastic) {
    const PrincipalEval e = eval_principal(eps, z, p);
    MatState& st = out.state;
    st.eps_e = q * eps.asDiagonal() * q.transpose();
    st.b_e = q * Vec3((2.0 * eps.array()).exp()).asDiagonal() * q.transpose();
    st.zeta = q * e.zeta.asDiagonal() * q.transpose();
    st.z = z;
    st.J_e = std::exp(eps.sum());
    st.dgamma = dgamma;
    st.yielded = plastic;
    out.phi = e.phi;
    if (plastic) {
      out.tangent.dE_dEtr = assemble_strain_tangent(a, eps, eps_tr, q);
    } else {
      out.tangent.dE_dEtr = identity4_sym();
    }
    out.tangent.D_alg = elastic_modulus(p) * out.tangent.dE_dEtr;
  };

  if (trial.phi <= 0.0) {
    finish(eps_tr, z_prev, 0.0, Eigen::Matrix3d::Identity(), false);
    return out;
  }

  Vec5 y;
  y << eps_tr, z_prev, 0.0;
  Vec5 r = local_residual(y, eps_tr, z_prev, p, P);
  // Every residual row scales with the trial strain, so the tolerance does too;
  // an absolute one would leave tiny increments unresolved.
  const double tol_abs = tol * std::max(eps_tr.cwiseAbs().maxCoeff(), 1e-30);
  int it = 0;
  for (; it < kMaxLocalIterations && r.lpNorm<Eigen::Infinity>() > tol_abs; ++it) {
    const Mat5 J = local_jacobian(y, p, P);
    const Vec5 dy = J.fullPivLu().solve(-r);
    if (!dy.allFinite()) break;
    // Backtracking on the residual norm keeps the first iterations from
    // overshooting the surface when the trial lies far outside.
    double step = 1.0;
    Vec5 y_new = y + dy;
    Vec5 r_new = local_residual(y_new, eps_tr, z_prev, p, P);
    for (int ls = 0; ls < 10 && !(r_new.norm() < r.norm()); ++ls) {
      step *= 0.5;
      y_new = y + step * dy;
      r_new = local_residual(y_new, eps_tr, z_prev, p, P);
    }
    y = y_new;
    r = r_new;
  }
  if (!(r.lpNorm<Eigen::Infinity>() <= tol_abs)) {
    std::ostringstream os;
    os << "return map did not converge in " << it << " iterations (residual "
       << r.lpNorm<Eigen::Infinity>() << ")";
    throw ConstitutiveError(os.str(), eps_sym, z_prev);
  }
  const double dgamma = y(4) / P;
  if (dgamma < 0.0) {
    std::ostringstream os;
    os << "return map converged to a negative plastic multiplier " << dgamma;
    throw ConstitutiveError(os.str(), eps_sym, z_prev);
  }
  const Mat5 J = local_jacobian(y, p, P);
  const Mat5 Jinv = J.fullPivLu().inverse();
  const Eigen::Matrix3d a = Jinv.topLeftCorner<3, 3>();
  out.iterations = it;
  finish(y.head<3>(), y(3), dgamma, a, true);
  return out;
}

ReturnResult return_map(const Mat3& b_e_trial, double z_prev, const MatParams& p, double tol,
                        double radius) {
  const Mat3 b_sym = spectral::symmetrise_mixed(b_e_trial, radius);
  const spectral::SymEig eig = spectral::sym_eig(0.5 * (b_sym + b_sym.transpose()));
  if (!(eig.values.minCoeff() > 0.0))
    throw StateError("return_map: trial elastic left Cauchy-Green tensor is not positive definite");
  const Mat3 eps_tr = spectral::apply(eig, [](double x) { return 0.5 * std::log(x); });
  ReturnResult r = return_map_strain(eps_tr, z_prev, p, tol);
  r.state.b_e = spectral::unsymmetrise_mixed(r.state.b_e, radius);
  r.state.eps_e = spectral::unsymmetrise_mixed(r.state.eps_e, radius);
  r.state.zeta = spectral::unsymmetrise_mixed(r.state.zeta, radius);
  return r;
}

FdReport tangent_fd_check_strain(const Mat3& eps_trial, double z_prev, const MatParams& p,
                                 double h) {
  const ReturnResult base = return_map_strain(eps_trial, z_prev, p);
  const Tensor4& D = base.tangent.D_alg;
  FdReport rep;
  rep.h = h;
  const double scale = std::max(D.cwiseAbs().maxCoeff(), 1e-300);
  for (int m = 0; m < 3; ++m)
    for (int n = m; n < 3; ++n) {
      Mat3 dir = Mat3::Zero();
      dir(m, n) += 0.5;
      dir(n, m) += 0.5;
      const Mat3 zp = return_map_strain(eps_trial + h * dir, z_prev, p).state.zeta;
      const Mat3 zm = return_map_strain(eps_trial - h * dir, z_prev, p).state.zeta;
      const Flat9 fd = flatten((zp - zm) / (2.0 * h));
      const Flat9 an = D * flatten(dir);
      for (int k = 0; k < 9; ++k) {
        const double err = std::abs(fd(k) - an(k)) / scale;
        if (err > rep.max_rel_error) {
          rep.max_rel_error = err;
          rep.worst_row = k;
          rep.worst_col = pair_index(m, n);
        }
      }
    }
  return rep;
}

FdReport tangent_fd_check(const Mat3& b_e_trial, double z_prev, const MatParams& p, double h) {
  if (!(h >= 1e-8 && h <= 1e-4))
    throw DomainError("tangent_fd_check: perturbation must lie in [1e-8, 1e-4]");
  const Mat3 eps_tr = 0.5 * spectral::log_sym(0.5 * (b_e_trial + b_e_trial.transpose()));
  return tangent_fd_check_strain(eps_tr, z_prev, p, h);
}

}  // namespace axifep::mcc
