#include "axifep/oracles.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace axifep::oracles {

CavityReport cavity_fixture(double alpha, double R, double theta) {
  if (!(alpha > 0.0)) throw DomainError("cavity_fixture: alpha must be positive");
  if (!(R > 0.0)) throw DomainError("cavity_fixture: R must be positive");
  const double r = alpha * R;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  CavityReport rep;
  rep.F_cart = Vec3(alpha, alpha, 1.0).asDiagonal();
  // d z^J / d X^A at the reference point (columns: R, Theta, Z).
  Mat3 dz_dX;
  dz_dX << c, -R * s, 0.0, s, R * c, 0.0, 0.0, 0.0, 1.0;
  // d x^a / d z^j at the current point, theta unchanged.
  Mat3 dx_dz;
  dx_dz << c, s, 0.0, -s / r, c / r, 0.0, 0.0, 0.0, 1.0;
  rep.F_cyl = dx_dz * rep.F_cart * dz_dX;
  rep.J_cart = rep.F_cart.determinant();
  rep.J_cyl = rep.F_cyl.determinant() * r / R;
  return rep;
}

namespace {

// Independent restatement of the constitutive functions in full tensor form.
struct FullModel {
  const mcc::MatParams& p;

  Mat3 stress(const Mat3& e) const {
    const double ev = e.trace();
    return p.K * ev * Mat3::Identity() + 2.0 * p.G * (e - ev / 3.0 * Mat3::Identity());
  }
  double energy(const Mat3& e, double z) const {
    const double ev = e.trace();
    const Mat3 d = e - ev / 3.0 * Mat3::Identity();
    double hard = z * z;
    if (p.kappa != 0.0) {
      const double t = std::exp(-p.alpha_h * z) - 1.0;
      hard += p.kappa / p.alpha_h * t * t;
    }
    return 0.5 * p.K * ev * ev + p.G * (d.array() * d.array()).sum() + 0.5 * p.H * hard;
  }
  double beta(double z) const {
    double b = z;
    if (p.kappa != 0.0) {
      const double ez = std::exp(-p.alpha_h * z);
      b += p.kappa * ez * (1.0 - ez);
    }
    return p.H * b;
  }
  double dbeta(double z) const {
    double h = 1.0;
    if (p.kappa != 0.0) {
      const double ez = std::exp(-p.alpha_h * z);
      h += p.kappa * p.alpha_h * (2.0 * ez * ez - ez);
    }
    return p.H * h;
  }
  Mat3 xi(const Mat3& e, double z) const {
    return stress(e) - energy(e, z) * Mat3::Identity();
  }
  double phi(const Mat3& e, double z) const {
    const Mat3 x = xi(e, z);
    const double pm = x.trace() / 3.0;
    const Mat3 s = x - pm * Mat3::Identity();
    const double q2 = 1.5 * (s.array() * s.array()).sum();
    return q2 / (p.m * p.m) + pm * (pm - (p.p_c0 + beta(z)));
  }
  // dPhi/dxi
  Mat3 flow(const Mat3& e, double z) const {
    const Mat3 x = xi(e, z);
    const double pm = x.trace() / 3.0;
    const Mat3 s = x - pm * Mat3::Identity();
    return 3.0 / (p.m * p.m) * s + (2.0 * pm - (p.p_c0 + beta(z))) / 3.0 * Mat3::Identity();
  }
};

}  // namespace

SubstepResult substep_integrate(const std::vector<Mat3>& eps_path, double z0,
                                const mcc::MatParams& p, int n_sub) {
  if (n_sub < 100) throw DomainError("substep_integrate: at least 100 sub-steps required");
  if (eps_path.empty()) throw DomainError("substep_integrate: empty strain path");
  const FullModel fm{p};
  Mat3 e = eps_path.front();
  double z = z0;
  double gamma = 0.0;
  const double scale2 = p.stress_scale() * p.stress_scale();
  if (fm.phi(e, z) > 1e-12 * scale2)
    throw DomainError("substep_integrate: initial state lies outside the yield surface");

  auto plastic_increment = [&](const Mat3& de) {
    const Mat3 n = fm.flow(e, z);
    const Mat3 x = fm.xi(e, z);
    const double pm = x.trace() / 3.0;
    // dPhi/de = C:n - tr(n) zeta ; dPhi/dz = -beta tr(n) - p h
    const Mat3 phi_e = fm.stress(n) - n.trace() * fm.stress(e);
    const double phi_z = -fm.beta(z) * n.trace() - pm * fm.dbeta(z);
    const double num = fm.phi(e, z) + (phi_e.array() * de.array()).sum();
    const double den = (phi_e.array() * n.array()).sum() - phi_z * pm;
    if (!(std::abs(den) > 0.0) || !std::isfinite(den))
      throw ConstitutiveError("substep_integrate: singular consistency condition", e, z);
    const double dg = std::max(0.0, num / den);
    e += de - dg * n;
    z += dg * pm;
    gamma += dg;
  };

  for (std::size_t seg = 1; seg < eps_path.size(); ++seg) {
    const Mat3 de = (eps_path[seg] - eps_path[seg - 1]) / n_sub;
    for (int k = 0; k < n_sub; ++k) {
      const Mat3 e_tr = e + de;
      if (fm.phi(e_tr, z) <= 0.0) {
        e = e_tr;
        continue;
      }
      if (fm.phi(e, z) < 0.0) {
        // Locate the surface crossing inside the sub-step.
        double lo = 0.0;
        double hi = 1.0;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          (fm.phi(e + mid * de, z) <= 0.0 ? lo : hi) = mid;
        }
        e += lo * de;
        plastic_increment((1.0 - lo) * de);
      } else {
        plastic_increment(de);
      }
    }
  }
  return {e, fm.stress(e), z, gamma, gamma > 0.0};
}

FdReport fd_global_stiffness(const fem::Model& model_in, const Eigen::VectorXd& u, double h,
                             const std::vector<int>& dofs_in) {
  if (!(h > 0.0)) throw DomainError("fd_global_stiffness: h must be positive");
  fem::Model model = model_in;
  std::vector<int> dofs = dofs_in;
  if (dofs.empty())
    for (int d = 0; d < model.mesh.num_dofs(); ++d) dofs.push_back(d);

  const Eigen::MatrixXd K = Eigen::MatrixXd(fem::assemble(model, u).K);
  fem::AssemblyOptions no_k;
  no_k.with_stiffness = false;
  FdReport rep;
  rep.h = h;
  const double scale = std::max(K.cwiseAbs().maxCoeff(), 1e-300);
  for (int col : dofs) {
    Eigen::VectorXd up = u;
    Eigen::VectorXd um = u;
    up(col) += h;
    um(col) -= h;
    const Eigen::VectorXd fp = fem::assemble(model, up, no_k).f_int;
    const Eigen::VectorXd fm = fem::assemble(model, um, no_k).f_int;
    const Eigen::VectorXd fd = (fp - fm) / (2.0 * h);
    for (int row : dofs) {
      const double err = std::abs(fd(row) - K(row, col)) / scale;
      if (err > rep.max_rel_error) {
        rep.max_rel_error = err;
        rep.worst_row = row;
        rep.worst_col = col;
      }
    }
  }
  return rep;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = t;
        p0 = 1.0;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = -t;
    x[static_cast<std::size_t>(n - 1 - i)] = t;
    const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(n - 1 - i)] = wi;
  }
}

namespace {

// Serendipity shape functions written per node.
void serendipity(double x, double y, double* n, double (*d)[2]) {
  const double cx[4] = {-1, 1, 1, -1};
  const double cy[4] = {-1, -1, 1, 1};
  for (int a = 0; a < 4; ++a) {
    const double X = cx[a] * x;
    const double Y = cy[a] * y;
    n[a] = 0.25 * (1 + X) * (1 + Y) * (X + Y - 1);
    d[a][0] = 0.25 * cx[a] * (1 + Y) * (2 * X + Y);
    d[a][1] = 0.25 * cy[a] * (1 + X) * (X + 2 * Y);
  }
  n[4] = 0.5 * (1 - x * x) * (1 - y);
  d[4][0] = -x * (1 - y);
  d[4][1] = -0.5 * (1 - x * x);
  n[5] = 0.5 * (1 + x) * (1 - y * y);
  d[5][0] = 0.5 * (1 - y * y);
  d[5][1] = -y * (1 + x);
  n[6] = 0.5 * (1 - x * x) * (1 + y);
  d[6][0] = -x * (1 + y);
  d[6][1] = 0.5 * (1 - x * x);
  n[7] = 0.5 * (1 - x) * (1 - y * y);
  d[7][0] = -0.5 * (1 - y * y);
  d[7][1] = -y * (1 - x);
}

double fint_integrand(const QuadRequest& q, const double* n, const double (*dX)[2], double R) {
  // Physical two-point deformation gradient of the single step.
  Mat3 F = Mat3::Identity();
  double ur = 0.0;
  for (int a = 0; a < 8; ++a) {
    ur += n[a] * q.u[a].x();
    F(kR, kR) += q.u[a].x() * dX[a][0];
    F(kR, kZ) += q.u[a].x() * dX[a][1];
    F(kZ, kR) += q.u[a].y() * dX[a][0];
    F(kZ, kZ) += q.u[a].y() * dX[a][1];
  }
  F(kTheta, kTheta) = (R + ur) / R;
  const Mat3 b = F * F.transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> es(b);
  const Mat3 eps =
      es.eigenvectors() * (0.5 * es.eigenvalues().array().log()).matrix().asDiagonal() *
      es.eigenvectors().transpose();
  const mcc::ReturnResult rr = mcc::return_map_strain(eps, 0.0, q.params);
  const double J = F.determinant();
  const Mat3 tau = J / rr.state.J_e * rr.state.zeta;
  Mat3 g0 = Mat3::Zero();
  const int row = q.dir == 0 ? kR : kZ;
  g0(row, kR) = dX[q.node][0];
  g0(row, kZ) = dX[q.node][1];
  if (q.dir == 0) g0(kTheta, kTheta) = n[q.node] / R;
  const Mat3 g = g0 * F.inverse();
  return (tau.array() * g.array()).sum();
}

}  // namespace

double quadrature_oracle(const QuadRequest& q) {
  if (q.node < 0 || q.node > 7 || q.dir < 0 || q.dir > 1)
    throw DomainError("quadrature_oracle: node must be in [0,7] and dir in [0,1]");
  std::vector<double> x;
  std::vector<double> w;
  gauss_legendre(q.points, x, w);
  double sum = 0.0;
  double n[8];
  double d[8][2];
  double dX[8][2];
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      serendipity(x[i], x[j], n, d);
      double j11 = 0, j12 = 0, j21 = 0, j22 = 0, R = 0;
      for (int a = 0; a < 8; ++a) {
        R += n[a] * q.coords[a].x();
        j11 += q.coords[a].x() * d[a][0];
        j12 += q.coords[a].x() * d[a][1];
        j21 += q.coords[a].y() * d[a][0];
        j22 += q.coords[a].y() * d[a][1];
      }
      const double det = j11 * j22 - j12 * j21;
      double f = 1.0;
      if (q.tag == QuadIntegrand::FIntComponent) {
        for (int a = 0; a < 8; ++a) {
          dX[a][0] = (j22 * d[a][0] - j21 * d[a][1]) / det;
          dX[a][1] = (-j12 * d[a][0] + j11 * d[a][1]) / det;
        }
        f = fint_integrand(q, n, dX, R);
      }
      sum += w[i] * w[j] * f * R * det;
    }
  return sum;
}

}  // namespace axifep::oracles
