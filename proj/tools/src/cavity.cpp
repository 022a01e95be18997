#include <cmath>
#include <iomanip>

#include "axifep/app/commands.hpp"
#include "axifep/app/run.hpp"
#include "axifep/oracles.hpp"

namespace axifep::app {

namespace {

void print_matrix(std::ostream& out, const char* name, const Mat3& m) {
  out << name << ":\n";
  for (int i = 0; i < 3; ++i) {
    out << "  ";
    for (int j = 0; j < 3; ++j) out << std::setw(22) << m(i, j);
    out << '\n';
  }
}

}  // namespace

int cmd_cavity(double alpha, std::ostream& out) {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  const double R = 1.0;
  const double theta = 0.7;
  const oracles::CavityReport rep = oracles::cavity_fixture(alpha, R, theta);
  const double J_expected = alpha * alpha;
  const Mat3 F_cyl_expected = Eigen::Vector3d(alpha, 1.0, 1.0).asDiagonal();

  const double tol = 1e-12;
  const bool cyl_ok = (rep.F_cyl - F_cyl_expected).cwiseAbs().maxCoeff() <= tol;
  const bool j_cart_ok = std::abs(rep.J_cart - J_expected) <= tol;
  const bool j_cyl_ok = std::abs(rep.J_cyl - J_expected) <= tol;

  out << std::setprecision(15);
  out << "cavity expansion r = alpha R, alpha = " << alpha << ", R = " << R
      << ", Theta = " << theta << "\n";
  print_matrix(out, "F (Cartesian components)", rep.F_cart);
  print_matrix(out, "F (cylindrical components)", rep.F_cyl);
  out << "F_cyl = diag(alpha, 1, 1): " << (cyl_ok ? "yes" : "NO") << '\n';
  out << "J = det F_cart          = " << rep.J_cart << (j_cart_ok ? "  ok" : "  MISMATCH") << '\n';
  out << "J = det F_cyl * r / R   = " << rep.J_cyl << (j_cyl_ok ? "  ok" : "  MISMATCH") << '\n';
  out << "expected alpha^2        = " << J_expected << '\n';
  return cyl_ok && j_cart_ok && j_cyl_ok ? exit_code::ok : exit_code::verification_failure;
}

}  // namespace axifep::app
