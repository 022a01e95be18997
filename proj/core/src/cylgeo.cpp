#include "axifep/cylgeo.hpp"

#include <cmath>
#include <sstream>

namespace axifep::cylgeo {

void require_off_axis(double radius, double r_min) {
  if (!std::isfinite(radius) || radius <= r_min) {
    std::ostringstream os;
    os << "radius " << radius << " is on or too close to the symmetry axis (r_min = " << r_min
       << ")";
    throw DomainError(os.str());
  }
}

Christoffel::Christoffel(double radius) : radius_(radius) { require_off_axis(radius); }

double Christoffel::operator()(int upper, int lower1, int lower2) const {
  if (upper == kTheta && ((lower1 == kR && lower2 == kTheta) || (lower1 == kTheta && lower2 == kR)))
    return hoop_radial();
  if (upper == kR && lower1 == kTheta && lower2 == kTheta) return radial_hoop_hoop();
  return 0.0;
}

Shifter::Shifter(double r_ref, double r_cur) : r_ref_(r_ref), r_cur_(r_cur) {
  require_off_axis(r_ref);
  require_off_axis(r_cur);
}

Mat3 Shifter::mat() const { return Vec3(1.0, r_ref_ / r_cur_, 1.0).asDiagonal(); }

Mat3 Shifter::inverse() const { return Vec3(1.0, r_cur_ / r_ref_, 1.0).asDiagonal(); }

MetricCyl metric(double radius) {
  require_off_axis(radius);
  MetricCyl m{radius, Mat3::Identity(), Mat3::Identity()};
  m.cov(kTheta, kTheta) = radius * radius;
  m.contra(kTheta, kTheta) = 1.0 / (radius * radius);
  return m;
}

Christoffel christoffel(double radius) { return Christoffel(radius); }

Shifter shifter(double r_ref, double r_cur) { return Shifter(r_ref, r_cur); }

BasisChange basis_change(double radius, double angle) {
  require_off_axis(radius);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  BasisChange bc{angle, radius, Mat3::Zero(), Mat3::Zero()};
  bc.cyl_to_cart << c, -radius * s, 0.0,
                    s,  radius * c, 0.0,
                    0.0, 0.0, 1.0;
  bc.cart_to_cyl << c, s, 0.0,
                    -s / radius, c / radius, 0.0,
                    0.0, 0.0, 1.0;
  return bc;
}

Mat3 transform_defgrad_components(const Mat3& f_cart, const BasisChange& bc_ref,
                                  const BasisChange& bc_cur) {
  return bc_cur.cart_to_cyl * f_cart * bc_ref.cyl_to_cart;
}

Mat3 transform_defgrad_to_cartesian(const Mat3& f_cyl, const BasisChange& bc_ref,
                                    const BasisChange& bc_cur) {
  return bc_cur.cyl_to_cart * f_cyl * bc_ref.cart_to_cyl;
}

Mat3 covariant_derivative_vector(const Mat3& partials, const Vec3& components,
                                 const Christoffel& chr) {
  Mat3 out = partials;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) out(a, b) += chr(a, b, c) * components(c);
  return out;
}

Mat3 shape_grad(double shape_value, const Vec2& shape_partials, const Christoffel& chr, int dir) {
  if (dir != kR && dir != kZ) throw DomainError("shape_grad: direction must be radial or axial");
  Mat3 g = Mat3::Zero();
  g(dir, kR) = shape_partials(0);
  g(dir, kZ) = shape_partials(1);
  // delta^d_dir gamma^a_{dc} psi
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) g(a, c) += chr(a, dir, c) * shape_value;
  return g;
}

}  // namespace axifep::cylgeo
