#pragma once

// Geometry kernel of the cylindrical chart (R, Theta, Z): metric coefficients,
// Christoffel symbols of the second kind, the shifter between configurations
// and the Cartesian <-> cylindrical basis change.
//
// Every quantity is a plain value, immutable after construction. Radii must be
// strictly positive; points on the symmetry axis are handled by the boundary
// condition layer, never here.

#include "axifep/types.hpp"

namespace axifep::cylgeo {

/// Covariant and contravariant metric coefficients at a given radius.
struct MetricCyl {
  double radius;
  Mat3 cov;     // diag(1, r^2, 1)
  Mat3 contra;  // diag(1, r^-2, 1)
};

/// Non-zero Christoffel symbols at a given radius.
class Christoffel {
 public:
  explicit Christoffel(double radius);

  double radius() const { return radius_; }
  /// Gamma^{II}_{I II} = Gamma^{II}_{II I} = 1/r.
  double hoop_radial() const { return 1.0 / radius_; }
  /// Gamma^{I}_{II II} = -r.
  double radial_hoop_hoop() const { return -radius_; }

  /// Gamma^upper_{lower1 lower2}; zero outside the three non-zero entries.
  double operator()(int upper, int lower1, int lower2) const;

 private:
  double radius_;
};

/// Two-point shifter from the reference radius to the current one.
class Shifter {
 public:
  Shifter(double r_ref, double r_cur);

  double r_ref() const { return r_ref_; }
  double r_cur() const { return r_cur_; }
  /// diag(1, R_ref / r_cur, 1).
  Mat3 mat() const;
  /// diag(1, r_cur / R_ref, 1).
  Mat3 inverse() const;

 private:
  double r_ref_;
  double r_cur_;
};

/// Jacobians of the map between Cartesian (z^j) and cylindrical (x^a) coordinates.
struct BasisChange {
  double angle;
  double radius;
  Mat3 cart_to_cyl;  // dx^a / dz^j
  Mat3 cyl_to_cart;  // dz^j / dx^a
};

/// Throws DomainError unless radius is finite and > r_min.
void require_off_axis(double radius, double r_min = 0.0);

MetricCyl metric(double radius);
Christoffel christoffel(double radius);
Shifter shifter(double r_ref, double r_cur);
BasisChange basis_change(double radius, double angle);

/// Curvilinear components X^a_A of a deformation gradient given in Cartesian components.
Mat3 transform_defgrad_components(const Mat3& f_cart, const BasisChange& bc_ref,
                                  const BasisChange& bc_cur);

/// Inverse of transform_defgrad_components.
Mat3 transform_defgrad_to_cartesian(const Mat3& f_cyl, const BasisChange& bc_ref,
                                    const BasisChange& bc_cur);

/// W^A|_B = dW^A/dx^B + Gamma^A_{BC} W^C, with partials(A, B) = dW^A/dx^B.
Mat3 covariant_derivative_vector(const Mat3& partials, const Vec3& components,
                                 const Christoffel& chr);

/// Covariant gradient block (delta^a_dir psi)|_c of a scalar shape function
/// carried along in-plane displacement direction dir (kR or kZ).
/// partials = (dpsi/dr, dpsi/dz).
Mat3 shape_grad(double shape_value, const Vec2& shape_partials, const Christoffel& chr,
                int dir);

}  // namespace axifep::cylgeo
