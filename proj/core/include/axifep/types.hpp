#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace axifep {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// Fourth-order tensor stored as a 9x9 matrix; row (i,j) -> 3*i+j.
using Tensor4 = Eigen::Matrix<double, 9, 9>;
/// Second-order tensor flattened row-major to match Tensor4 indexing.
using Flat9 = Eigen::Matrix<double, 9, 1>;

/// Component indices of the cylindrical chart (radial, hoop, axial).
inline constexpr int kR = 0;
inline constexpr int kTheta = 1;
inline constexpr int kZ = 2;

constexpr int pair_index(int i, int j) { return 3 * i + j; }

inline Flat9 flatten(const Mat3& m) {
  Flat9 f;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) f(pair_index(i, j)) = m(i, j);
  return f;
}

inline Mat3 unflatten(const Flat9& f) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = f(pair_index(i, j));
  return m;
}

/// Symmetric fourth-order identity: (ik jl + il jk)/2.
inline Tensor4 identity4_sym() {
  Tensor4 t = Tensor4::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      t(pair_index(i, j), pair_index(i, j)) += 0.5;
      t(pair_index(i, j), pair_index(j, i)) += 0.5;
    }
  return t;
}

/// Outer product a (x) b of two second-order tensors.
inline Tensor4 outer(const Mat3& a, const Mat3& b) {
  return flatten(a) * flatten(b).transpose();
}

/// Double contraction a : b.
inline double ddot(const Mat3& a, const Mat3& b) { return (a.array() * b.array()).sum(); }

// Error hierarchy. Each maps to one failure class that callers handle differently.

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Orientation-reversing or singular deformation at a Gauss point.
class InvertedElementError : public std::runtime_error {
 public:
  InvertedElementError(const std::string& what, int elem = -1, int gp = -1)
      : std::runtime_error(what), elem_(elem), gp_(gp) {}
  int elem() const { return elem_; }
  int gp() const { return gp_; }

 private:
  int elem_;
  int gp_;
};

/// Non-physical kinematic state, e.g. a non-positive eigenvalue of b.
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Local return-map failure; carries the trial state for sub-stepping callers.
class ConstitutiveError : public std::runtime_error {
 public:
  ConstitutiveError(const std::string& what, Mat3 trial_strain, double z_prev)
      : std::runtime_error(what), trial_strain_(trial_strain), z_prev_(z_prev) {}
  const Mat3& trial_strain() const { return trial_strain_; }
  double z_prev() const { return z_prev_; }

 private:
  Mat3 trial_strain_;
  double z_prev_;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace axifep
