#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "axifep/material_mcc.hpp"

namespace axifep::app {

/// `axifep cavity --alpha a`: prints both component matrices and both
/// Jacobian routes. Returns 0 when they agree, 4 otherwise.
int cmd_cavity(double alpha, std::ostream& out);

// Strain-path driver -------------------------------------------------------

/// One row of a strain path: the trial logarithmic strain components.
struct StrainRow {
  Mat3 eps;
  int line = 0;
};

struct StrainPath {
  mcc::MatParams params;
  std::vector<StrainRow> rows;
};

/// Path file: `key = value` parameter lines (E, nu, H, kappa, alpha, m,
/// p_c0; p_c0 signed) followed by rows `e_rr e_tt e_zz e_rz` or the six
/// components `e11 e22 e33 e12 e23 e13`. Rows give the total log strain;
/// increments are added to the elastic strain of the previous row.
/// Throws ConfigError with the offending line.
StrainPath parse_strain_path(std::istream& in);

struct MatpointRow {
  double p, q, rho, z, dgamma, phi;
  bool yielded;
  Mat3 zeta;
  Mat3 eps_e;
};

std::vector<MatpointRow> run_strain_path(const StrainPath& path);

/// `axifep matpoint <path>`: CSV of the stress path on out.
int cmd_matpoint(const std::filesystem::path& file, std::ostream& out, std::ostream& err);

// Verification -------------------------------------------------------------

struct CheckResult {
  std::string suite;
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool lower_bound = false;  // limit is a minimum instead of a maximum
  bool passed = false;
  std::string detail;
};

/// Suites: tangent, ul-vs-tl, quadrature, constitutive, cavity, all.
/// Throws ConfigError for an unknown suite name.
std::vector<CheckResult> run_verification(const std::string& suite);

/// `axifep verify <suite>`: prints each check, writes verify.json into
/// out_dir and returns 0 or 4.
int cmd_verify(const std::string& suite, const std::filesystem::path& out_dir, std::ostream& out,
               std::ostream& err);

}  // namespace axifep::app
