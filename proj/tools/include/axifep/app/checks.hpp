#pragma once

// Reusable verification routines behind `axifep verify` and the acceptance
// driver.

#include <cstdint>
#include <vector>

#include "axifep/app/config.hpp"
#include "axifep/material_mcc.hpp"
#include "axifep/solver.hpp"

namespace axifep::app {

/// A converged state (z_prev, eps_start) just inside the yield surface and a
/// small outward trial increment from it.
struct PlasticTrial {
  double z_prev;
  Mat3 eps_start;
  Mat3 eps_trial;
};

/// Trials whose return map is plastic. rel_increment scales the trial step
/// relative to |eps_start|.
std::vector<PlasticTrial> random_plastic_trials(int count, std::uint64_t seed,
                                                const mcc::MatParams& p,
                                                double rel_increment = 1e-3);

struct ConstitutiveAgreement {
  double zeta_rel = 0.0;     // max |zeta - zeta_ref| / |zeta_ref|
  double z_rel = 0.0;        // max |z - z_ref| / max(|z_ref|, 1e-12)
  double phi_scaled = 0.0;   // max |Phi| / p_c0^2 at the returned states
  double min_dgamma = 0.0;   // smallest plastic multiplier
  int trials = 0;
};

ConstitutiveAgreement compare_with_substepping(const std::vector<PlasticTrial>& trials,
                                               const mcc::MatParams& p, int n_sub);

/// Slope of log(err) against log(h) by least squares.
double loglog_slope(const std::vector<double>& h, const std::vector<double>& err);

/// Benchmark model advanced by `steps` committed steps, plus the unconverged
/// solution of the following step (the state used for stiffness checks).
struct MidRampState {
  fem::Model model;
  Eigen::VectorXd u;
};

MidRampState benchmark_state(const RunConfig& cfg, int committed_steps);

/// Max relative deviation between two runs, per step |u_a - u_b| / |u_a|.
double max_relative_deviation(const std::vector<Eigen::VectorXd>& a,
                              const std::vector<Eigen::VectorXd>& b);

}  // namespace axifep::app
