#include <gtest/gtest.h>

#include <cmath>

#include "axifep/material_mcc.hpp"
#include "axifep/scenario.hpp"
#include "axifep/spectral.hpp"

using namespace axifep;
using namespace axifep::mcc;

namespace {

double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

const MatParams& bench() {
  static const MatParams p = fem::benchmark_params();
  return p;
}

double psi_total(const Mat3& eps, double z, const MatParams& p) {
  return stored_energy(eps, z, p).total();
}

double trial_phi(const Mat3& eps, double z, const MatParams& p) {
  return yield(eshelby_zeta(zeta_stress(eps, p), psi_total(eps, z, p)), hardening_beta(z, p), p);
}

}  // namespace

TEST(MatParams, DerivedModuli) {
  EXPECT_NEAR(bench().K, 1.375e9 / 0.75, 1.0);
  EXPECT_NEAR(bench().G, 0.5e9, 1e-3);
  EXPECT_LT(bench().p_c0, 0.0);
}

TEST(MatParams, RejectsInvalidInput) {
  EXPECT_THROW(MatParams::make(-1.0, 0.3, 1e6, 0, 0, 1, -1e5), DomainError);
  EXPECT_THROW(MatParams::make(1e9, 0.5, 1e6, 0, 0, 1, -1e5), DomainError);
  EXPECT_THROW(MatParams::make(1e9, 0.3, 1e6, 0, 0, 0.0, -1e5), DomainError);
}

TEST(StoredEnergy, ZeroState) {
  const StoredEnergy e = stored_energy(Mat3::Zero(), 0.0, bench());
  EXPECT_EQ(e.psi, 0.0);
  EXPECT_EQ(e.psi_hard, 0.0);
}

TEST(StoredEnergy, PureVolumetric) {
  const double ev = -0.02;
  const Mat3 eps = (ev / 3.0) * Mat3::Identity();
  EXPECT_NEAR(stored_energy(eps, 0.0, bench()).psi, 0.5 * bench().K * ev * ev, 1e-3);
}

TEST(StoredEnergy, HardeningDerivativeByFiniteDifference) {
  const double z = -0.01;
  const double h = 1e-6;
  const double fd = (hardening_energy(z + h, bench()) - hardening_energy(z - h, bench())) / (2 * h);
  EXPECT_NEAR(fd, -7.65e6, 1e-2);
  EXPECT_NEAR(hardening_beta(z, bench()), -7.65e6, 1e-6);
}

TEST(ZetaStress, ZeroAndUniaxial) {
  EXPECT_EQ(zeta_stress(Mat3::Zero(), bench()), Mat3::Zero());
  const Mat3 eps = Vec3(0.01, 0, 0).asDiagonal();
  const Mat3 dev = eps - (0.01 / 3.0) * Mat3::Identity();
  const Mat3 expected = bench().K * 0.01 * Mat3::Identity() + 2.0 * bench().G * dev;
  EXPECT_LT(max_abs(zeta_stress(eps, bench()) - expected), 1e-3);
}

TEST(ZetaStress, EqualsEnergyDerivative) {
  // zeta = d Psi / d eps for the isotropic energy; checked entry-wise by
  // central differences on a symmetric perturbation.
  Mat3 eps;
  eps << -0.03, 0.01, 0.004, 0.01, 0.02, -0.006, 0.004, -0.006, -0.01;
  const Mat3 zeta = zeta_stress(eps, bench());
  const double h = 1e-7;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      Mat3 d = Mat3::Zero();
      d(i, j) += 0.5 * h;
      d(j, i) += 0.5 * h;
      const double fd = (stored_energy(eps + d, 0, bench()).psi -
                         stored_energy(eps - d, 0, bench()).psi) /
                        (2 * h);
      EXPECT_NEAR(fd, zeta(i, j), 1e-9 * zeta.norm());
    }
}

TEST(Invariants, Examples) {
  const Invariants a = invariants(-5.0 * Mat3::Identity());
  EXPECT_DOUBLE_EQ(a.p, -5.0);
  EXPECT_NEAR(a.q, 0.0, 1e-15);
  const Invariants b = invariants(Vec3(1, -1, 0).asDiagonal());
  EXPECT_NEAR(b.p, 0.0, 1e-16);
  EXPECT_NEAR(b.rho, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(b.q, std::sqrt(3.0), 1e-15);
}

TEST(Invariants, QSquaredIdentity) {
  std::srand(9);
  for (int k = 0; k < 20; ++k) {
    Mat3 t = Mat3::Random();
    t = t + t.transpose();
    const Invariants inv = invariants(t);
    EXPECT_NEAR(inv.q * inv.q, 1.5 * ddot(inv.s, inv.s), 1e-12);
  }
}

TEST(Hardening, Beta) {
  EXPECT_EQ(hardening_beta(0.0, bench()), 0.0);
  EXPECT_EQ(consolidation_pressure(0.0, bench()), bench().p_c0);
  EXPECT_NEAR(hardening_beta(-0.1, bench()), -76.5e6, 1e-6);
}

TEST(Hardening, ExponentialLawMatchesEnergyDerivative) {
  const MatParams p = MatParams::make(1.375e9, 0.375, 765e6, 0.3, 5.0, 1.0, -2.4e8);
  for (double z = -0.2; z <= 0.0; z += 0.05) {
    const double h = 1e-6;
    const double fd = (hardening_energy(z + h, p) - hardening_energy(z - h, p)) / (2 * h);
    EXPECT_NEAR(fd / p.H, hardening_beta(z, p) / p.H, 1e-9);
  }
}

TEST(EshelbyZeta, Examples) {
  EXPECT_EQ(eshelby_zeta(Mat3::Zero(), 0.0), Mat3::Zero());
  Mat3 zeta;
  zeta << 3, 1, 0, 1, -2, 0.5, 0, 0.5, 4;
  const Mat3 xi = eshelby_zeta(zeta, 7.0);
  EXPECT_LT(max_abs(invariants(xi).s - invariants(zeta).s), 1e-14);
  EXPECT_NEAR(invariants(xi).p, invariants(zeta).p - 7.0, 1e-12);
}

TEST(Yield, StressFreeStateOnSurface) {
  EXPECT_EQ(yield(Mat3::Zero(), 0.0, bench()), 0.0);
}

TEST(Yield, HydrostaticVertexAndIntercept) {
  const double pc = bench().p_c0;
  EXPECT_NEAR(yield(0.5 * pc * Mat3::Identity(), 0.0, bench()), -0.25 * pc * pc, 1e-3);
  EXPECT_NEAR(yield(pc * Mat3::Identity(), 0.0, bench()), 0.0, 1e-3);
}

TEST(ReturnMap, ElasticTrialUnchanged) {
  const Mat3 eps = -0.01 * Mat3::Identity();
  const ReturnResult rr = return_map_strain(eps, 0.0, bench());
  EXPECT_FALSE(rr.state.yielded);
  EXPECT_EQ(rr.state.dgamma, 0.0);
  EXPECT_LT(max_abs(rr.state.eps_e - eps), 1e-16);
  EXPECT_LT((rr.tangent.D_alg - elastic_modulus(bench())).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_LT((rr.tangent.dE_dEtr - identity4_sym()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ReturnMap, HydrostaticBeyondInterceptFlowsVolumetrically) {
  // With q = 0 the flow is purely volumetric; the converged state lies on
  // the hardened intercept p_xi = p_c(z).
  const Mat3 eps = -0.2 * Mat3::Identity();
  ASSERT_GT(trial_phi(eps, 0.0, bench()), 0.0);
  const ReturnResult rr = return_map_strain(eps, 0.0, bench());
  ASSERT_TRUE(rr.state.yielded);
  const Mat3 xi = eshelby_zeta(rr.state.zeta, psi_total(rr.state.eps_e, rr.state.z, bench()));
  EXPECT_NEAR(invariants(rr.state.zeta).q, 0.0, 1e-6);
  EXPECT_NEAR(invariants(xi).p, consolidation_pressure(rr.state.z, bench()),
              1e-8 * std::abs(bench().p_c0));
  EXPECT_LT(rr.state.z, 0.0);
  // Independent scalar Newton on the hydrostatic axis.
  const double K = bench().K;
  const double Hm = bench().H;
  const double ev_tr = -0.6;
  double ev = ev_tr;
  double z = 0.0;
  for (int it = 0; it < 100; ++it) {
    // On the intercept p = p_c, so the flow gives ev = ev_tr - dgamma p_c and
    // z = dgamma p_c, hence z = ev_tr - ev.
    z = ev_tr - ev;
    const double pxi = K * ev - 0.5 * K * ev * ev - 0.5 * Hm * z * z;
    const double pc = bench().p_c0 + Hm * z;
    const double g = pxi - pc;
    const double dg = K - K * ev + Hm * z + Hm;
    const double step = g / dg;
    ev -= step;
    if (std::abs(step) < 1e-15) break;
  }
  EXPECT_NEAR(rr.state.eps_e.trace(), ev, 1e-9);
  EXPECT_NEAR(rr.state.z, ev_tr - ev, 1e-9);
}

TEST(ReturnMap, KktAtConvergedPlasticState) {
  Mat3 eps;
  eps << -0.01, 0.1, 0, 0.1, -0.02, 0, 0, 0, 0.005;
  const ReturnResult rr = return_map_strain(eps, 0.0, bench());
  ASSERT_TRUE(rr.state.yielded);
  EXPECT_GT(rr.state.dgamma, 0.0);
  EXPECT_LE(std::abs(rr.phi), 1e-10 * bench().p_c0 * bench().p_c0);
}

TEST(ReturnMap, MixedComponentsRoute) {
  // The mixed-component driver agrees with the strain driver.
  const double r = 4.0;
  Mat3 eps = Mat3::Zero();
  eps(0, 0) = -0.05;
  eps(1, 1) = 0.03;
  eps(2, 2) = -0.02;
  eps(0, 2) = eps(2, 0) = 0.04;
  const Mat3 b_sym = spectral::exp_sym(2.0 * eps);
  const ReturnResult a = return_map(spectral::unsymmetrise_mixed(b_sym, r), 0.0, bench(), 1e-10, r);
  const ReturnResult b = return_map_strain(eps, 0.0, bench());
  EXPECT_LT(max_abs(spectral::symmetrise_mixed(a.state.zeta, r) - b.state.zeta),
            1e-6 * b.state.zeta.norm());
}

TEST(TangentFd, ElasticPoint) {
  const Mat3 b = spectral::exp_sym(-0.002 * Mat3::Identity());
  EXPECT_LE(tangent_fd_check(b, 0.0, bench(), 1e-6).max_rel_error, 1e-9);
}

TEST(TangentFd, PlasticPoint) {
  Mat3 eps;
  eps << -0.1, 0.04, 0.0, 0.04, -0.08, 0.0, 0.0, 0.0, -0.12;
  const Mat3 b = spectral::exp_sym(2.0 * eps);
  ASSERT_TRUE(return_map(b, 0.0, bench()).state.yielded);
  EXPECT_LE(tangent_fd_check(b, 0.0, bench(), 1e-6).max_rel_error, 1e-5);
}

TEST(TangentFd, QuadraticDecay) {
  Mat3 eps;
  eps << -0.1, 0.04, 0.0, 0.04, -0.08, 0.0, 0.0, 0.0, -0.12;
  const double e1 = tangent_fd_check_strain(eps, 0.0, bench(), 1e-3).max_rel_error;
  const double e2 = tangent_fd_check_strain(eps, 0.0, bench(), 1e-4).max_rel_error;
  EXPECT_GT(e1 / e2, 50.0);
}

TEST(TangentFd, StepRangeIsChecked) {
  EXPECT_THROW(tangent_fd_check(Mat3::Identity(), 0.0, bench(), 1e-2), DomainError);
}

TEST(Tangent, MinorSymmetry) {
  Mat3 eps;
  eps << -0.1, 0.04, 0.01, 0.04, -0.08, 0.02, 0.01, 0.02, -0.12;
  const ReturnResult rr = return_map_strain(eps, -0.01, bench());
  ASSERT_TRUE(rr.state.yielded);
  const Tensor4& D = rr.tangent.D_alg;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          worst = std::max(worst, std::abs(D(pair_index(i, j), pair_index(k, l)) -
                                           D(pair_index(i, j), pair_index(l, k))));
  EXPECT_LE(worst, 1e-10 * D.cwiseAbs().maxCoeff());
}
