#include <gtest/gtest.h>

#include <cmath>

#include "axifep/assembly.hpp"
#include "axifep/dirichlet.hpp"
#include "axifep/mesh.hpp"
#include "axifep/q8.hpp"
#include "axifep/scenario.hpp"
#include "axifep/solver.hpp"

using namespace axifep;
using namespace axifep::fem;

namespace {

MeshAxi unit_element() { return gen_cylinder_mesh(1.0, 2.0, 1.0, 1, 1); }

// Homogeneous compaction u = -eps X prescribed on the whole boundary.
DirichletSet compaction_bcs(const MeshAxi& mesh, double eps) {
  DirichletSet bcs;
  for (const char* set : {"inner", "outer"})
    for (int n : mesh.bset(set)) bcs.add(dof_index(n, 0), -eps * mesh.nodes[n].x());
  for (const char* set : {"bottom", "top"})
    for (int n : mesh.bset(set)) bcs.add(dof_index(n, 1), -eps * mesh.nodes[n].y());
  return bcs;
}

}  // namespace

TEST(Mesh, BenchmarkMesh) {
  const MeshAxi m = gen_cylinder_mesh(10, 15, 10, 5, 10);
  EXPECT_EQ(m.num_elems(), 50);
  EXPECT_EQ(m.num_nodes(), 11 * 21 - 50);
  for (int n : m.bset("inner")) EXPECT_EQ(m.nodes[n].x(), 10.0);
  for (int n : m.bset("outer")) EXPECT_EQ(m.nodes[n].x(), 15.0);
  EXPECT_EQ(m.bset("inner").size(), 21u);
}

TEST(Mesh, SingleElement) {
  const MeshAxi m = unit_element();
  EXPECT_EQ(m.num_elems(), 1);
  EXPECT_EQ(m.num_nodes(), 8);
  EXPECT_THROW(m.bset("nonexistent"), ConfigError);
}

TEST(Mesh, PositiveReferenceJacobianAndOffAxis) {
  const MeshAxi m = gen_cylinder_mesh(10, 15, 10, 5, 10);
  for (const GpRecord& g : make_gp_records(m)) {
    EXPECT_GT(g.dV0, 0.0);
    EXPECT_GT(g.ref_pos.x(), 0.0);
  }
}

TEST(Q8, InterpolationProperty) {
  const auto& nodes = q8_nodes();
  for (int a = 0; a < 8; ++a) {
    const Q8Eval e = q8_shape(nodes[a]);
    for (int b = 0; b < 8; ++b) EXPECT_NEAR(e.value[b], a == b ? 1.0 : 0.0, 1e-15);
  }
}

TEST(Q8, CentroidValues) {
  const Q8Eval e = q8_shape(Vec2::Zero());
  for (int a = 0; a < 4; ++a) EXPECT_DOUBLE_EQ(e.value[a], -0.25);
  for (int a = 4; a < 8; ++a) EXPECT_DOUBLE_EQ(e.value[a], 0.5);
}

TEST(Q8, PartitionOfUnityAtGaussPoints) {
  double wsum = 0.0;
  for (const auto& gp : gauss_3x3()) {
    const Q8Eval e = q8_shape(gp.xi);
    double s = 0.0;
    Vec2 ds = Vec2::Zero();
    for (int a = 0; a < 8; ++a) {
      s += e.value[a];
      ds += e.dparent[a];
    }
    EXPECT_NEAR(s, 1.0, 1e-15);
    EXPECT_LT(ds.norm(), 1e-14);
    wsum += gp.weight;
  }
  EXPECT_NEAR(wsum, 4.0, 1e-15);
}

TEST(Q8, DerivativesByFiniteDifference) {
  const Vec2 x(0.3, -0.6);
  const double h = 1e-6;
  const Q8Eval e = q8_shape(x);
  for (int d = 0; d < 2; ++d) {
    Vec2 dx = Vec2::Zero();
    dx(d) = h;
    const Q8Eval p = q8_shape(x + dx);
    const Q8Eval m = q8_shape(x - dx);
    for (int a = 0; a < 8; ++a)
      EXPECT_NEAR((p.value[a] - m.value[a]) / (2 * h), e.dparent[a](d), 1e-9);
  }
}

TEST(Dirichlet, EmptySetLeavesSystemUnchanged) {
  const MeshAxi m = unit_element();
  auto gps = make_gp_records(m);
  const AssemblyResult ar =
      assemble_tl(m, gps, Eigen::VectorXd::Zero(m.num_dofs()), benchmark_params());
  const Eigen::VectorXd r = Eigen::VectorXd::LinSpaced(m.num_dofs(), -1.0, 1.0);
  const ReducedSystem rs = apply_dirichlet(ar.K, r, DirichletSet{});
  EXPECT_EQ(rs.free_dofs.size(), static_cast<std::size_t>(m.num_dofs()));
  EXPECT_EQ((Eigen::MatrixXd(rs.K_ff) - Eigen::MatrixXd(ar.K)).norm(), 0.0);
  EXPECT_EQ((rs.r_f - r).norm(), 0.0);
}

TEST(Dirichlet, FullyConstrainedElement) {
  const MeshAxi m = unit_element();
  DirichletSet bcs;
  for (int d = 0; d < m.num_dofs(); ++d) bcs.add(d, 0.0);
  auto gps = make_gp_records(m);
  const AssemblyResult ar =
      assemble_tl(m, gps, Eigen::VectorXd::Zero(m.num_dofs()), benchmark_params());
  const Eigen::VectorXd r = Eigen::VectorXd::LinSpaced(m.num_dofs(), -1.0, 1.0);
  const ReducedSystem rs = apply_dirichlet(ar.K, r, bcs);
  EXPECT_TRUE(rs.free_dofs.empty());
  EXPECT_EQ(rs.K_ff.rows(), 0);
  EXPECT_EQ((rs.reactions - r).norm(), 0.0);
}

TEST(Dirichlet, ConflictingValuesThrow) {
  DirichletSet bcs;
  bcs.add(3, 1.0);
  EXPECT_NO_THROW(bcs.add(3, 1.0));
  EXPECT_THROW(bcs.add(3, 2.0), ConfigError);
}

TEST(Dirichlet, BenchmarkInnerWallRamp) {
  const CylinderSetup s;
  const MeshAxi m = gen_cylinder_mesh(s.r_int, s.r_ext, s.height, s.n_r, s.n_z);
  const double t = 0.4;
  const DirichletSet bcs = cylinder_ramp_bcs(m, s, t);
  for (int n : m.bset("inner")) {
    const double Z = m.nodes[n].y();
    EXPECT_NEAR(bcs.values().at(dof_index(n, 0)),
                s.u_bar * (Z - s.height / 2) * (2 / s.height) * t, 1e-15);
    EXPECT_EQ(bcs.values().at(dof_index(n, 1)), 0.0);
  }
  for (int n : m.bset("top")) EXPECT_EQ(bcs.values().at(dof_index(n, 1)), 0.0);
  for (int n : m.bset("outer"))
    if (m.nodes[n].y() > 0 && m.nodes[n].y() < s.height) EXPECT_FALSE(bcs.contains(dof_index(n, 0)));
}

TEST(Assembly, ZeroDisplacementGivesSmallStrainElasticStiffness) {
  const MeshAxi m = gen_cylinder_mesh(1.0, 1.7, 0.8, 1, 1);
  const mcc::MatParams p = benchmark_params();
  auto gps = make_gp_records(m);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m.num_dofs());
  const AssemblyResult ar = assemble_ul(m, gps, zero, zero, p);

  // Independent B-matrix stiffness: strains (rr, tt, zz, 2 rz).
  const double lambda = p.K - 2.0 * p.G / 3.0;
  Eigen::Matrix4d D = Eigen::Matrix4d::Zero();
  D.topLeftCorner<3, 3>().setConstant(lambda);
  D.topLeftCorner<3, 3>().diagonal().array() += 2.0 * p.G;
  D(3, 3) = p.G;
  const Q8Conn& conn = m.elems.front();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(16, 16);
  for (const GpRecord& g : gps) {
    Eigen::Matrix<double, 4, 16> B = Eigen::Matrix<double, 4, 16>::Zero();
    for (int a = 0; a < 8; ++a) {
      B(0, 2 * a) = g.dshape_ref[a].x();
      B(1, 2 * a) = g.shape[a] / g.ref_pos.x();
      B(2, 2 * a + 1) = g.dshape_ref[a].y();
      B(3, 2 * a) = g.dshape_ref[a].y();
      B(3, 2 * a + 1) = g.dshape_ref[a].x();
    }
    const Eigen::Matrix<double, 16, 16> ke = B.transpose() * D * B * g.dV0;
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        K.block<2, 2>(2 * conn[a], 2 * conn[b]) += ke.block<2, 2>(2 * a, 2 * b);
  }
  const Eigen::MatrixXd Ka(ar.K);
  EXPECT_LT(ar.f_int.cwiseAbs().maxCoeff(), 1e-15 * K.cwiseAbs().maxCoeff());
  EXPECT_LT((Ka - K).cwiseAbs().maxCoeff(), 1e-9 * K.cwiseAbs().maxCoeff());
}

TEST(Assembly, UlAndTlCoincideAtZeroDisplacement) {
  const MeshAxi m = gen_cylinder_mesh(2.0, 3.0, 1.0, 2, 2);
  auto g1 = make_gp_records(m);
  auto g2 = make_gp_records(m);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(m.num_dofs());
  const AssemblyResult ul = assemble_ul(m, g1, zero, zero, benchmark_params());
  const AssemblyResult tl = assemble_tl(m, g2, zero, benchmark_params());
  const Eigen::MatrixXd d = Eigen::MatrixXd(ul.K) - Eigen::MatrixXd(tl.K);
  EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-12 * Eigen::MatrixXd(ul.K).cwiseAbs().maxCoeff());
}

TEST(Assembly, FirstStepInternalForceAgreesBetweenFormulations) {
  // From the virgin state both routes evaluate the same single-step
  // Cauchy stress: UL integrates sigma : grad over the current volume, TL
  // integrates P : Grad over the reference volume.
  const MeshAxi m = gen_cylinder_mesh(2.0, 3.0, 1.0, 2, 2);
  Eigen::VectorXd u(m.num_dofs());
  for (int n = 0; n < m.num_nodes(); ++n) {
    const Vec2& X = m.nodes[n];
    u(2 * n) = 0.15 * (X.y() - 0.5) - 0.02 * (X.x() - 2.0);
    u(2 * n + 1) = -0.03 * X.y() + 0.01 * X.x();
  }
  auto g1 = make_gp_records(m);
  auto g2 = make_gp_records(m);
  const AssemblyResult ul = assemble_ul(m, g1, u, u, benchmark_params());
  const AssemblyResult tl = assemble_tl(m, g2, u, benchmark_params());
  bool plastic = false;
  for (const auto& g : g1) plastic = plastic || g.trial.mat.yielded;
  EXPECT_TRUE(plastic);
  EXPECT_LT((ul.f_int - tl.f_int).cwiseAbs().maxCoeff(), 1e-10 * tl.f_int.cwiseAbs().maxCoeff());
}

TEST(Assembly, ThreadCountDoesNotChangeResults) {
  const MeshAxi m = gen_cylinder_mesh(10, 15, 10, 5, 10);
  Eigen::VectorXd u(m.num_dofs());
  for (int n = 0; n < m.num_nodes(); ++n) {
    u(2 * n) = 0.01 * std::sin(m.nodes[n].y());
    u(2 * n + 1) = -0.005 * m.nodes[n].y();
  }
  auto g1 = make_gp_records(m);
  auto g2 = make_gp_records(m);
  AssemblyOptions one;
  one.threads = 1;
  AssemblyOptions four;
  four.threads = 4;
  const AssemblyResult a = assemble_tl(m, g1, u, benchmark_params(), one);
  const AssemblyResult b = assemble_tl(m, g2, u, benchmark_params(), four);
  EXPECT_EQ((a.f_int - b.f_int).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((Eigen::MatrixXd(a.K) - Eigen::MatrixXd(b.K)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Assembly, InvertedElementIsReported) {
  const MeshAxi m = unit_element();
  auto gps = make_gp_records(m);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(m.num_dofs());
  for (int n = 0; n < m.num_nodes(); ++n) u(2 * n) = -3.0 * (m.nodes[n].x() - 1.0);
  EXPECT_THROW(assemble_tl(m, gps, u, benchmark_params()), InvertedElementError);
}

TEST(NrSolve, SmallElasticLoadConvergesInTwoIterations) {
  for (Formulation f : {Formulation::UL, Formulation::TL}) {
    Model model(gen_cylinder_mesh(2.0, 3.0, 1.0, 2, 2), benchmark_params(), f);
    Eigen::VectorXd u;
    const NrReport rep = nr_solve(model, compaction_bcs(model.mesh, 1e-9), NrOptions{}, u);
    EXPECT_TRUE(rep.converged) << rep.failure;
    EXPECT_LE(rep.iterations, 2);
    for (const auto& g : model.gps) EXPECT_FALSE(g.trial.mat.yielded);
    // Homogeneous solution u = -eps X.
    for (int n = 0; n < model.mesh.num_nodes(); ++n)
      EXPECT_NEAR(u(2 * n), -1e-9 * model.mesh.nodes[n].x(), 1e-15);
  }
}

TEST(NrSolve, ErrorsAreRelativeToFirstResidual) {
  Model model(gen_cylinder_mesh(10, 15, 10, 5, 10), benchmark_params(), Formulation::UL);
  Eigen::VectorXd u;
  const NrReport rep =
      nr_solve(model, cylinder_ramp_bcs(model.mesh, CylinderSetup{}, 1.0 / 30), NrOptions{}, u);
  ASSERT_TRUE(rep.converged);
  EXPECT_EQ(rep.errors.front(), 1.0);
  EXPECT_LE(rep.errors.back(), 1e-8);
  EXPECT_EQ(rep.iterations, static_cast<int>(rep.errors.size()));
  for (std::size_t k = 0; k < rep.errors.size(); ++k)
    EXPECT_DOUBLE_EQ(rep.errors[k], rep.residual_norms[k] / rep.residual_norms.front());
}

TEST(NrSolve, IterationLimitIsReported) {
  Model model(gen_cylinder_mesh(10, 15, 10, 5, 10), benchmark_params(), Formulation::UL);
  NrOptions opt;
  opt.k_max = 1;
  Eigen::VectorXd u;
  const NrReport rep =
      nr_solve(model, cylinder_ramp_bcs(model.mesh, CylinderSetup{}, 1.0 / 30), opt, u);
  EXPECT_FALSE(rep.converged);
  EXPECT_FALSE(rep.failure.empty());
}

TEST(RunRamp, FailureAfterBisectionsThrows) {
  Model model(gen_cylinder_mesh(10, 15, 10, 5, 10), benchmark_params(), Formulation::UL);
  const CylinderSetup s;
  RampOptions ro;
  ro.steps = 1;
  ro.max_bisections = 1;
  ro.nr.k_max = 1;
  EXPECT_THROW(run_ramp(model, [&](double t) { return cylinder_ramp_bcs(model.mesh, s, t); }, ro),
               SolverError);
}

TEST(RunRamp, BisectionRecoversLargeStep) {
  Model model(gen_cylinder_mesh(10, 15, 10, 5, 10), benchmark_params(), Formulation::UL);
  CylinderSetup s;
  s.u_bar = 1.0;
  RampOptions ro;
  ro.steps = 1;
  const auto steps =
      run_ramp(model, [&](double t) { return cylinder_ramp_bcs(model.mesh, s, t); }, ro);
  ASSERT_EQ(steps.size(), 1u);
  EXPECT_GE(steps.front().bisections, 1);
  EXPECT_NEAR(model.u(dof_index(model.mesh.bset("inner").back(), 0)), 1.0, 1e-12);
}

TEST(RunRamp, JacobianSplitHoldsAtEveryGaussPoint) {
  Model model(gen_cylinder_mesh(10, 15, 10, 5, 10), benchmark_params(), Formulation::TL);
  const CylinderSetup s;
  RampOptions ro;
  ro.steps = 5;
  run_ramp(model, [&](double t) { return cylinder_ramp_bcs(model.mesh, s, 0.2 * t); }, ro);
  for (const auto& g : model.gps)
    EXPECT_NEAR(g.committed.mat.J_e * g.committed.J_p, g.committed.J, 1e-10);
}

TEST(Scenario, NearestGaussPoint) {
  const MeshAxi m = gen_cylinder_mesh(10, 15, 10, 5, 10);
  const auto gps = make_gp_records(m);
  const int g = nearest_gp(gps, Vec2(10.0, 10.0));
  EXPECT_EQ(gps[g].elem, 45);
  EXPECT_LT((gps[g].ref_pos - Vec2(10.0, 10.0)).norm(), 0.2);
}

TEST(Invariants, UniformRadialStretchIsReproducedExactly) {
  const double alpha = 1.07;
  const MeshAxi m = gen_cylinder_mesh(2.0, 2.6, 0.5, 1, 1);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(m.num_dofs());
  for (int n = 0; n < m.num_nodes(); ++n) u(2 * n) = (alpha - 1.0) * m.nodes[n].x();
  for (Formulation f : {Formulation::UL, Formulation::TL}) {
    auto gps = make_gp_records(m);
    if (f == Formulation::UL) assemble_ul(m, gps, u, u, benchmark_params());
    else assemble_tl(m, gps, u, benchmark_params());
    for (const GpRecord& g : gps) {
      const double R = g.ref_pos.x();
      EXPECT_NEAR(g.trial.r, alpha * R, 1e-12);
      const Mat3 phys = physical_defgrad(g.trial.F, R, g.trial.r);
      EXPECT_LT((phys - Mat3(Vec3(alpha, alpha, 1.0).asDiagonal())).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_NEAR(g.trial.J, alpha * alpha, 1e-10);
    }
  }
}

TEST(Invariants, RigidAxialTranslationLeavesStressUnchanged) {
  const MeshAxi m = gen_cylinder_mesh(2.0, 3.0, 1.0, 2, 2);
  Eigen::VectorXd u(m.num_dofs());
  for (int n = 0; n < m.num_nodes(); ++n) {
    const Vec2& X = m.nodes[n];
    u(2 * n) = 0.15 * (X.y() - 0.5) - 0.02 * (X.x() - 2.0);
    u(2 * n + 1) = -0.03 * X.y() + 0.01 * X.x();
  }
  Eigen::VectorXd shifted = u;
  for (int n = 0; n < m.num_nodes(); ++n) shifted(2 * n + 1) += 0.37;
  for (Formulation f : {Formulation::UL, Formulation::TL}) {
    auto a = make_gp_records(m);
    auto b = make_gp_records(m);
    if (f == Formulation::UL) {
      assemble_ul(m, a, u, u, benchmark_params());
      assemble_ul(m, b, shifted, shifted, benchmark_params());
    } else {
      assemble_tl(m, a, u, benchmark_params());
      assemble_tl(m, b, shifted, benchmark_params());
    }
    double scale = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      scale = std::max(scale, a[i].trial.sigma.cwiseAbs().maxCoeff());
      diff = std::max(diff, (a[i].trial.sigma - b[i].trial.sigma).cwiseAbs().maxCoeff());
    }
    EXPECT_LE(diff, 1e-9 * scale);
  }
}
