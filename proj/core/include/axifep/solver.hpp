#pragma once

// Newton-Raphson equilibrium iterations and the stepped Dirichlet ramp.

#include <functional>
#include <string>
#include <vector>

#include "axifep/assembly.hpp"
#include "axifep/dirichlet.hpp"

namespace axifep::fem {

/// Mesh, material and the committed (last converged) solution.
struct Model {
  MeshAxi mesh;
  mcc::MatParams params;
  Formulation formulation = Formulation::UL;
  std::vector<GpRecord> gps;
  Eigen::VectorXd u;  // committed nodal displacements
  /// Internal force and stiffness evaluated at the committed state; empty
  /// until the first assembly.
  Eigen::VectorXd f_committed;
  SparseMat K_committed;
  Eigen::VectorXd f_trial;
  SparseMat K_trial;

  Model(MeshAxi m, const mcc::MatParams& p, Formulation f);

  /// Copies every trial Gauss-point state, and the internal force and
  /// stiffness of the last assembly, into the committed slots.
  void commit(const Eigen::VectorXd& u_new);
};

struct NrOptions {
  double tol = 1e-8;
  int k_max = 25;
  int threads = 0;
  /// Divergence is declared after this many consecutive error increases.
  int max_growth = 3;
  /// Apply the prescribed increment through the committed tangent (first
  /// residual = linearised out-of-balance force); otherwise impose it directly
  /// and take the nonlinear residual as r^(1).
  bool linear_predictor = true;
  /// Absolute floor: a residual below roundoff_factor * machine epsilon *
  /// max|K_ii| * max|X| is indistinguishable from coordinate round-off and
  /// counts as converged. Only matters when the load itself is that small.
  double roundoff_factor = 10.0;
};

struct NrReport {
  std::vector<double> residual_norms;  // ||r^(1)||, ||r^(2)||, ...
  std::vector<double> errors;          // ||r^(k)|| / ||r^(1)||
  int iterations = 0;                  // index k+1 of the accepted residual
  bool converged = false;
  std::string failure;
};

/// Residual and stiffness of the model's formulation at u, relative to the
/// committed state. Trial states are left in the Gauss-point records.
AssemblyResult assemble(Model& model, const Eigen::VectorXd& u, const AssemblyOptions& opt = {});

/// Solves equilibrium for the prescribed values in bcs starting from the
/// committed state. Returns the trial displacement in u_out; the model is not
/// committed. Element inversion and constitutive failures end the solve as
/// non-converged.
NrReport nr_solve(Model& model, const DirichletSet& bcs, const NrOptions& opt,
                  Eigen::VectorXd& u_out);

/// Prescribed values at load factor t in [0, 1].
using BcAt = std::function<DirichletSet(double)>;

struct StepRecord {
  int step = 0;           // 1-based
  double load = 0.0;      // load factor at the end of the step
  int iterations = 0;     // summed over sub-steps
  int bisections = 0;     // depth of the deepest split
  std::vector<NrReport> reports;
};

struct RampOptions {
  int steps = 30;
  int max_bisections = 4;
  NrOptions nr;
};

using StepCallback = std::function<void(const Model&, const StepRecord&)>;

/// Runs steps equal increments of the ramp, halving a failed increment up to
/// max_bisections times. Throws SolverError when a step cannot be completed;
/// steps already committed stay committed.
std::vector<StepRecord> run_ramp(Model& model, const BcAt& bcs, const RampOptions& opt,
                                 const StepCallback& on_step = {});

}  // namespace axifep::fem
