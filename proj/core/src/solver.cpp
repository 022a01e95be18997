#include "axifep/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <limits>
#include <sstream>

namespace axifep::fem {

Model::Model(MeshAxi m, const mcc::MatParams& p, Formulation f)
    : mesh(std::move(m)), params(p), formulation(f), gps(make_gp_records(mesh)),
      u(Eigen::VectorXd::Zero(mesh.num_dofs())) {}

void Model::commit(const Eigen::VectorXd& u_new) {
  u = u_new;
  for (GpRecord& g : gps) g.committed = g.trial;
  f_committed = f_trial;
  K_committed = K_trial;
}

AssemblyResult assemble(Model& model, const Eigen::VectorXd& u, const AssemblyOptions& opt) {
  if (model.formulation == Formulation::UL)
    return assemble_ul(model.mesh, model.gps, u, u - model.u, model.params, opt);
  return assemble_tl(model.mesh, model.gps, u, model.params, opt);
}

NrReport nr_solve(Model& model, const DirichletSet& bcs, const NrOptions& opt,
                  Eigen::VectorXd& u_out) {
  NrReport rep;
  AssemblyOptions aopt;
  aopt.threads = opt.threads;
  Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu;
  bool pattern_ready = false;

  // Returns false and records the failure when the assembly throws.
  auto evaluate = [&](const Eigen::VectorXd& u, ReducedSystem& rs) {
    try {
      AssemblyResult ar = assemble(model, u, aopt);
      rs = apply_dirichlet(ar.K, ar.f_int, bcs);
      model.f_trial = std::move(ar.f_int);
      model.K_trial = std::move(ar.K);
      return true;
    } catch (const InvertedElementError& e) {
      rep.failure = e.what();
    } catch (const ConstitutiveError& e) {
      rep.failure = e.what();
    } catch (const StateError& e) {
      rep.failure = e.what();
    }
    return false;
  };
  // u_free -= K_ff^{-1} r_f
  auto newton_update = [&](const ReducedSystem& rs, Eigen::VectorXd& u) {
    if (rs.free_dofs.empty()) return true;
    if (!pattern_ready) {
      lu.analyzePattern(rs.K_ff);
      pattern_ready = true;
    }
    lu.factorize(rs.K_ff);
    if (lu.info() != Eigen::Success) {
      rep.failure = "singular tangent stiffness";
      return false;
    }
    const Eigen::VectorXd du = lu.solve(rs.r_f);
    for (std::size_t i = 0; i < rs.free_dofs.size(); ++i)
      u(rs.free_dofs[i]) -= du(static_cast<int>(i));
    return true;
  };
  auto record = [&](double norm) {
    rep.residual_norms.push_back(norm);
    const double r1 = rep.residual_norms.front();
    rep.errors.push_back(r1 > 0.0 ? norm / r1 : 0.0);
    rep.iterations = static_cast<int>(rep.residual_norms.size());
  };

  u_out = model.u;
  ReducedSystem rs;
  if (opt.linear_predictor) {
    if (model.K_committed.rows() != model.mesh.num_dofs()) {
      if (!evaluate(model.u, rs)) return rep;
      model.f_committed = model.f_trial;
      model.K_committed = model.K_trial;
    }
    Eigen::VectorXd du_p = Eigen::VectorXd::Zero(model.mesh.num_dofs());
    for (const auto& [dof, v] : bcs.values()) du_p(dof) = v - model.u(dof);
    rs = apply_dirichlet(model.K_committed, model.f_committed + model.K_committed * du_p, bcs);
    record(rs.r_f.norm());
    impose(bcs, u_out);
    if (rep.residual_norms.front() == 0.0) {
      // Nothing to apply: refresh the trial states at the committed solution.
      if (!evaluate(u_out, rs)) return rep;
      rep.converged = true;
      return rep;
    }
    if (!newton_update(rs, u_out)) return rep;
  } else {
    impose(bcs, u_out);
  }

  double floor = -1.0;
  int growth = 0;
  while (true) {
    if (!evaluate(u_out, rs)) return rep;
    if (floor < 0.0) {
      double x_max = 0.0;
      for (const Vec2& X : model.mesh.nodes) x_max = std::max(x_max, X.cwiseAbs().maxCoeff());
      const double k_max = model.K_trial.diagonal().cwiseAbs().maxCoeff();
      floor = opt.roundoff_factor * std::numeric_limits<double>::epsilon() * k_max * x_max;
    }
    const double norm = rs.r_f.norm();
    record(norm);
    const int k = rep.iterations;
    const double err = rep.errors.back();
    if (!std::isfinite(norm)) {
      rep.failure = "non-finite residual";
      return rep;
    }
    // A vanishing first residual means the prescribed state is already in
    // equilibrium.
    if (rep.residual_norms.front() == 0.0 || (k > 1 && (err <= opt.tol || norm <= floor)) ||
        rs.free_dofs.empty()) {
      rep.converged = true;
      return rep;
    }
    if (k > 1) {
      growth = err > rep.errors[rep.errors.size() - 2] ? growth + 1 : 0;
      if (growth >= opt.max_growth) {
        rep.failure = "residual grew in consecutive iterations";
        return rep;
      }
    }
    if (k > opt.k_max) {
      std::ostringstream os;
      os << "no convergence within " << opt.k_max << " iterations (err " << err << ")";
      rep.failure = os.str();
      return rep;
    }
    if (!newton_update(rs, u_out)) return rep;
  }
}

namespace {

// Advances the model from load t0 to t1, splitting on failure.
void advance(Model& model, const BcAt& bcs, double t0, double t1, int depth,
             const RampOptions& opt, StepRecord& rec) {
  Eigen::VectorXd u_new;
  NrReport rep = nr_solve(model, bcs(t1), opt.nr, u_new);
  rec.iterations += rep.iterations;
  const bool ok = rep.converged;
  const std::string failure = rep.failure;
  rec.reports.push_back(std::move(rep));
  if (ok) {
    model.commit(u_new);
    return;
  }
  if (depth >= opt.max_bisections) {
    std::ostringstream os;
    os << "step " << rec.step << " failed after " << depth << " bisections: " << failure;
    throw SolverError(os.str());
  }
  rec.bisections = std::max(rec.bisections, depth + 1);
  const double tm = 0.5 * (t0 + t1);
  advance(model, bcs, t0, tm, depth + 1, opt, rec);
  advance(model, bcs, tm, t1, depth + 1, opt, rec);
}

}  // namespace

std::vector<StepRecord> run_ramp(Model& model, const BcAt& bcs, const RampOptions& opt,
                                 const StepCallback& on_step) {
  if (opt.steps < 1) throw ConfigError("number of load steps must be at least 1");
  std::vector<StepRecord> out;
  for (int s = 1; s <= opt.steps; ++s) {
    StepRecord rec;
    rec.step = s;
    rec.load = static_cast<double>(s) / opt.steps;
    advance(model, bcs, static_cast<double>(s - 1) / opt.steps, rec.load, 0, opt, rec);
    if (on_step) on_step(model, rec);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace axifep::fem
