#include "axifep/app/checks.hpp"

#include <cmath>
#include <random>

#include "axifep/oracles.hpp"

namespace axifep::app {

namespace {

double trial_phi(const Mat3& eps, double z, const mcc::MatParams& p) {
  const Mat3 zeta = mcc::zeta_stress(eps, p);
  const double psi = mcc::stored_energy(eps, z, p).total();
  return mcc::yield(mcc::eshelby_zeta(zeta, psi), mcc::hardening_beta(z, p), p);
}

Mat3 random_sym(std::mt19937_64& rng, std::uniform_real_distribution<double>& u) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = u(rng);
  return m;
}

}  // namespace

std::vector<PlasticTrial> random_plastic_trials(int count, std::uint64_t seed,
                                                const mcc::MatParams& p,
                                                double rel_increment) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<PlasticTrial> out;
  while (static_cast<int>(out.size()) < count) {
    const double z0 = -0.025 * (u(rng) + 1.0);
    // Direction biased towards compaction so both sides of the ellipse occur.
    Mat3 dir = 0.3 * random_sym(rng, u);
    dir.diagonal().array() -= 0.3 * (u(rng) + 1.0);
    if (dir.norm() < 1e-3) continue;

    // Bisect the ray for the surface crossing.
    double lo = 0.0;
    double hi = 1.0;
    while (trial_phi(hi * dir, z0, p) <= 0.0 && hi < 1e3) hi *= 2.0;
    if (hi >= 1e3) continue;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      (trial_phi(mid * dir, z0, p) > 0.0 ? hi : lo) = mid;
    }
    const Mat3 start = 0.999 * lo * dir;
    Mat3 step = random_sym(rng, u);
    step = step / step.norm() + dir / dir.norm();
    const Mat3 trial = start + rel_increment * start.norm() * step / step.norm();
    if (trial_phi(trial, z0, p) <= 0.0) continue;
    out.push_back({z0, start, trial});
  }
  return out;
}

ConstitutiveAgreement compare_with_substepping(const std::vector<PlasticTrial>& trials,
                                               const mcc::MatParams& p, int n_sub) {
  ConstitutiveAgreement a;
  a.min_dgamma = std::numeric_limits<double>::infinity();
  const double scale = p.p_c0 * p.p_c0;
  for (const PlasticTrial& t : trials) {
    const mcc::ReturnResult rr = mcc::return_map_strain(t.eps_trial, t.z_prev, p);
    const oracles::SubstepResult ref =
        oracles::substep_integrate({t.eps_start, t.eps_trial}, t.z_prev, p, n_sub);
    a.zeta_rel = std::max(a.zeta_rel, (rr.state.zeta - ref.zeta).norm() / ref.zeta.norm());
    a.z_rel = std::max(a.z_rel,
                       std::abs(rr.state.z - ref.z) / std::max(std::abs(ref.z), 1e-12));
    a.phi_scaled = std::max(a.phi_scaled, std::abs(rr.phi) / scale);
    a.min_dgamma = std::min(a.min_dgamma, rr.state.dgamma);
    ++a.trials;
  }
  return a;
}

double loglog_slope(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = std::min(h.size(), err.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

MidRampState benchmark_state(const RunConfig& cfg, int committed_steps) {
  const fem::CylinderSetup& g = cfg.geometry;
  fem::Model model(fem::gen_cylinder_mesh(g.r_int, g.r_ext, g.height, g.n_r, g.n_z),
                   cfg.material(), cfg.formulation);
  const double frac = static_cast<double>(committed_steps) / cfg.steps;
  fem::RampOptions ro;
  ro.steps = committed_steps;
  ro.max_bisections = cfg.max_bisections;
  ro.nr.tol = cfg.tol;
  ro.nr.linear_predictor = cfg.linear_predictor;
  if (committed_steps > 0)
    fem::run_ramp(model,
                  [&](double t) { return fem::cylinder_ramp_bcs(model.mesh, g, t * frac); }, ro);
  Eigen::VectorXd u;
  const double t_next = static_cast<double>(committed_steps + 1) / cfg.steps;
  const fem::NrReport rep =
      fem::nr_solve(model, fem::cylinder_ramp_bcs(model.mesh, g, t_next), ro.nr, u);
  if (!rep.converged) throw SolverError("benchmark_state: " + rep.failure);
  return {std::move(model), std::move(u)};
}

double max_relative_deviation(const std::vector<Eigen::VectorXd>& a,
                              const std::vector<Eigen::VectorXd>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double n = a[i].norm();
    worst = std::max(worst, (a[i] - b[i]).norm() / (n > 0.0 ? n : 1.0));
  }
  return worst;
}

}  // namespace axifep::app
