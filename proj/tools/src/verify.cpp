#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "axifep/app/checks.hpp"
#include "axifep/app/commands.hpp"
#include "axifep/app/run.hpp"
#include "axifep/oracles.hpp"
#include "axifep/q8.hpp"
#include "json.hpp"

namespace axifep::app {

namespace {

CheckResult check(const std::string& suite, const std::string& name, double value, double limit,
                  std::string detail = {}) {
  return {suite, name, value, limit, false, std::isfinite(value) && value <= limit,
          std::move(detail)};
}

CheckResult check_at_least(const std::string& suite, const std::string& name, double value,
                           double minimum) {
  return {suite, name, value, minimum, true, std::isfinite(value) && value >= minimum, {}};
}

// Quadratic element with straight or bowed edges over [R0, R0 + dR] x [0, dZ].
fem::MeshAxi single_element(const std::array<Vec2, 8>& coords) {
  fem::MeshAxi m;
  m.nodes.assign(coords.begin(), coords.end());
  fem::Q8Conn c{};
  for (int a = 0; a < 8; ++a) c[a] = a;
  m.elems.push_back(c);
  return m;
}

std::array<Vec2, 8> box(double r0, double r1, double z0, double z1) {
  const double rm = 0.5 * (r0 + r1);
  const double zm = 0.5 * (z0 + z1);
  return {Vec2(r0, z0), Vec2(r1, z0), Vec2(r1, z1), Vec2(r0, z1),
          Vec2(rm, z0), Vec2(r1, zm), Vec2(rm, z1), Vec2(r0, zm)};
}

double gauss_volume(const std::array<Vec2, 8>& coords) {
  double v = 0.0;
  for (const auto& g : fem::make_gp_records(single_element(coords))) v += g.dV0;
  return v;
}

Eigen::VectorXd compaction_field(const fem::MeshAxi& mesh) {
  Eigen::VectorXd u(mesh.num_dofs());
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    const Vec2& X = mesh.nodes[n];
    u(2 * n) = -0.01 * X.x() + 1e-3 * std::sin(X.y());
    u(2 * n + 1) = -0.01 * X.y() + 1e-3 * std::cos(X.x());
  }
  return u;
}

void cavity_suite(std::vector<CheckResult>& out) {
  for (double alpha : {1.1, 1.0, 0.5, 2.0}) {
    const oracles::CavityReport rep = oracles::cavity_fixture(alpha, 1.0, 0.7);
    const Mat3 expected = Eigen::Vector3d(alpha, 1.0, 1.0).asDiagonal();
    std::ostringstream tag_os;
    tag_os << "alpha=" << alpha;
    const std::string tag = tag_os.str();
    out.push_back(check("cavity", "F_cyl diag(alpha,1,1) " + tag,
                        (rep.F_cyl - expected).cwiseAbs().maxCoeff(), 1e-13));
    out.push_back(check("cavity", "J routes agree " + tag,
                        std::max(std::abs(rep.J_cart - alpha * alpha),
                                 std::abs(rep.J_cyl - alpha * alpha)),
                        1e-12));
  }
}

void constitutive_suite(std::vector<CheckResult>& out) {
  const mcc::MatParams p = fem::benchmark_params();
  const auto trials = random_plastic_trials(20, 2024, p);
  const ConstitutiveAgreement a = compare_with_substepping(trials, p, 10000);
  out.push_back(check("constitutive", "zeta vs 1e4 sub-steps (relative)", a.zeta_rel, 1e-5));
  out.push_back(check("constitutive", "z vs 1e4 sub-steps (relative)", a.z_rel, 1e-5));
  out.push_back(check("constitutive", "|Phi| / p_c0^2 at returned states", a.phi_scaled, 1e-10));
  out.push_back(check("constitutive", "plastic multiplier non-negative", -a.min_dgamma, 0.0));

  const PlasticTrial& t = trials.front();
  const auto coarse = oracles::substep_integrate({t.eps_start, t.eps_trial}, t.z_prev, p, 1000);
  const auto fine = oracles::substep_integrate({t.eps_start, t.eps_trial}, t.z_prev, p, 10000);
  out.push_back(check("constitutive", "sub-stepping 1e3 vs 1e4 (relative)",
                      (coarse.zeta - fine.zeta).norm() / fine.zeta.norm(), 1e-4));
}

void tangent_suite(std::vector<CheckResult>& out) {
  const mcc::MatParams p = fem::benchmark_params();
  Mat3 eps_el = -1e-3 * Mat3::Identity();
  eps_el(0, 1) = eps_el(1, 0) = 2e-4;
  out.push_back(check("tangent", "material, elastic state",
                      mcc::tangent_fd_check_strain(eps_el, 0.0, p, 1e-6).max_rel_error, 1e-5));

  double worst = 0.0;
  const auto trials = random_plastic_trials(20, 7, p, 0.05);
  for (const auto& t : trials)
    worst = std::max(worst,
                     mcc::tangent_fd_check_strain(t.eps_trial, t.z_prev, p, 1e-6).max_rel_error);
  out.push_back(check("tangent", "material, 20 plastic states", worst, 1e-5));

  std::vector<double> hs = {4e-4, 2e-4, 1e-4};
  std::vector<double> errs;
  for (double h : hs)
    errs.push_back(mcc::tangent_fd_check_strain(trials.front().eps_trial,
                                                trials.front().z_prev, p, h)
                       .max_rel_error);
  out.push_back(check_at_least("tangent", "material FD error order", loglog_slope(hs, errs), 1.8));

  RunConfig cfg = benchmark_config();
  const double h = 1e-7 * cfg.geometry.r_ext;

  // Homogeneous compaction with a mild shear ripple stays strictly inside
  // the yield surface, unlike the stress-free state which sits on it.
  fem::Model el(fem::gen_cylinder_mesh(cfg.geometry.r_int, cfg.geometry.r_ext,
                                       cfg.geometry.height, cfg.geometry.n_r, cfg.geometry.n_z),
                p, fem::Formulation::UL);
  const Eigen::VectorXd u_el = compaction_field(el.mesh);
  const auto fd_el = oracles::fd_global_stiffness(el, u_el, h);
  bool elastic = true;
  {
    fem::Model probe = el;
    (void)fem::assemble(probe, u_el);
    for (const auto& g : probe.gps) elastic = elastic && !g.trial.mat.yielded;
  }
  out.push_back(check("tangent", "global stiffness, elastic state",
                      elastic ? fd_el.max_rel_error : 1.0, 1e-7));

  std::vector<int> dofs;
  for (int d = 0; d < el.mesh.num_dofs(); d += 7) dofs.push_back(d);
  std::vector<double> gh = {4e-3, 2e-3, 1e-3};
  std::vector<double> gerr;
  for (double hh : gh) gerr.push_back(oracles::fd_global_stiffness(el, u_el, hh, dofs).max_rel_error);
  out.push_back(check_at_least("tangent", "global FD error order", loglog_slope(gh, gerr), 1.8));

  const MidRampState pl = benchmark_state(cfg, 14);
  out.push_back(check("tangent", "global stiffness, benchmark step 15",
                      oracles::fd_global_stiffness(pl.model, pl.u, h).max_rel_error, 1e-5));
}

void ul_tl_suite(std::vector<CheckResult>& out) {
  RunConfig cfg = benchmark_config();
  cfg.formulation = fem::Formulation::UL;
  const RunResult ul = execute_run(cfg, false);
  cfg.formulation = fem::Formulation::TL;
  const RunResult tl = execute_run(cfg, false);
  const bool both = ul.completed && tl.completed;
  out.push_back(check("ul-vs-tl", "both formulations complete the ramp", both ? 0.0 : 1.0, 0.0));
  out.push_back(check("ul-vs-tl", "per-step displacement deviation (relative)",
                      both ? max_relative_deviation(ul.displacements, tl.displacements)
                           : std::numeric_limits<double>::infinity(),
                      1e-8));
}

void quadrature_suite(std::vector<CheckResult>& out) {
  oracles::QuadRequest q;
  q.coords = box(1.0, 2.0, 0.0, 1.0);
  out.push_back(check("quadrature", "unit square volume, oracle",
                      std::abs(oracles::quadrature_oracle(q) - 1.5), 1e-12));
  out.push_back(check("quadrature", "unit square volume, 3x3 Gauss",
                      std::abs(gauss_volume(q.coords) - 1.5), 1e-12));

  // Parallelogram: affine map, integrand R det J is linear in the parent
  // coordinates.
  std::array<Vec2, 8> par;
  const Vec2 o(3.0, -1.0), a(2.0, 0.5), b(0.7, 1.5);
  const auto& pn = fem::q8_nodes();
  for (int i = 0; i < 8; ++i)
    par[i] = o + 0.5 * (pn[i].x() + 1.0) * a + 0.5 * (pn[i].y() + 1.0) * b;
  q.coords = par;
  const double v_ref = oracles::quadrature_oracle(q);
  out.push_back(check("quadrature", "affine element volume, 3x3 Gauss vs oracle",
                      std::abs(gauss_volume(par) - v_ref) / v_ref, 1e-12));

  // One load step on a single element from the stress-free state.
  const mcc::MatParams p = fem::benchmark_params();
  const auto coords = box(10.0, 11.0, 0.0, 1.0);
  fem::MeshAxi mesh = single_element(coords);
  auto gps = fem::make_gp_records(mesh);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(16);
  std::array<Vec2, 8> un{};
  for (int n = 0; n < 8; ++n) {
    const Vec2& X = coords[n];
    un[n] = Vec2(-0.06 * (X.x() - 10.0) + 0.01 * X.y() * X.y(),
                 -0.05 * X.y() + 0.01 * (X.x() - 10.0));
    u(2 * n) = un[n].x();
    u(2 * n + 1) = un[n].y();
  }
  fem::AssemblyOptions aopt;
  aopt.with_stiffness = false;
  const Eigen::VectorXd f = fem::assemble_tl(mesh, gps, u, p, aopt).f_int;
  bool plastic = false;
  for (const auto& g : gps) plastic = plastic || g.trial.mat.yielded;
  out.push_back(check("quadrature", "f_int test state is plastic", plastic ? 0.0 : 1.0, 0.0));

  q.coords = coords;
  q.tag = oracles::QuadIntegrand::FIntComponent;
  q.u = un;
  q.params = p;
  double worst_consistency = 0.0;
  double worst_converged = 0.0;
  const double fscale = f.cwiseAbs().maxCoeff();
  for (int node = 0; node < 8; ++node)
    for (int dir = 0; dir < 2; ++dir) {
      q.node = node;
      q.dir = dir;
      q.points = 3;
      const double f3 = oracles::quadrature_oracle(q);
      q.points = 64;
      const double f64 = oracles::quadrature_oracle(q);
      q.points = 48;
      const double f48 = oracles::quadrature_oracle(q);
      worst_consistency = std::max(worst_consistency, std::abs(f3 - f(2 * node + dir)) / fscale);
      worst_converged = std::max(worst_converged, std::abs(f64 - f48) / fscale);
      (void)f64;
    }
  out.push_back(check("quadrature", "f_int, assembly vs oracle at 3 points per axis",
                      worst_consistency, 1e-6));
  out.push_back(check("quadrature", "f_int oracle converged (48 vs 64 points)", worst_converged,
                      1e-6));
}

}  // namespace

std::vector<CheckResult> run_verification(const std::string& suite) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  bool known = all;
  auto want = [&](const char* name) {
    const bool w = all || suite == name;
    known = known || w;
    return w;
  };
  if (want("cavity")) cavity_suite(out);
  if (want("constitutive")) constitutive_suite(out);
  if (want("tangent")) tangent_suite(out);
  if (want("quadrature")) quadrature_suite(out);
  if (want("ul-vs-tl")) ul_tl_suite(out);
  if (!known) throw ConfigError("unknown verification suite '" + suite + "'");
  return out;
}

int cmd_verify(const std::string& suite, const std::filesystem::path& out_dir, std::ostream& out,
               std::ostream& err) {
  std::vector<CheckResult> results;
  try {
    results = run_verification(suite);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return exit_code::config_error;
  } catch (const std::exception& e) {
    err << "verification aborted: " << e.what() << '\n';
    return exit_code::verification_failure;
  }

  nlohmann::json report;
  report["suite"] = suite;
  report["checks"] = nlohmann::json::array();
  bool ok = true;
  out << std::setprecision(3) << std::scientific;
  for (const auto& r : results) {
    ok = ok && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << '[' << r.suite << "] " << r.name << ": " << r.value
        << (r.lower_bound ? " (min " : " (max ") << r.limit << ")\n";
    report["checks"].push_back({{"suite", r.suite},
                                {"name", r.name},
                                {"value", r.value},
                                {"limit", r.limit},
                                {"limit_kind", r.lower_bound ? "min" : "max"},
                                {"passed", r.passed},
                                {"detail", r.detail}});
  }
  report["passed"] = ok;
  std::filesystem::create_directories(out_dir);
  std::ofstream js(out_dir / "verify.json");
  js << report.dump(2) << '\n';
  return ok ? exit_code::ok : exit_code::verification_failure;
}

}  // namespace axifep::app
