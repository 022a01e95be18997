#include "axifep/app/run.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>

namespace axifep::app {

namespace {

std::string field_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "field_%04d.vtk", step);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write '" + p.string() + "'");
  out << std::setprecision(17);
  return out;
}

}  // namespace

IterationStats iteration_stats(const std::vector<fem::StepRecord>& steps) {
  IterationStats s;
  if (steps.empty()) return s;
  s.min = steps.front().iterations;
  s.max = steps.front().iterations;
  for (const auto& r : steps) {
    s.min = std::min(s.min, r.iterations);
    s.max = std::max(s.max, r.iterations);
    s.total += r.iterations;
  }
  s.avg = static_cast<double>(s.total) / static_cast<double>(steps.size());
  return s;
}

std::vector<TrackRow> track_rows(const fem::Model& model,
                                 const std::vector<fem::TrackedPoint>& points, int step,
                                 double u_wall) {
  std::vector<TrackRow> rows;
  for (const auto& pt : points) {
    const fem::GpRecord& g = model.gps[pt.gp];
    const fem::GpState& s = g.committed;
    const mcc::Invariants inv = mcc::invariants(s.sigma);
    TrackRow r;
    r.step = step;
    r.label = pt.label;
    r.gp = pt.gp;
    r.gp_pos = g.ref_pos;
    r.u_wall = u_wall;
    r.u_r = s.r - g.ref_pos.x();
    r.p = inv.p;
    r.rho = inv.rho;
    r.J = s.J;
    r.J_e = s.mat.J_e;
    r.J_p = s.J_p;
    r.yielded = s.mat.yielded;
    rows.push_back(r);
  }
  return rows;
}

void write_vtk(const std::filesystem::path& path, const fem::Model& model, int step) {
  const fem::MeshAxi& mesh = model.mesh;
  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\n"
      << "axifep step " << step << "\n"
      << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_nodes() << " double\n";
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    const Vec2& X = mesh.nodes[n];
    out << X.x() + model.u(2 * n) << ' ' << X.y() + model.u(2 * n + 1) << " 0\n";
  }
  const int ne = mesh.num_elems();
  out << "CELLS " << ne << ' ' << 9 * ne << '\n';
  for (const auto& c : mesh.elems) {
    out << 8;
    for (int a : c) out << ' ' << a;
    out << '\n';
  }
  out << "CELL_TYPES " << ne << '\n';
  for (int e = 0; e < ne; ++e) out << "23\n";  // VTK_QUADRATIC_QUAD

  std::vector<double> neg_p(ne, 0.0);
  std::vector<double> jac(ne, 0.0);
  std::vector<int> count(ne, 0);
  for (const auto& g : model.gps) {
    neg_p[g.elem] -= g.committed.sigma.trace() / 3.0;
    jac[g.elem] += g.committed.J;
    ++count[g.elem];
  }
  out << "CELL_DATA " << ne << '\n';
  out << "SCALARS neg_pressure double 1\nLOOKUP_TABLE default\n";
  for (int e = 0; e < ne; ++e) out << neg_p[e] / count[e] << '\n';
  out << "SCALARS J double 1\nLOOKUP_TABLE default\n";
  for (int e = 0; e < ne; ++e) out << jac[e] / count[e] << '\n';
  out << "POINT_DATA " << mesh.num_nodes() << '\n';
  out << "VECTORS displacement double\n";
  for (int n = 0; n < mesh.num_nodes(); ++n)
    out << model.u(2 * n) << ' ' << model.u(2 * n + 1) << " 0\n";
}

RunResult execute_run(const RunConfig& cfg, bool write_files, std::ostream* log) {
  RunResult res;
  const fem::CylinderSetup& geo = cfg.geometry;
  fem::Model model(fem::gen_cylinder_mesh(geo.r_int, geo.r_ext, geo.height, geo.n_r, geo.n_z),
                   cfg.material(), cfg.formulation);
  res.points = cfg.tracked;
  for (auto& p : res.points) p.gp = fem::nearest_gp(model.gps, p.pos);

  fem::RampOptions ro;
  ro.steps = cfg.steps;
  ro.max_bisections = cfg.max_bisections;
  ro.nr.tol = cfg.tol;
  ro.nr.threads = cfg.threads;
  ro.nr.linear_predictor = cfg.linear_predictor;

  std::ofstream conv;
  std::ofstream track;
  if (write_files) {
    std::filesystem::create_directories(cfg.output_dir);
    conv = open_out(cfg.output_dir / "convergence.csv");
    conv << "step,solve,iteration,err\n";
    track = open_out(cfg.output_dir / "track.csv");
    for (const auto& p : res.points) {
      const Vec2& x = model.gps[p.gp].ref_pos;
      track << "# point " << p.label << " requested R=" << p.pos.x() << " Z=" << p.pos.y()
            << " gauss_point=" << p.gp << " R=" << x.x() << " Z=" << x.y() << '\n';
    }
    track << "step,label,gp,R,Z,u_wall,u_r,p,rho,J,J_e,J_p,yielded\n";
  }

  auto on_step = [&](const fem::Model& m, const fem::StepRecord& rec) {
    const double u_wall = geo.u_bar * rec.load;
    const auto rows = track_rows(m, res.points, rec.step, u_wall);
    res.track.insert(res.track.end(), rows.begin(), rows.end());
    res.displacements.push_back(m.u);
    res.steps.push_back(rec);
    if (log)
      *log << "step " << rec.step << "/" << cfg.steps << "  iterations " << rec.iterations
           << (rec.bisections ? "  bisections " + std::to_string(rec.bisections) : "") << '\n';
    if (!write_files) return;
    for (std::size_t s = 0; s < rec.reports.size(); ++s)
      for (std::size_t k = 0; k < rec.reports[s].errors.size(); ++k)
        conv << rec.step << ',' << s + 1 << ',' << k + 1 << ',' << rec.reports[s].errors[k]
             << '\n';
    for (const auto& r : rows)
      track << r.step << ',' << r.label << ',' << r.gp << ',' << r.gp_pos.x() << ','
            << r.gp_pos.y() << ',' << r.u_wall << ',' << r.u_r << ',' << r.p << ',' << r.rho
            << ',' << r.J << ',' << r.J_e << ',' << r.J_p << ',' << (r.yielded ? 1 : 0) << '\n';
    conv.flush();
    track.flush();
    if (cfg.write_vtk) write_vtk(cfg.output_dir / field_name(rec.step), m, rec.step);
  };

  try {
    fem::run_ramp(model, [&](double t) { return fem::cylinder_ramp_bcs(model.mesh, geo, t); },
                  ro, on_step);
    res.completed = true;
  } catch (const SolverError& e) {
    res.failure = e.what();
  }
  res.stats = iteration_stats(res.steps);

  if (write_files) {
    std::ofstream sum = open_out(cfg.output_dir / "summary.csv");
    sum << "formulation,steps_completed,min_iterations,max_iterations,avg_iterations,"
           "total_iterations,completed\n";
    sum << fem::to_string(cfg.formulation) << ',' << res.steps.size() << ',' << res.stats.min
        << ',' << res.stats.max << ',' << std::setprecision(6) << res.stats.avg << ','
        << res.stats.total << ',' << (res.completed ? 1 : 0) << '\n';
  }
  return res;
}

int cmd_run(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_run_config(config_path);
  } catch (const ConfigError& e) {
    err << config_path.string() << ": " << e.what() << '\n';
    return exit_code::config_error;
  }
  RunResult res;
  try {
    res = execute_run(cfg, true, &out);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return exit_code::config_error;
  }
  if (!res.completed) {
    err << "solver failure: " << res.failure << '\n';
    return exit_code::solver_failure;
  }
  out << "iterations per step: min " << res.stats.min << ", max " << res.stats.max << ", avg "
      << res.stats.avg << '\n'
      << "outputs written to " << cfg.output_dir.string() << '\n';
  return exit_code::ok;
}

}  // namespace axifep::app
