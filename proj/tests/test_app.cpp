#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "axifep/app/checks.hpp"
#include "axifep/app/commands.hpp"
#include "axifep/app/config.hpp"
#include "axifep/app/run.hpp"
#include "axifep/oracles.hpp"

using namespace axifep;
using namespace axifep::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("axifep_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    run_config_from_doc(parse_config(in));
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

// Tiny-load configuration: one step, 1e-9 m at the inner wall.
std::string tiny_config(const fs::path& out) {
  return "[loading]\nu_bar = 1e-9\nsteps = 1\n[output]\ndir = " + out.string() +
         "\nvtk = true\n";
}

}  // namespace

TEST(Config, ParsesSectionsCommentsAndDefaults) {
  std::istringstream in(
      "# comment\n[geometry]\nr_int = 2 ; trailing comment\nr_ext = 3\nheight = 1\n"
      "[mesh]\nn_r = 2\nn_z = 3\n[solver]\nformulation = TL\n[material]\np_c0 = 1e8\n"
      "[track]\nP = 2.5, 0.5\n");
  const RunConfig cfg = run_config_from_doc(parse_config(in));
  EXPECT_EQ(cfg.geometry.r_int, 2.0);
  EXPECT_EQ(cfg.geometry.n_z, 3);
  EXPECT_EQ(cfg.formulation, fem::Formulation::TL);
  EXPECT_EQ(cfg.steps, 30);
  EXPECT_EQ(cfg.material().p_c0, -1e8);
  ASSERT_EQ(cfg.tracked.size(), 1u);
  EXPECT_EQ(cfg.tracked[0].label, "P");
  EXPECT_EQ(cfg.tracked[0].pos, Vec2(2.5, 0.5));
}

TEST(Config, AsGivenSignKeepsValue) {
  std::istringstream in("[material]\np_c0 = -3e8\np_c0_sign = as_given\n");
  EXPECT_EQ(run_config_from_doc(parse_config(in)).material().p_c0, -3e8);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("[geometry]\nr_int = 1\nr_int = 2\n"), 3);
  EXPECT_EQ(error_line("[geometry]\n\nr_int 5\n"), 3);
  EXPECT_EQ(error_line("[geometry\n"), 1);
  EXPECT_EQ(error_line("[mesh]\nn_r = two\n"), 2);
  EXPECT_EQ(error_line("[mesh]\nn_r = 2.5\n"), 2);
  EXPECT_EQ(error_line("[solver]\n# x\nwarp = 9\n"), 3);
  EXPECT_EQ(error_line("[nonsense]\nkey = 1\n"), 2);
  EXPECT_EQ(error_line("[solver]\nformulation = ALE\n"), 2);
  EXPECT_EQ(error_line("r_int = 1\n"), 1);
  EXPECT_EQ(error_line("[track]\nA = 1\n"), 2);
}

TEST(Config, InvalidValuesAreRejected) {
  for (const char* text : {"[geometry]\nr_int = 5\nr_ext = 4\n", "[loading]\nsteps = 0\n",
                           "[material]\nnu = 0.5\n", "[solver]\ntol = 0\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(run_config_from_doc(parse_config(in)), ConfigError) << text;
  }
}

TEST(Config, ShippedBenchmarkConfigMatchesDefaults) {
  const RunConfig a = load_run_config(fs::path(AXIFEP_SOURCE_DIR) / "configs/thick_cylinder.cfg");
  const RunConfig b = benchmark_config();
  EXPECT_EQ(a.steps, b.steps);
  EXPECT_EQ(a.geometry.u_bar, b.geometry.u_bar);
  EXPECT_EQ(a.material().p_c0, b.material().p_c0);
  EXPECT_EQ(a.material().K, b.material().K);
  ASSERT_EQ(a.tracked.size(), 4u);
  EXPECT_EQ(a.tracked[0].pos, Vec2(10, 10));
  EXPECT_EQ(a.tracked[3].pos, Vec2(15, 0));
}

TEST(Run, TinyLoadConvergesQuicklyAndWritesOutputs) {
  const fs::path dir = scratch("tiny");
  write_file(dir / "run.cfg", tiny_config(dir / "out"));
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(dir / "run.cfg", out, err), exit_code::ok) << err.str();
  const fs::path o = dir / "out";
  for (const char* f : {"convergence.csv", "track.csv", "summary.csv", "field_0001.vtk"})
    EXPECT_TRUE(fs::exists(o / f)) << f;

  const std::string summary = slurp(o / "summary.csv");
  EXPECT_EQ(summary.substr(0, summary.find('\n')),
            "formulation,steps_completed,min_iterations,max_iterations,avg_iterations,"
            "total_iterations,completed");
  EXPECT_NE(summary.find("\nUL,1,"), std::string::npos);

  // The stress-free state lies on the yield surface, so even this load is
  // plastic and the error history is that of any small load: it needs no
  // more iterations than a load a thousand times larger.
  RunConfig cfg = benchmark_config();
  cfg.geometry.u_bar = 1e-9;
  cfg.steps = 1;
  const RunResult res = execute_run(cfg, false);
  ASSERT_TRUE(res.completed);
  ASSERT_EQ(res.steps.size(), 1u);
  EXPECT_EQ(res.steps[0].bisections, 0);
  EXPECT_LT(res.displacements.back().cwiseAbs().maxCoeff(), 2e-9);
  for (const TrackRow& r : res.track) {
    EXPECT_LT(std::abs(r.p), 10.0);
    EXPECT_NEAR(r.J, 1.0, 1e-8);
  }
  cfg.geometry.u_bar = 1e-6;
  EXPECT_LE(res.stats.max, execute_run(cfg, false).stats.max);
}

TEST(Run, TrackCsvLayout) {
  const fs::path dir = scratch("track");
  RunConfig cfg = benchmark_config();
  cfg.steps = 2;
  cfg.geometry.u_bar = 2.0 / 30.0;
  cfg.output_dir = dir;
  cfg.write_vtk = false;
  const RunResult res = execute_run(cfg, true);
  ASSERT_TRUE(res.completed);
  std::istringstream in(slurp(dir / "track.csv"));
  std::string line;
  int meta = 0, rows = 0;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.rfind("# point ", 0) == 0) ++meta;
    else if (line == "step,label,gp,R,Z,u_wall,u_r,p,rho,J,J_e,J_p,yielded") header = true;
    else ++rows;
  }
  EXPECT_EQ(meta, 4);
  EXPECT_TRUE(header);
  EXPECT_EQ(rows, 8);
  EXPECT_FALSE(fs::exists(dir / "field_0001.vtk"));
  for (const TrackRow& r : res.track) EXPECT_NEAR(r.J_e * r.J_p, r.J, 1e-10);
}

TEST(Run, VtkHasQuadraticQuadCells) {
  const fs::path dir = scratch("vtk");
  write_file(dir / "run.cfg", tiny_config(dir / "out"));
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(dir / "run.cfg", out, err), exit_code::ok);
  const std::string vtk = slurp(dir / "out" / "field_0001.vtk");
  EXPECT_EQ(vtk.rfind("# vtk DataFile Version", 0), 0u);
  EXPECT_NE(vtk.find("CELLS 50 450"), std::string::npos);
  EXPECT_NE(vtk.find("CELL_TYPES 50"), std::string::npos);
  EXPECT_NE(vtk.find("neg_pressure"), std::string::npos);
  EXPECT_NE(vtk.find("displacement"), std::string::npos);
}

TEST(Run, OutputsAreDeterministic) {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  RunConfig cfg = benchmark_config();
  cfg.steps = 3;
  cfg.geometry.u_bar = 0.1;
  cfg.output_dir = a;
  execute_run(cfg, true);
  cfg.output_dir = b;
  cfg.threads = 1;
  execute_run(cfg, true);
  for (const char* f : {"convergence.csv", "track.csv", "summary.csv", "field_0003.vtk"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Run, ExitCodes) {
  const fs::path dir = scratch("exit");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(dir / "missing.cfg", out, err), exit_code::config_error);
  write_file(dir / "bad.cfg", "[mesh]\nn_r = -1\n");
  EXPECT_EQ(cmd_run(dir / "bad.cfg", out, err), exit_code::config_error);
  // A single huge step without bisection cannot converge.
  write_file(dir / "fail.cfg", "[loading]\nu_bar = 4\nsteps = 1\n[solver]\nmax_bisections = 0\n"
                               "[output]\nvtk = false\ndir = " + (dir / "out").string() + "\n");
  EXPECT_EQ(cmd_run(dir / "fail.cfg", out, err), exit_code::solver_failure);
  EXPECT_NE(err.str().find("solver failure"), std::string::npos);
}

TEST(Matpoint, ZeroRowGivesZeroStress) {
  std::istringstream in("E = 1e9\nnu = 0.25\n0 0 0 0\n");
  const StrainPath path = parse_strain_path(in);
  EXPECT_EQ(path.params.E, 1e9);
  const auto rows = run_strain_path(path);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].zeta.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_FALSE(rows[0].yielded);
}

TEST(Matpoint, HydrostaticCrossingYieldsWithinOneRow) {
  // Compaction past p_c: the second row lies beyond the consolidation
  // pressure and must return onto the surface with positive multiplier.
  std::istringstream in("-0.01 -0.01 -0.01 0\n-0.06 -0.06 -0.06 0\n");
  const auto rows = run_strain_path(parse_strain_path(in));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_FALSE(rows[0].yielded);
  EXPECT_TRUE(rows[1].yielded);
  EXPECT_GT(rows[1].dgamma, 0.0);
  EXPECT_LT(rows[1].z, 0.0);
  EXPECT_LE(std::abs(rows[1].phi), 1e-10 * 2.4e8 * 2.4e8);
}

TEST(Matpoint, SmallStepsMatchSubstepping) {
  // A shear path in small rows: the return map of each row against the
  // sub-stepped integral of the same piecewise linear path.
  std::ostringstream text;
  std::vector<Mat3> path;
  for (int k = 1; k <= 200; ++k) {
    const double t = k / 200.0;
    Mat3 e = Mat3::Zero();
    e(0, 0) = -0.02 * t;
    e(1, 1) = -0.01 * t;
    e(0, 2) = e(2, 0) = 0.12 * t;
    text << e(0, 0) << ' ' << e(1, 1) << ' ' << e(2, 2) << ' ' << e(0, 2) << '\n';
    path.push_back(e);
  }
  std::istringstream in(text.str());
  const auto rows = run_strain_path(parse_strain_path(in));
  const oracles::SubstepResult ref =
      oracles::substep_integrate(path, 0.0, fem::benchmark_params(), 100);
  ASSERT_TRUE(rows.back().yielded);
  EXPECT_LT((rows.back().zeta - ref.zeta).norm() / ref.zeta.norm(), 2e-3);
}

TEST(Matpoint, MalformedRowReportsLine) {
  std::istringstream bad("E = 1e9\n0 0 0\n");
  try {
    parse_strain_path(bad);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  std::istringstream late("0 0 0 0\nE = 1e9\n");
  EXPECT_THROW(parse_strain_path(late), ConfigError);
}

TEST(Matpoint, CsvOutput) {
  const fs::path dir = scratch("matpoint");
  write_file(dir / "path.txt", "0 0 0 0\n-1e-3 -1e-3 -1e-3 0\n");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_matpoint(dir / "path.txt", out, err), exit_code::ok);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "row,p_zeta,q_zeta,rho_zeta,z,dgamma,phi,yielded");
  EXPECT_EQ(cmd_matpoint(dir / "none.txt", out, err), exit_code::config_error);
}

TEST(Cavity, CommandAgrees) {
  std::ostringstream out;
  EXPECT_EQ(cmd_cavity(1.1, out), exit_code::ok);
  EXPECT_NE(out.str().find("F_cyl = diag(alpha, 1, 1): yes"), std::string::npos);
}

TEST(Verify, CommandWritesJson) {
  const fs::path dir = scratch("verify");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify("cavity", dir, out, err), exit_code::ok);
  const std::string json = slurp(dir / "verify.json");
  EXPECT_NE(json.find("\"suite\""), std::string::npos);
  EXPECT_EQ(cmd_verify("bogus", dir, out, err), exit_code::config_error);
}
