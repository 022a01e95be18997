#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "axifep/app/config.hpp"
#include "axifep/solver.hpp"

namespace axifep::app {

/// One tracked Gauss point after one converged step.
struct TrackRow {
  int step = 0;
  std::string label;
  int gp = -1;
  Vec2 gp_pos;        // reference (R, Z) of the Gauss point
  double u_wall = 0;  // prescribed inner-wall radial amplitude at this step
  double u_r = 0;     // radial displacement interpolated at the Gauss point
  double p = 0;       // Cauchy pressure tr(sigma)/3, tension positive
  double rho = 0;     // |dev sigma|
  double J = 1, J_e = 1, J_p = 1;
  bool yielded = false;
};

struct IterationStats {
  int min = 0;
  int max = 0;
  double avg = 0.0;
  int total = 0;
};

struct RunResult {
  bool completed = false;
  std::string failure;
  std::vector<fem::StepRecord> steps;
  std::vector<Eigen::VectorXd> displacements;  // converged u after each step
  std::vector<TrackRow> track;
  std::vector<fem::TrackedPoint> points;  // with resolved Gauss point indices
  IterationStats stats;
};

/// Iteration counts per step (residual evaluations of the accepted solves).
IterationStats iteration_stats(const std::vector<fem::StepRecord>& steps);

/// Runs the ramp. Output files are written only when write_files is set.
/// Solver failures are reported in the result, never thrown.
RunResult execute_run(const RunConfig& cfg, bool write_files, std::ostream* log = nullptr);

/// Builds the tracked-point rows for the model's committed state.
std::vector<TrackRow> track_rows(const fem::Model& model,
                                 const std::vector<fem::TrackedPoint>& points, int step,
                                 double u_wall);

/// Legacy ASCII unstructured grid of the deformed mesh with cell-averaged
/// -p and J.
void write_vtk(const std::filesystem::path& path, const fem::Model& model, int step);

/// `axifep run`: returns the process exit status.
int cmd_run(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 2;
inline constexpr int solver_failure = 3;
inline constexpr int verification_failure = 4;
}  // namespace exit_code

}  // namespace axifep::app
