#pragma once

// Run configuration: flat `key = value` lines grouped under `[section]`
// headers. `#` and `;` start comments. Every error carries the offending line.

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "axifep/assembly.hpp"
#include "axifep/material_mcc.hpp"
#include "axifep/scenario.hpp"

namespace axifep::app {

struct ConfigEntry {
  std::string value;
  int line = 0;
};

/// section -> key -> entry. Keys outside any section land in section "".
using ConfigDoc = std::map<std::string, std::map<std::string, ConfigEntry>>;

/// Throws ConfigError on malformed lines and duplicate keys.
ConfigDoc parse_config(std::istream& in);

enum class PcSign {
  Compressive,  // p_c0 = -|value|
  AsGiven,
};

struct RunConfig {
  fem::CylinderSetup geometry;
  int steps = 30;
  fem::Formulation formulation = fem::Formulation::UL;
  double tol = 1e-8;
  int max_bisections = 4;
  bool linear_predictor = true;
  int threads = 0;  // 0: AXIFEP_THREADS or hardware concurrency

  double E = 1.375e9;
  double nu = 0.375;
  double H = 765e6;
  double kappa = 0.0;
  double alpha = 0.0;
  double m = 1.0;
  double p_c0 = 2.4e8;
  PcSign pc_sign = PcSign::Compressive;

  std::filesystem::path output_dir = ".";
  bool write_vtk = true;
  std::vector<fem::TrackedPoint> tracked;  // benchmark points when empty in file

  mcc::MatParams material() const;
  /// Throws ConfigError (line 0) when an invariant is violated.
  void validate() const;
};

/// Relative output paths are resolved against base_dir.
RunConfig run_config_from_doc(const ConfigDoc& doc, const std::filesystem::path& base_dir = ".");
RunConfig load_run_config(const std::filesystem::path& path);

/// The thick-cylinder benchmark with the default points A-D.
RunConfig benchmark_config();

}  // namespace axifep::app
