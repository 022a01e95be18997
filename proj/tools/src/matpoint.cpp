#include <fstream>
#include <iomanip>
#include <sstream>

#include "axifep/app/commands.hpp"
#include "axifep/app/config.hpp"
#include "axifep/app/run.hpp"

namespace axifep::app {

StrainPath parse_strain_path(std::istream& in) {
  // Parameter lines reuse the config grammar; rows are everything numeric.
  std::map<std::string, double> par = {{"E", 1.375e9}, {"nu", 0.375}, {"H", 765e6},
                                       {"kappa", 0.0}, {"alpha", 0.0}, {"m", 1.0},
                                       {"p_c0", -2.4e8}};
  StrainPath path;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    std::string s = hash == std::string::npos ? raw : raw.substr(0, hash);
    if (s.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = s.find('=');
    if (eq != std::string::npos) {
      if (!path.rows.empty()) throw ConfigError("parameters must precede strain rows", line);
      std::istringstream ks(s.substr(0, eq));
      std::istringstream vs(s.substr(eq + 1));
      std::string key;
      double v = 0.0;
      ks >> key;
      if (!par.count(key)) throw ConfigError("unknown parameter '" + key + "'", line);
      if (!(vs >> v)) throw ConfigError("parameter '" + key + "' expects a number", line);
      std::string rest;
      if (vs >> rest) throw ConfigError("trailing text after '" + key + "'", line);
      par[key] = v;
      continue;
    }
    std::istringstream rs(s);
    std::vector<double> c;
    std::string tok;
    while (rs >> tok) {
      try {
        std::size_t used = 0;
        c.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ConfigError("malformed strain row: '" + tok + "' is not a number", line);
      }
    }
    Mat3 e = Mat3::Zero();
    if (c.size() == 4) {
      e(0, 0) = c[0];
      e(1, 1) = c[1];
      e(2, 2) = c[2];
      e(0, 2) = e(2, 0) = c[3];
    } else if (c.size() == 6) {
      e(0, 0) = c[0];
      e(1, 1) = c[1];
      e(2, 2) = c[2];
      e(0, 1) = e(1, 0) = c[3];
      e(1, 2) = e(2, 1) = c[4];
      e(0, 2) = e(2, 0) = c[5];
    } else {
      throw ConfigError("malformed strain row: expected 4 or 6 components, got " +
                            std::to_string(c.size()),
                        line);
    }
    path.rows.push_back({e, line});
  }
  try {
    path.params = mcc::MatParams::make(par["E"], par["nu"], par["H"], par["kappa"],
                                       par["alpha"], par["m"], par["p_c0"]);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("material: ") + e.what());
  }
  return path;
}

std::vector<MatpointRow> run_strain_path(const StrainPath& path) {
  std::vector<MatpointRow> out;
  Mat3 eps_prev = Mat3::Zero();
  mcc::MatState state;
  for (const StrainRow& row : path.rows) {
    const Mat3 trial = state.eps_e + (row.eps - eps_prev);
    const mcc::ReturnResult rr = mcc::return_map_strain(trial, state.z, path.params);
    state = rr.state;
    eps_prev = row.eps;
    const mcc::Invariants inv = mcc::invariants(state.zeta);
    out.push_back({inv.p, inv.q, inv.rho, state.z, state.dgamma, rr.phi, state.yielded,
                   state.zeta, state.eps_e});
  }
  return out;
}

int cmd_matpoint(const std::filesystem::path& file, std::ostream& out, std::ostream& err) {
  std::ifstream in(file);
  if (!in) {
    err << "cannot open '" << file.string() << "'\n";
    return exit_code::config_error;
  }
  StrainPath path;
  try {
    path = parse_strain_path(in);
  } catch (const ConfigError& e) {
    err << file.string() << ": " << e.what() << '\n';
    return exit_code::config_error;
  }
  std::vector<MatpointRow> rows;
  try {
    rows = run_strain_path(path);
  } catch (const ConstitutiveError& e) {
    err << "return map failed: " << e.what() << '\n';
    return exit_code::solver_failure;
  }
  out << std::setprecision(12);
  out << "row,p_zeta,q_zeta,rho_zeta,z,dgamma,phi,yielded\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << i + 1 << ',' << r.p << ',' << r.q << ',' << r.rho << ',' << r.z << ',' << r.dgamma
        << ',' << r.phi << ',' << (r.yielded ? 1 : 0) << '\n';
  }
  return exit_code::ok;
}

}  // namespace axifep::app
