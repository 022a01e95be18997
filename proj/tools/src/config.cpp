#include "axifep/app/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace axifep::app {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const ConfigEntry& e, const std::string& key) {
  const std::string v = trim(e.value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError("'" + key + "' expects a number, got '" + e.value + "'", e.line);
  return out;
}

int to_int(const ConfigEntry& e, const std::string& key) {
  const std::string v = trim(e.value);
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("'" + key + "' expects an integer, got '" + e.value + "'", e.line);
  return out;
}

bool to_bool(const ConfigEntry& e, const std::string& key) {
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + e.value + "'", e.line);
}

Vec2 to_point(const ConfigEntry& e, const std::string& key) {
  const auto comma = e.value.find(',');
  if (comma == std::string::npos)
    throw ConfigError("tracked point '" + key + "' expects 'R, Z'", e.line);
  ConfigEntry r{e.value.substr(0, comma), e.line};
  ConfigEntry z{e.value.substr(comma + 1), e.line};
  return Vec2(to_double(r, key), to_double(z, key));
}

}  // namespace

ConfigDoc parse_config(std::istream& in) {
  ConfigDoc doc;
  std::string section;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) throw ConfigError("malformed section header", line);
      section = trim(s.substr(1, s.size() - 2));
      doc[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line);
    auto& sec = doc[section];
    if (sec.count(key)) throw ConfigError("duplicate key '" + key + "'", line);
    sec[key] = {value, line};
  }
  return doc;
}

mcc::MatParams RunConfig::material() const {
  const double pc = pc_sign == PcSign::Compressive ? -std::abs(p_c0) : p_c0;
  return mcc::MatParams::make(E, nu, H, kappa, alpha, m, pc);
}

void RunConfig::validate() const {
  const auto& g = geometry;
  if (!(g.r_int > 0.0) || !(g.r_ext > g.r_int) || !(g.height > 0.0))
    throw ConfigError("geometry needs 0 < r_int < r_ext and height > 0");
  if (g.n_r < 1 || g.n_z < 1) throw ConfigError("mesh needs n_r >= 1 and n_z >= 1");
  if (steps < 1) throw ConfigError("steps must be at least 1");
  if (!(tol > 0.0) || tol > 1e-2) throw ConfigError("tol must lie in (0, 1e-2]");
  if (max_bisections < 0) throw ConfigError("max_bisections must be non-negative");
  if (threads < 0) throw ConfigError("threads must be non-negative");
  try {
    (void)material();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("material: ") + e.what());
  }
}

RunConfig run_config_from_doc(const ConfigDoc& doc, const std::filesystem::path& base_dir) {
  RunConfig c = benchmark_config();
  c.tracked.clear();
  static const std::set<std::string> known = {"geometry", "mesh",   "loading", "solver",
                                              "material", "output", "track"};
  for (const auto& [section, keys] : doc) {
    if (!known.count(section)) {
      const int line = keys.empty() ? 0 : keys.begin()->second.line;
      throw ConfigError(section.empty() ? "key outside any [section]"
                                        : "unknown section [" + section + "]",
                        line);
    }
    for (const auto& [key, e] : keys) {
      auto unknown = [&] {
        throw ConfigError("unknown key '" + key + "' in section [" + section + "]", e.line);
      };
      if (section == "geometry") {
        if (key == "r_int") c.geometry.r_int = to_double(e, key);
        else if (key == "r_ext") c.geometry.r_ext = to_double(e, key);
        else if (key == "height") c.geometry.height = to_double(e, key);
        else unknown();
      } else if (section == "mesh") {
        if (key == "n_r") c.geometry.n_r = to_int(e, key);
        else if (key == "n_z") c.geometry.n_z = to_int(e, key);
        else unknown();
      } else if (section == "loading") {
        if (key == "u_bar") c.geometry.u_bar = to_double(e, key);
        else if (key == "steps") c.steps = to_int(e, key);
        else unknown();
      } else if (section == "solver") {
        if (key == "formulation") {
          if (e.value == "UL" || e.value == "ul") c.formulation = fem::Formulation::UL;
          else if (e.value == "TL" || e.value == "tl") c.formulation = fem::Formulation::TL;
          else throw ConfigError("formulation must be UL or TL", e.line);
        } else if (key == "tol") c.tol = to_double(e, key);
        else if (key == "max_bisections") c.max_bisections = to_int(e, key);
        else if (key == "predictor") c.linear_predictor = to_bool(e, key);
        else if (key == "threads") c.threads = to_int(e, key);
        else unknown();
      } else if (section == "material") {
        if (key == "E") c.E = to_double(e, key);
        else if (key == "nu") c.nu = to_double(e, key);
        else if (key == "H") c.H = to_double(e, key);
        else if (key == "kappa") c.kappa = to_double(e, key);
        else if (key == "alpha") c.alpha = to_double(e, key);
        else if (key == "m") c.m = to_double(e, key);
        else if (key == "p_c0") c.p_c0 = to_double(e, key);
        else if (key == "p_c0_sign") {
          if (e.value == "compressive") c.pc_sign = PcSign::Compressive;
          else if (e.value == "as_given") c.pc_sign = PcSign::AsGiven;
          else throw ConfigError("p_c0_sign must be compressive or as_given", e.line);
        } else unknown();
      } else if (section == "output") {
        if (key == "dir") c.output_dir = e.value;
        else if (key == "vtk") c.write_vtk = to_bool(e, key);
        else unknown();
      } else {
        c.tracked.push_back({key, to_point(e, key), -1});
      }
    }
  }
  if (c.tracked.empty()) c.tracked = fem::benchmark_points(c.geometry);
  if (c.output_dir.is_relative()) c.output_dir = base_dir / c.output_dir;
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return run_config_from_doc(parse_config(in), path.parent_path());
}

RunConfig benchmark_config() {
  RunConfig c;
  c.tracked = fem::benchmark_points(c.geometry);
  return c;
}

}  // namespace axifep::app
