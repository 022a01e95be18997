#include <iostream>

#include "CLI11.hpp"
#include "axifep/app/commands.hpp"
#include "axifep/app/run.hpp"

int main(int argc, char** argv) {
  namespace app = axifep::app;
  CLI::App cli{"axifep: axisymmetric finite-strain elastoplastic finite elements"};
  cli.require_subcommand(1);

  std::string config;
  auto* run = cli.add_subcommand("run", "Run a ramped cylinder simulation from a config file");
  run->add_option("config", config, "Configuration file")->required()->check(CLI::ExistingFile);

  double alpha = 1.1;
  auto* cavity = cli.add_subcommand("cavity", "Cavity-expansion kinematics report");
  cavity->add_option("--alpha", alpha, "Radial stretch r/R")->required();

  std::string path;
  auto* matpoint = cli.add_subcommand("matpoint", "Drive one material point along a strain path");
  matpoint->add_option("path", path, "Strain-path file")->required()->check(CLI::ExistingFile);

  std::string suite = "all";
  std::string out_dir = ".";
  auto* verify = cli.add_subcommand("verify", "Run verification oracles");
  verify->add_option("suite", suite, "tangent | ul-vs-tl | quadrature | constitutive | cavity | all")
      ->check(CLI::IsMember({"tangent", "ul-vs-tl", "quadrature", "constitutive", "cavity", "all"}));
  verify->add_option("--out", out_dir, "Directory for verify.json");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : app::exit_code::config_error;
  }

  try {
    if (*run) return app::cmd_run(config, std::cout, std::cerr);
    if (*cavity) return app::cmd_cavity(alpha, std::cout);
    if (*matpoint) return app::cmd_matpoint(path, std::cout, std::cerr);
    if (*verify) return app::cmd_verify(suite, out_dir, std::cout, std::cerr);
  } catch (const axifep::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return app::exit_code::config_error;
  } catch (const axifep::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return app::exit_code::solver_failure;
  }
  return app::exit_code::ok;
}
