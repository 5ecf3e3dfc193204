// curvebody: criterion checks and simulations for rotopulsating polygons on the
// unit sphere and hyperboloid.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "curvebody/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Rotopulsating polygon orbits of the curved n-body problem"};
  std::string command;
  std::string config;
  std::string out_dir;
  curvebody::cli::CommandOptions options;
  app.add_option("command", command,
                 "check | simulate-reduced | simulate-full | cross-validate | scan")
      ->required()
      ->check(CLI::IsMember(
          {"check", "simulate-reduced", "simulate-full", "cross-validate", "scan"}));
  app.add_option("config", config, "JSON config file")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--force", options.force, "run inadmissible configurations anyway");
  app.add_flag("--strict-b", options.strict_b, "check every b_i at each reduced step");
  app.add_flag("--project", options.project, "rescale full-run positions onto the manifold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return curvebody::cli::kUsage;
  }
  options.out_dir = out_dir;
  return curvebody::cli::run_command(command, config, options, std::cout, std::cerr);
}
