#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "corrfix/run.hpp"

namespace {

int run(const std::string& command, const std::string& scenario,
        const corrfix::Overrides& ov, const std::string& out_path,
        const std::string& format) {
  corrfix::RunReport report;
  try {
    report = corrfix::run_scenario(scenario, command, ov);
  } catch (const corrfix::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (format == "structured") {
    std::cout << corrfix::emit_structured(report);
  } else {
    std::cout << corrfix::emit_human(report);
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write report to '" << out_path << "'\n";
      return 2;
    }
    out << corrfix::emit_structured(report);
  }
  return report.exit_code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"corrfix: grid-certified selections, fixed points and "
               "quasi-game equilibria for polytope-valued correspondences"};
  app.require_subcommand(1);

  std::string scenario, out_path;
  std::string format = "human";
  corrfix::Overrides ov;
  int mesh = 0;
  double tol = 0, eps = 0, eta = 0;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("scenario", scenario, "scenario file (json)")->required();
    cmd->add_option("--mesh", mesh, "lattice order override");
    cmd->add_option("--tol", tol, "membership tolerance override");
    cmd->add_option("--eps", eps, "fixed-point residual override");
    cmd->add_option("--eta", eta, "closure tolerance override");
    cmd->add_option("--seed", seed, "rng seed override");
    cmd->add_option("--out", out_path, "write the structured report here");
    cmd->add_option("--format", format, "stdout format: human|structured")
        ->check(CLI::IsMember({"human", "structured"}));
  };

  for (const char* name : {"check", "select", "fixpoint", "hull", "equilibrium"}) {
    add_common(app.add_subcommand(name));
  }

  CLI11_PARSE(app, argc, argv);

  auto* cmd = app.get_subcommands().front();
  if (cmd->count("--mesh")) ov.mesh = mesh;
  if (cmd->count("--tol")) ov.tol = tol;
  if (cmd->count("--eps")) ov.eps = eps;
  if (cmd->count("--eta")) ov.eta = eta;
  if (cmd->count("--seed")) ov.seed = seed;

  return run(cmd->get_name(), scenario, ov, out_path, format);
}
