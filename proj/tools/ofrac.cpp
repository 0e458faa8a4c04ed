// Scenario-driven front end for the ofrac library.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ofrac/sampled_function.hpp"
#include "ofrac/scenario.hpp"

namespace {

struct Common {
  std::string scenario;
  std::string out = "ofrac-out";
  double tol = 0.0;
  int threads = 0;
  bool verbose = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--scenario", c.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "Output directory for report.json and CSV tables");
  cmd->add_option("--tol", c.tol, "Override every check tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", c.threads, "Worker threads (default: ORLICZ_FRAC_THREADS or 1)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--verbose", c.verbose, "Per-operation progress on stderr");
}

int run(const Common& c, std::vector<std::string> only) {
  ofrac::RunOptions opt;
  opt.out_dir = c.out;
  if (c.tol > 0.0) opt.tol = c.tol;
  opt.threads = c.threads;
  opt.verbose = c.verbose;
  opt.only = std::move(only);
  return ofrac::run_scenario(c.scenario, opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional g-Laplacian and Orlicz-space toolkit"};
  app.set_version_flag("--version", std::string(ofrac::library_version()));
  app.require_subcommand(1);

  Common c;
  int code = 0;

  auto* run_cmd = app.add_subcommand("run", "Run every operation of a scenario");
  add_common(run_cmd, c);
  run_cmd->callback([&] { code = run(c, {}); });

  auto* gen_cmd = app.add_subcommand("generators", "List registered function generators");
  gen_cmd->callback([&] {
    for (const auto& g : ofrac::list_generators()) {
      std::cout << g.name << "  " << g.description << "\n";
      for (const auto& [k, v] : g.defaults) std::cout << "    " << k << " = " << v << "\n";
    }
  });

  auto* ops_cmd = app.add_subcommand("ops", "List scenario operation names");
  ops_cmd->callback([&] {
    for (const auto& n : ofrac::operation_names()) std::cout << n << "\n";
  });

  auto* op_cmd = app.add_subcommand("op", "Operator evaluation");
  op_cmd->require_subcommand(1);
  auto* eval_cmd = op_cmd->add_subcommand("eval", "PV and g-gradient tables (pv_eval, g_gradient)");
  add_common(eval_cmd, c);
  eval_cmd->callback([&] { code = run(c, {"pv_eval", "g_gradient"}); });
  auto* probe_cmd = op_cmd->add_subcommand("probe", "Inner-ball decay probes (pv_probe)");
  add_common(probe_cmd, c);
  probe_cmd->callback([&] { code = run(c, {"pv_probe"}); });

  auto* inf_cmd = app.add_subcommand("infconv", "Infimal convolution");
  inf_cmd->require_subcommand(1);
  auto* inf_run = inf_cmd->add_subcommand("run", "u_eps grids and property report (infconv)");
  add_common(inf_run, c);
  inf_run->callback([&] { code = run(c, {"infconv"}); });

  auto* weak_cmd = app.add_subcommand("weakcheck", "Weak-form checks over the bump basis");
  add_common(weak_cmd, c);
  weak_cmd->callback([&] { code = run(c, {"solve", "weak_check"}); });

  auto* visc_cmd = app.add_subcommand("visccheck", "Viscosity checks at touching points");
  add_common(visc_cmd, c);
  visc_cmd->callback([&] { code = run(c, {"solve", "viscosity_check"}); });

  auto* solve_cmd = app.add_subcommand("solve", "Discrete Dirichlet solves and convergence tables");
  add_common(solve_cmd, c);
  solve_cmd->callback([&] { code = run(c, {"solve"}); });

  auto* cmp_cmd = app.add_subcommand("compare", "Discrete comparison of ordered problems");
  add_common(cmp_cmd, c);
  cmp_cmd->callback([&] { code = run(c, {"compare"}); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  return code;
}
