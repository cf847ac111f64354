#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scnd/runner.hpp"

namespace {

void add_generator_flags(CLI::App* cmd, scnd::GeneratorParams& p) {
  cmd->set_help_flag("--help", "print this help message and exit");
  cmd->add_option("--q", p.q, "disruption probability")->capture_default_str();
  cmd->add_option("--levels", p.levels, "regular assignment levels L")->capture_default_str();
  cmd->add_option("--h", p.h, "holding cost per unit of stock")->capture_default_str();
  cmd->add_option("--c-r", p.c_r, "regular cost per km")->capture_default_str();
  cmd->add_option("--c-e", p.c_e, "expedited markup spread")->capture_default_str();
  cmd->add_option("--c-f", p.c_f, "fixed cost per unit of city population")
      ->capture_default_str();
  cmd->add_option("--c-d", p.c_d, "demand rate per unit of state population")
      ->capture_default_str();
  cmd->add_option("--c-l", p.c_l, "lead time per km")->capture_default_str();
  cmd->add_option("--stock-cap", p.stock_cap, "cap on the derived per-terminal max stock")
      ->capture_default_str();
  cmd->add_option("--max-stock", p.max_stock,
                  "force this max stock for every terminal (negative: derive it)")
      ->capture_default_str();
}

void add_solver_flags(CLI::App* cmd, scnd::SolverConfig& c) {
  cmd->add_option("--gap-tol", c.gap_tol, "relative duality gap target")
      ->capture_default_str();
  cmd->add_option("--max-iters", c.max_iters, "iteration cap")->capture_default_str();
  cmd->add_option("--tau0", c.tau0, "initial step scalar")->capture_default_str();
  cmd->add_option("--tau-min", c.tau_min, "stop when the step scalar falls below this")
      ->capture_default_str();
  cmd->add_option("--stall-window", c.stall_window,
                  "non-improving iterations before the scalar contracts")
      ->capture_default_str();
  cmd->add_option("--theta", c.theta, "contraction divisor")->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads for the terminal subproblems")
      ->capture_default_str();
  cmd->add_flag("--verbose", c.verbose, "print one line per iteration");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-echelon supply chain design under supplier disruptions"};
  // --h is the holding-cost scalar, so help keeps only its long spelling.
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  scnd::GenerateArgs gen;
  CLI::App* generate = app.add_subcommand(
      "generate", "build a synthetic instance from a site CSV");
  generate->add_option("--sites", gen.sites_csv, "site CSV (name,lat,lon,city_pop,state_pop)")
      ->required();
  generate->add_option("--out", gen.out_path, "instance JSON to write")->required();
  generate->add_option("--seed", gen.seed, "RNG seed for expedited-cost draws")
      ->capture_default_str();
  add_generator_flags(generate, gen.params);

  scnd::SolveArgs sol;
  CLI::App* solve = app.add_subcommand("solve", "run the Lagrangian solver on an instance");
  solve->add_option("--instance", sol.instance_path, "instance JSON")->required();
  solve->add_option("--out", sol.out_path, "report JSON to write")->required();
  add_solver_flags(solve, sol.config);

  scnd::SweepArgs sw;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "solve a family of instances varying one generator scalar");
  sweep->add_option("--sites", sw.sites_csv, "site CSV (name,lat,lon,city_pop,state_pop)")
      ->required();
  sweep->add_option("--out", sw.out_csv, "CSV to write")->required();
  sweep->add_option("--param", sw.param, "scalar to vary: q h c_r c_e c_f c_d c_l")
      ->required();
  sweep->add_option("--values", sw.values, "values to sweep, comma separated")
      ->required()
      ->delimiter(',');
  sweep->add_option("--seed", sw.seed, "RNG seed shared by every row")
      ->capture_default_str();
  add_generator_flags(sweep, sw.base);
  add_solver_flags(sweep, sw.config);

  scnd::LayoutArgs lay;
  CLI::App* layout = app.add_subcommand(
      "layout", "export the node/edge view of a solve report");
  layout->add_option("--instance", lay.instance_path, "instance JSON")->required();
  layout->add_option("--report", lay.report_path, "report JSON from solve")->required();
  layout->add_option("--out", lay.out_path, "layout JSON to write")->required();

  scnd::SimulateArgs sim;
  std::string dist = "deterministic";
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo check of the stock-out probability");
  simulate->add_option("--demand", sim.config.demand, "Poisson demand rate")
      ->capture_default_str();
  simulate->add_option("--lead", sim.config.lead, "mean replenishment lead time")
      ->capture_default_str();
  simulate->add_option("--stock", sim.config.stock, "base-stock level S")
      ->capture_default_str();
  simulate->add_option("--events", sim.config.horizon_events, "demand events to simulate")
      ->capture_default_str();
  simulate->add_option("--seed", sim.config.seed, "RNG seed")->capture_default_str();
  simulate->add_option("--lead-dist", dist, "lead time distribution")
      ->check(CLI::IsMember({"deterministic", "exponential"}))
      ->capture_default_str();
  simulate->add_option("--out", sim.out_path, "also write the JSON summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? scnd::kExitOk : scnd::kExitValidation;
  }

  if (generate->parsed())
    return scnd::cmd_generate(gen, std::cout, std::cerr);
  if (solve->parsed()) {
    if (sol.config.verbose) sol.config.progress = &std::cerr;
    return scnd::cmd_solve(sol, std::cout, std::cerr);
  }
  if (sweep->parsed()) {
    if (sw.config.verbose) sw.config.progress = &std::cerr;
    return scnd::cmd_sweep(sw, std::cout, std::cerr);
  }
  if (layout->parsed())
    return scnd::cmd_layout(lay, std::cout, std::cerr);
  if (simulate->parsed()) {
    sim.config.lead_dist = dist == "exponential" ? scnd::LeadTimeDist::kExponential
                                                 : scnd::LeadTimeDist::kDeterministic;
    return scnd::cmd_simulate(sim, std::cout, std::cerr);
  }
  return scnd::kExitValidation;
}
