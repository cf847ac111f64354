#include "scnd/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace scnd {

std::string to_string(ExitReason r) {
  switch (r) {
    case ExitReason::kGapTolerance: return "gap_tolerance";
    case ExitReason::kStepFloor: return "step_floor";
    case ExitReason::kIterationCap: return "iteration_cap";
    case ExitReason::kZeroSubgradient: return "zero_subgradient";
  }
  return "unknown";
}

namespace {

// L1 norm of the full signed subgradient, counting slack (an installed
// supplier left unused) as well as violations. Zero means the subgradient
// itself is zero, which certifies the multipliers are dual-optimal and the
// relaxed solution is feasible with primal cost equal to the bound; a
// positive-part-only mass would report zero in states that are far from
// optimal (every supplier forced open by oversized multipliers).
double violation_mass(const Instance& inst, const RelaxedSolution& relaxed) {
  const int I = inst.num_suppliers();
  const int J = inst.num_terminals();
  double total = 0.0;
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) {
      int y_sum = 0;
      for (int l = 1; l <= inst.levels; ++l) y_sum += relaxed.sol.y(inst, i, j, l);
      total += std::abs(y_sum - relaxed.sol.installed[i]);
      total += std::abs(relaxed.sol.z(inst, i, j) - relaxed.sol.installed[i]);
    }
  return total;
}

double rel_gap(double incumbent, double lower) {
  const double diff = incumbent - lower;
  if (diff <= 0.0) return 0.0;
  if (incumbent > 0.0) return diff / incumbent;
  return std::numeric_limits<double>::infinity();
}

void check_config(const SolverConfig& c) {
  if (!(c.tau0 > 0.0 && c.tau0 <= 2.0))
    throw std::invalid_argument("solver config: tau0 must be in (0, 2]");
  if (!(c.tau_min > 0.0)) throw std::invalid_argument("solver config: tau_min must be > 0");
  if (c.stall_window < 1)
    throw std::invalid_argument("solver config: stall_window must be >= 1");
  if (!(c.theta > 1.0)) throw std::invalid_argument("solver config: theta must be > 1");
  if (c.max_iters < 1) throw std::invalid_argument("solver config: max_iters must be >= 1");
  if (!(c.gap_tol >= 0.0)) throw std::invalid_argument("solver config: gap_tol must be >= 0");
}

}  // namespace

std::optional<double> step_size(double tau, double incumbent, double delta,
                                const Instance& inst, const RelaxedSolution& relaxed) {
  if (incumbent < delta)
    throw std::invalid_argument("step_size: incumbent must be >= delta");
  const double mass = violation_mass(inst, relaxed);
  if (mass == 0.0) return std::nullopt;
  return tau * (incumbent - delta) / mass;
}

Multipliers update_multipliers(const Instance& inst, const Multipliers& m,
                               double step, const RelaxedSolution& relaxed) {
  const int I = inst.num_suppliers();
  const int J = inst.num_terminals();
  Multipliers out = m;
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) {
      int y_sum = 0;
      for (int l = 1; l <= inst.levels; ++l) y_sum += relaxed.sol.y(inst, i, j, l);
      const double g_lambda = y_sum - relaxed.sol.installed[i];
      const double g_mu = relaxed.sol.z(inst, i, j) - relaxed.sol.installed[i];
      out.lambda(i, j) = std::max(0.0, m.lambda(i, j) + step * g_lambda);
      out.mu(i, j) = std::max(0.0, m.mu(i, j) + step * g_mu);
    }
  return out;
}

SolveResult solve(const Instance& inst, const SolverConfig& config) {
  check_config(config);
  {
    auto violations = validate(inst);
    if (!violations.empty()) throw ValidationError(violations.front().message);
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const StockoutTable table = StockoutTable::build(inst);
  RelaxOptions relax_opts;
  relax_opts.threads = std::max(1, config.threads);
  relax_opts.table = &table;

  Multipliers m = Multipliers::zeros(inst);
  double tau = config.tau0;
  int stall = 0;

  SolveResult res;
  res.lower_bound = -std::numeric_limits<double>::infinity();
  res.upper_bound = std::numeric_limits<double>::infinity();
  std::ostream* progress =
      config.verbose ? (config.progress ? config.progress : &std::cerr) : nullptr;

  for (int k = 1; k <= config.max_iters; ++k) {
    RelaxedSolution relaxed = solve_relaxed(inst, m, relax_opts);

    if (relaxed.delta > res.lower_bound) {
      res.lower_bound = relaxed.delta;
      stall = 0;
    } else {
      ++stall;
    }
    // Contraction happens before this iteration's step.
    if (stall >= config.stall_window) {
      tau /= config.theta;
      stall = 0;
    }

    Solution repaired = make_feasible(inst, relaxed);
    const double repaired_cost = evaluate(inst, repaired).total;
    if (repaired_cost < res.upper_bound) {
      res.upper_bound = repaired_cost;
      res.best = std::move(repaired);
    }

    res.gap = rel_gap(res.upper_bound, res.lower_bound);
    res.log.push_back({k, relaxed.delta, res.lower_bound, res.upper_bound, tau, 0.0,
                       elapsed()});
    if (progress)
      *progress << "iter " << k << " lower " << relaxed.delta << " best "
                << res.lower_bound << " upper " << res.upper_bound << " gap "
                << res.gap << " tau " << tau << "\n";

    // delta can land an ulp above the incumbent when the gap closes; the gap
    // exit below fires in that case, so clamping keeps the step call valid.
    std::optional<double> step = step_size(
        tau, res.upper_bound, std::min(relaxed.delta, res.upper_bound), inst, relaxed);
    if (!step) {
      res.exit_reason = ExitReason::kZeroSubgradient;
      break;
    }
    if (res.gap <= config.gap_tol) {
      res.exit_reason = ExitReason::kGapTolerance;
      break;
    }
    if (tau < config.tau_min) {
      res.exit_reason = ExitReason::kStepFloor;
      break;
    }
    if (k == config.max_iters) {
      res.exit_reason = ExitReason::kIterationCap;
      break;
    }
    m = update_multipliers(inst, m, *step, relaxed);
    res.log.back().step = *step;
  }

  res.costs = evaluate(inst, res.best);
  res.seconds = elapsed();
  return res;
}

}  // namespace scnd
