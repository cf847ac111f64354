#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scnd/cost.hpp"
#include "scnd/feasible.hpp"
#include "scnd/relaxation.hpp"

namespace scnd {

struct SolverConfig {
  double tau0 = 1.0;        // initial step scalar, in (0, 2]
  double tau_min = 1e-3;    // stop when the scalar contracts below this
  int stall_window = 5;     // contract after this many non-improving bounds
  double theta = 1.005;     // contraction divisor
  int max_iters = 60;
  double gap_tol = 1e-3;    // relative duality gap target
  int threads = 1;
  bool verbose = false;
  std::ostream* progress = nullptr;  // per-iteration lines when verbose
};

struct IterationRecord {
  int iter = 0;
  double lower = 0.0;       // this iteration's relaxed bound
  double best_lower = 0.0;  // running maximum
  double incumbent = 0.0;   // best feasible cost so far
  double tau = 0.0;         // scalar after any contraction this iteration
  double step = 0.0;        // multiplier step taken (0 on the final iteration)
  double seconds = 0.0;     // wall time since solve start
};

enum class ExitReason {
  kGapTolerance,
  kStepFloor,
  kIterationCap,
  kZeroSubgradient,  // relaxed solution feasible; no violated linking constraint
};

std::string to_string(ExitReason r);

struct SolveResult {
  Solution best;
  CostBreakdown costs;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double gap = 0.0;  // (upper - lower) / upper
  ExitReason exit_reason = ExitReason::kIterationCap;
  std::vector<IterationRecord> log;
  double seconds = 0.0;
};

// Subgradient step for the relaxed linking constraints. The denominator is the
// L1 norm of the signed constraint values, counting slack as well as
// violations; returns nothing when it is zero (the subgradient vanishes and
// the relaxed solution is feasible as-is).
std::optional<double> step_size(double tau, double incumbent, double delta,
                                const Instance& inst, const RelaxedSolution& relaxed);

// One projected multiplier update: m' = max(0, m + step * violation), using
// the raw signed violations of both constraint families.
Multipliers update_multipliers(const Instance& inst, const Multipliers& m,
                               double step, const RelaxedSolution& relaxed);

// Lagrangian subgradient loop: relax, repair, step, contract on stalls.
// Deterministic for a fixed (instance, config), including the thread count.
SolveResult solve(const Instance& inst, const SolverConfig& config = {});

}  // namespace scnd
