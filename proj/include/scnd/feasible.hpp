#pragma once

#include <vector>

#include "scnd/cost.hpp"
#include "scnd/instance.hpp"
#include "scnd/relaxation.hpp"

namespace scnd {

// Cheapest repair of a relaxed solution: install exactly the suppliers the
// assignments use, keep everything else. Always feasible.
Solution naive_repair(const Instance& inst, const RelaxedSolution& relaxed);

// Rebuilds all assignments from scratch over a fixed installed set: each
// terminal takes the installed supplier with the cheapest expedited rate, the
// L installed suppliers with the smallest regular rates (ascending) as its
// chain, and the stock level minimizing the exact per-terminal cost. The
// cost/lead-time co-monotonicity invariant makes this chain order optimal for
// the fixed installed set. Suppliers left unused are closed. Requires at
// least L installed suppliers.
Solution refined_feasible(const Instance& inst, const std::vector<int>& installed);

// Repair used by the subgradient loop: takes the union of the relaxed
// installation and the suppliers used by the relaxed assignments, builds both
// the naive and the refined candidate, and returns the cheaper (the naive one
// on exact ties).
Solution make_feasible(const Instance& inst, const RelaxedSolution& relaxed);

}  // namespace scnd
