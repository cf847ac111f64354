#pragma once

#include <cstdint>
#include <vector>

#include "scnd/cost.hpp"
#include "scnd/instance.hpp"

namespace scnd {

// Exact optimum by exhaustive enumeration, for validating the solver on small
// cases: every nonempty supplier subset with at least L members, and per
// terminal every ordered distinct chain, expedited supplier, and stock level.
// Unused suppliers are closed before costing. Guarded to at most 6 suppliers,
// 5 terminals, 3 levels, and max stock 15 (throws std::invalid_argument
// beyond that). Ties go to the first candidate in enumeration order
// (installed sets by ascending bitmask, then lexicographic
// (expedited, chain, stock) per terminal).
struct OracleResult {
  Solution best;
  double total = 0.0;
};
OracleResult brute_force_solve(const Instance& inst);

// Event-driven base-stock simulation of one location: Poisson demand at rate
// `demand`, replenishment lead time `lead` (deterministic by default,
// exponential with that mean otherwise), base stock `stock`. A demand arriving
// with zero on-hand inventory is served by an instant expedited order that
// does not join the outstanding queue, so outstanding orders behave like busy
// servers in a loss system and the expedite fraction estimates
// stockout_probability(demand * lead, stock).
enum class LeadTimeDist { kDeterministic, kExponential };

struct SimConfig {
  double demand = 1.0;
  double lead = 1.0;
  int stock = 0;
  std::uint64_t horizon_events = 100000;  // total demand arrivals simulated
  std::uint64_t seed = 1;
  LeadTimeDist lead_dist = LeadTimeDist::kDeterministic;
};

struct SimStats {
  std::uint64_t events = 0;            // demand arrivals counted (post warm-up)
  std::uint64_t expedited_events = 0;
  double expedite_fraction = 0.0;
  double standard_error = 0.0;         // batch-means standard error
};

// The first 5% of arrivals are warm-up and are not counted. The standard
// error comes from 50 batch means when enough events remain (expedite
// indicators are correlated within a lead time), else from the binomial
// formula. Replications should use seed + replication index.
SimStats simulate_base_stock(const SimConfig& config);

}  // namespace scnd
