#pragma once

#include <string>
#include <vector>

#include "scnd/instance.hpp"

namespace scnd {

// Stationary probability that a base-stock-s location is out of stock when a
// demand arrives, with outstanding-order load rho = demand * lead time:
//
//   P(s) = (rho^s / s!) / sum_{u=0..s} rho^u / u!
//
// computed by the overflow-free recursion P(0) = 1,
// P(u) = rho * P(u-1) / (u + rho * P(u-1)). Strictly decreasing in s for
// rho > 0, increasing in rho, and discretely convex in s.
double stockout_probability(double rho, int s);

// Probability that demand is served by the level-l regular supplier: the first
// l-1 suppliers failed, this one did not. Levels are 1-based.
double level_weight(double q, int level);

// q^L, the probability every regular level fails and the order goes expedited.
double all_levels_fail(double q, int levels);

// A full design: which suppliers are installed, the level-l regular supplier
// per terminal, the expedited supplier per terminal, and base stock levels.
// Y and Z are dense booleans indexed like the instance matrices.
struct Solution {
  std::vector<std::uint8_t> installed;        // X_i, size I
  std::vector<std::uint8_t> regular;          // Y_ijl, flat i*J*L + j*L + (l-1)
  std::vector<std::uint8_t> expedited;        // Z_ij, flat i*J + j
  std::vector<int> stock;                     // S_j, size J

  static Solution empty(const Instance& inst);

  std::uint8_t& y(const Instance& inst, int i, int j, int l);
  std::uint8_t y(const Instance& inst, int i, int j, int l) const;
  std::uint8_t& z(const Instance& inst, int i, int j);
  std::uint8_t z(const Instance& inst, int i, int j) const;

  // Chain view: the level-1..L regular suppliers of terminal j. Throws if the
  // solution does not have exactly one supplier at some level.
  std::vector<int> chain_of(const Instance& inst, int j) const;
  int expedited_of(const Instance& inst, int j) const;

  // Builds a solution from per-terminal assignments, installing exactly the
  // suppliers that are used.
  static Solution from_assignments(const Instance& inst,
                                   const std::vector<std::vector<int>>& chains,
                                   const std::vector<int>& expedited,
                                   const std::vector<int>& stock);
};

// Cost components of a feasible design, all per unit time, plus the fraction
// of demand served by expedited shipments triggered by stockouts.
struct CostBreakdown {
  double holding = 0.0;        // sum_j h_j S_j
  double regular = 0.0;        // regular shipping over levels
  double markup = 0.0;         // expedited markup paid on stockouts
  double emergency = 0.0;      // expedited orders when all levels fail
  double fixed = 0.0;          // installation
  double total = 0.0;
  double expedited_share = 0.0;  // demand-weighted stockout expedite fraction
};

// Constraint check for a candidate design. Returns one entry per violated
// constraint family instance (assignment to an uninstalled supplier, missing
// or duplicated level assignment, stock bounds). Shape mismatches throw.
std::vector<Violation> check_feasible(const Instance& inst, const Solution& sol);

// Exact expected cost of a feasible design. Throws ValidationError with the
// first violation's message if the solution is infeasible.
CostBreakdown evaluate(const Instance& inst, const Solution& sol);

}  // namespace scnd
