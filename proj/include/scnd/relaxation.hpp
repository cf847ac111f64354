#pragma once

#include <functional>
#include <vector>

#include "scnd/cost.hpp"
#include "scnd/instance.hpp"

namespace scnd {

// Nonnegative multipliers for the two relaxed linking-constraint families:
// lambda for "regular levels only from installed suppliers", mu for
// "expedited only from installed suppliers". Indexed (supplier, terminal).
struct Multipliers {
  Grid lambda;
  Grid mu;

  static Multipliers zeros(const Instance& inst);
};

// Precomputed stockout probabilities P_ij(s) for s = 0..max_stock_j, built once
// per solve and shared read-only across iterations and worker threads. Using
// the table is bit-identical to calling stockout_probability directly: the
// rows are filled by the same recursion.
class StockoutTable {
 public:
  static StockoutTable build(const Instance& inst);

  // Row for (supplier i, terminal j); entry [s] is P_ij(s).
  const double* row(int i, int j) const {
    return rows_.data() + offsets_[static_cast<size_t>(i) * cols_ + j];
  }

 private:
  std::vector<double> rows_;
  std::vector<size_t> offsets_;
  size_t cols_ = 0;
};

// Minimizes a discretely convex integer sequence C over {0..s_max} in
// O(log s_max) slope calls, where slope(s) = C(s) - C(s-1) must be
// non-decreasing. Returns the smallest minimizer and its cost: if the slope is
// nonnegative everywhere the answer is 0, if negative everywhere it is s_max.
struct BisectResult {
  int s = 0;
  double cost = 0.0;
};
BisectResult bisect_stock(const std::function<double(int)>& slope,
                          const std::function<double(int)>& cost,
                          int s_max);

// Installation part of the relaxed objective: opens supplier i exactly when
// its reduced cost f_i - sum_j (lambda_ij + mu_ij) is <= 0 (ties open), and
// returns the sum of the opened reduced costs (always <= 0).
struct LocationResult {
  std::vector<std::uint8_t> installed;
  double gamma = 0.0;
};
LocationResult solve_location_subproblem(const Instance& inst, const Multipliers& m);

// Per-terminal piece of the relaxed objective: the best ordered chain of
// distinct regular suppliers, expedited supplier, and stock level.
struct TerminalResult {
  std::vector<int> chain;  // level 1..L regular suppliers, pairwise distinct
  int expedited = 0;
  int stock = 0;
  double phi = 0.0;  // optimal relaxed per-terminal cost
};

enum class SubproblemMethod {
  kAuto,           // pick by instance size
  kChainBisection, // enumerate (chain, expedited) pairs, bisect over stock
  kLevelwise,      // enumerate stock levels, assemble the chain per level
};

// Exact minimizer of the relaxed per-terminal cost over every ordered distinct
// chain, expedited supplier, and stock in 0..max_stock_j. Both methods return
// the same result, including ties, which go to the lexicographically smallest
// (expedited, chain, stock) tuple. `table` may be null (a row cache is built
// on the fly).
TerminalResult solve_terminal_subproblem(const Instance& inst, const Multipliers& m,
                                         int j, const StockoutTable* table = nullptr,
                                         SubproblemMethod method = SubproblemMethod::kAuto);

// Full relaxed solution: location choice plus all terminal subproblems.
// delta = gamma + sum_j phi_j is a lower bound on the optimal design cost for
// any nonnegative multipliers.
struct RelaxedSolution {
  Solution sol;
  std::vector<double> phi;
  double gamma = 0.0;
  double delta = 0.0;
};

struct RelaxOptions {
  int threads = 1;
  SubproblemMethod method = SubproblemMethod::kAuto;
  const StockoutTable* table = nullptr;
};

// Terminal subproblems are independent and may run on worker threads; results
// are merged in terminal order, so delta is identical for any thread count.
RelaxedSolution solve_relaxed(const Instance& inst, const Multipliers& m,
                              const RelaxOptions& opts = {});

}  // namespace scnd
