#include "scnd/feasible.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace scnd {

Solution naive_repair(const Instance& inst, const RelaxedSolution& relaxed) {
  Solution out = relaxed.sol;
  const int I = inst.num_suppliers();
  const int J = inst.num_terminals();
  for (int i = 0; i < I; ++i) {
    std::uint8_t used = 0;
    for (int j = 0; j < J && !used; ++j) {
      for (int l = 1; l <= inst.levels; ++l)
        if (out.y(inst, i, j, l)) {
          used = 1;
          break;
        }
      if (out.z(inst, i, j)) used = 1;
    }
    out.installed[i] = used;
  }
  return out;
}

Solution refined_feasible(const Instance& inst, const std::vector<int>& installed) {
  const int L = inst.levels;
  if (static_cast<int>(installed.size()) < L)
    throw std::invalid_argument("refined_feasible: need at least L installed suppliers");
  for (int i : installed)
    if (i < 0 || i >= inst.num_suppliers())
      throw std::invalid_argument("refined_feasible: supplier index out of range");

  const int J = inst.num_terminals();
  std::vector<std::vector<int>> chains(J);
  std::vector<int> expedited(J);
  std::vector<int> stock(J);

  for (int j = 0; j < J; ++j) {
    const double d = inst.terminals[j].demand_rate;
    const double h = inst.terminals[j].holding_cost;
    const double qL = all_levels_fail(inst.q, L);

    // Cheapest expedited rate among installed suppliers, smallest id on ties.
    int ex = installed.front();
    for (int i : installed)
      if (inst.expedited_cost(i, j) < inst.expedited_cost(ex, j) ||
          (inst.expedited_cost(i, j) == inst.expedited_cost(ex, j) && i < ex))
        ex = i;

    // Chain: the L installed suppliers with the smallest regular rates,
    // ascending (the cost/lead-time ordering makes this the best chain for a
    // fixed installed set), ids breaking ties.
    std::vector<int> sorted(installed);
    std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
      if (inst.regular_cost(a, j) != inst.regular_cost(b, j))
        return inst.regular_cost(a, j) < inst.regular_cost(b, j);
      return a < b;
    });
    sorted.resize(L);

    std::vector<double> w(L);
    for (int l = 0; l < L; ++l) w[l] = level_weight(inst.q, l + 1);

    // Exact per-terminal operating cost of (chain, ex) as a function of stock.
    auto cost = [&](int s) {
      const double e = inst.expedited_cost(ex, j);
      double regular_part = 0.0, expedite_p = 0.0;
      for (int l = 0; l < L; ++l) {
        const int i = sorted[l];
        const double p = stockout_probability(d * inst.lead_time(i, j), s);
        regular_part += d * inst.regular_cost(i, j) * w[l] * (1.0 - p);
        expedite_p += d * w[l] * p;
      }
      return h * s + regular_part + e * (d * qL + expedite_p);
    };
    auto slope = [&](int s) { return cost(s) - cost(s - 1); };
    BisectResult r = bisect_stock(slope, cost, inst.terminals[j].max_stock);

    chains[j] = sorted;
    expedited[j] = ex;
    stock[j] = r.s;
  }

  // from_assignments installs exactly the used suppliers, closing the rest.
  return Solution::from_assignments(inst, chains, expedited, stock);
}

Solution make_feasible(const Instance& inst, const RelaxedSolution& relaxed) {
  Solution naive = naive_repair(inst, relaxed);

  std::vector<int> installed;
  for (int i = 0; i < inst.num_suppliers(); ++i)
    if (relaxed.sol.installed[i] || naive.installed[i]) installed.push_back(i);

  if (static_cast<int>(installed.size()) < inst.levels) return naive;

  Solution refined = refined_feasible(inst, installed);
  const double naive_total = evaluate(inst, naive).total;
  const double refined_total = evaluate(inst, refined).total;
  return naive_total <= refined_total ? naive : refined;
}

}  // namespace scnd
