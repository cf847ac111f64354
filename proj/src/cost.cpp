#include "scnd/cost.hpp"

#include <cmath>
#include <stdexcept>

namespace scnd {

double stockout_probability(double rho, int s) {
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw std::invalid_argument("stockout_probability: rho must be finite and >= 0");
  if (s < 0) throw std::invalid_argument("stockout_probability: s must be >= 0");
  // Extended precision keeps the small-rho tail accurate well below where
  // double subnormals would erase it.
  long double p = 1.0L;
  const long double r = rho;
  for (int u = 1; u <= s; ++u) p = r * p / (u + r * p);
  return static_cast<double>(p);
}

double level_weight(double q, int level) {
  if (level < 1) throw std::invalid_argument("level_weight: levels are 1-based");
  double w = 1.0 - q;
  for (int k = 1; k < level; ++k) w *= q;
  return w;
}

double all_levels_fail(double q, int levels) {
  double w = 1.0;
  for (int k = 0; k < levels; ++k) w *= q;
  return w;
}

Solution Solution::empty(const Instance& inst) {
  Solution s;
  const size_t I = inst.suppliers.size();
  const size_t J = inst.terminals.size();
  s.installed.assign(I, 0);
  s.regular.assign(I * J * inst.levels, 0);
  s.expedited.assign(I * J, 0);
  s.stock.assign(J, 0);
  return s;
}

std::uint8_t& Solution::y(const Instance& inst, int i, int j, int l) {
  return regular[(static_cast<size_t>(i) * inst.terminals.size() + j) * inst.levels + (l - 1)];
}
std::uint8_t Solution::y(const Instance& inst, int i, int j, int l) const {
  return regular[(static_cast<size_t>(i) * inst.terminals.size() + j) * inst.levels + (l - 1)];
}
std::uint8_t& Solution::z(const Instance& inst, int i, int j) {
  return expedited[static_cast<size_t>(i) * inst.terminals.size() + j];
}
std::uint8_t Solution::z(const Instance& inst, int i, int j) const {
  return expedited[static_cast<size_t>(i) * inst.terminals.size() + j];
}

std::vector<int> Solution::chain_of(const Instance& inst, int j) const {
  std::vector<int> chain(inst.levels, -1);
  for (int l = 1; l <= inst.levels; ++l) {
    for (int i = 0; i < inst.num_suppliers(); ++i)
      if (y(inst, i, j, l)) {
        if (chain[l - 1] >= 0)
          throw ValidationError("terminal " + std::to_string(j) + " has two level-" +
                                std::to_string(l) + " suppliers");
        chain[l - 1] = i;
      }
    if (chain[l - 1] < 0)
      throw ValidationError("terminal " + std::to_string(j) + " has no level-" +
                            std::to_string(l) + " supplier");
  }
  return chain;
}

int Solution::expedited_of(const Instance& inst, int j) const {
  int found = -1;
  for (int i = 0; i < inst.num_suppliers(); ++i)
    if (z(inst, i, j)) {
      if (found >= 0)
        throw ValidationError("terminal " + std::to_string(j) + " has two expedited suppliers");
      found = i;
    }
  if (found < 0)
    throw ValidationError("terminal " + std::to_string(j) + " has no expedited supplier");
  return found;
}

Solution Solution::from_assignments(const Instance& inst,
                                    const std::vector<std::vector<int>>& chains,
                                    const std::vector<int>& expedited,
                                    const std::vector<int>& stock) {
  const int J = inst.num_terminals();
  if (static_cast<int>(chains.size()) != J || static_cast<int>(expedited.size()) != J ||
      static_cast<int>(stock.size()) != J)
    throw std::invalid_argument("from_assignments: per-terminal vectors must have size J");
  Solution s = Solution::empty(inst);
  for (int j = 0; j < J; ++j) {
    if (static_cast<int>(chains[j].size()) != inst.levels)
      throw std::invalid_argument("from_assignments: chain length must equal L");
    for (int l = 1; l <= inst.levels; ++l) {
      s.y(inst, chains[j][l - 1], j, l) = 1;
      s.installed[chains[j][l - 1]] = 1;
    }
    s.z(inst, expedited[j], j) = 1;
    s.installed[expedited[j]] = 1;
    s.stock[j] = stock[j];
  }
  return s;
}

std::vector<Violation> check_feasible(const Instance& inst, const Solution& sol) {
  const int I = inst.num_suppliers();
  const int J = inst.num_terminals();
  const int L = inst.levels;
  if (static_cast<int>(sol.installed.size()) != I ||
      static_cast<int>(sol.stock.size()) != J ||
      sol.regular.size() != static_cast<size_t>(I) * J * L ||
      sol.expedited.size() != static_cast<size_t>(I) * J)
    throw std::invalid_argument("check_feasible: solution shape does not match instance");

  std::vector<Violation> out;
  for (int j = 0; j < J; ++j) {
    for (int l = 1; l <= L; ++l) {
      int count = 0;
      for (int i = 0; i < I; ++i) count += sol.y(inst, i, j, l);
      if (count != 1)
        out.push_back({"one_regular_per_level",
                       "terminal " + std::to_string(j) + " must have exactly one level-" +
                           std::to_string(l) + " regular supplier, has " + std::to_string(count)});
    }
    int count = 0;
    for (int i = 0; i < I; ++i) count += sol.z(inst, i, j);
    if (count != 1)
      out.push_back({"one_expedited",
                     "terminal " + std::to_string(j) + " must have exactly one expedited supplier, has " +
                         std::to_string(count)});
    // Within a terminal, the same supplier must not serve two regular levels.
    for (int i = 0; i < I; ++i) {
      int uses = 0;
      for (int l = 1; l <= L; ++l) uses += sol.y(inst, i, j, l);
      if (uses > 1)
        out.push_back({"distinct_chain",
                       "supplier " + std::to_string(i) + " serves " + std::to_string(uses) +
                           " regular levels of terminal " + std::to_string(j)});
    }
    if (sol.stock[j] < 0 || sol.stock[j] > inst.terminals[j].max_stock)
      out.push_back({"stock_bounds",
                     "stock at terminal " + std::to_string(j) + " outside 0.." +
                         std::to_string(inst.terminals[j].max_stock)});
  }
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) {
      int uses = 0;
      for (int l = 1; l <= L; ++l) uses += sol.y(inst, i, j, l);
      if (uses > sol.installed[i])
        out.push_back({"regular_needs_installed",
                       "regular assignment to uninstalled supplier " + std::to_string(i) +
                           " by terminal " + std::to_string(j)});
      if (sol.z(inst, i, j) > sol.installed[i])
        out.push_back({"expedited_needs_installed",
                       "expedited assignment to uninstalled supplier " + std::to_string(i) +
                           " by terminal " + std::to_string(j)});
    }
  return out;
}

CostBreakdown evaluate(const Instance& inst, const Solution& sol) {
  auto violations = check_feasible(inst, sol);
  if (!violations.empty()) throw ValidationError(violations.front().message);

  const int J = inst.num_terminals();
  const int L = inst.levels;
  const double qL = all_levels_fail(inst.q, L);

  CostBreakdown c;
  double demand_total = 0.0;
  double expedited_demand = 0.0;

  for (int j = 0; j < J; ++j)
    c.holding += inst.terminals[j].holding_cost * sol.stock[j];

  for (int j = 0; j < J; ++j) {
    const double d = inst.terminals[j].demand_rate;
    const std::vector<int> chain = sol.chain_of(inst, j);
    const int ex = sol.expedited_of(inst, j);
    demand_total += d;
    for (int l = 1; l <= L; ++l) {
      const int i = chain[l - 1];
      const double w = level_weight(inst.q, l);
      const double p = stockout_probability(d * inst.lead_time(i, j), sol.stock[j]);
      c.regular += d * inst.regular_cost(i, j) * w;
      c.markup += d * (inst.expedited_cost(ex, j) - inst.regular_cost(i, j)) * w * p;
      expedited_demand += d * w * p;
    }
    c.emergency += d * inst.expedited_cost(ex, j) * qL;
  }
  for (int i = 0; i < inst.num_suppliers(); ++i)
    if (sol.installed[i]) c.fixed += inst.suppliers[i].fixed_cost;

  c.total = c.holding + c.regular + c.markup + c.emergency + c.fixed;
  c.expedited_share = demand_total > 0.0 ? expedited_demand / demand_total : 0.0;
  return c;
}

}  // namespace scnd
