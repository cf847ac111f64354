#include "scnd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "scnd/generator.hpp"

namespace scnd {

namespace {

// Exact operating cost of one terminal under a fixed design choice.
double terminal_cost(const Instance& inst, int j, const std::vector<int>& chain,
                     int ex, int s) {
  const double d = inst.terminals[j].demand_rate;
  const double e = inst.expedited_cost(ex, j);
  const double qL = all_levels_fail(inst.q, inst.levels);
  double cost = inst.terminals[j].holding_cost * s;
  for (int l = 1; l <= inst.levels; ++l) {
    const int i = chain[l - 1];
    const double w = level_weight(inst.q, l);
    const double p = stockout_probability(d * inst.lead_time(i, j), s);
    cost += d * inst.regular_cost(i, j) * w;
    cost += d * (e - inst.regular_cost(i, j)) * w * p;
  }
  cost += d * e * qL;
  return cost;
}

struct TerminalPick {
  std::vector<int> chain;
  int ex = 0;
  int s = 0;
  double cost = std::numeric_limits<double>::infinity();
};

// Best (expedited, chain, stock) for terminal j over the open supplier set,
// first-found on ties in lexicographic (expedited, chain, stock) order.
TerminalPick best_for_terminal(const Instance& inst, int j, const std::vector<int>& open) {
  TerminalPick best;
  const int L = inst.levels;
  std::vector<int> chain(L);
  std::vector<char> used(inst.num_suppliers(), 0);

  auto try_stock = [&](int ex) {
    for (int s = 0; s <= inst.terminals[j].max_stock; ++s) {
      double c = terminal_cost(inst, j, chain, ex, s);
      if (c < best.cost) {
        best.cost = c;
        best.chain = chain;
        best.ex = ex;
        best.s = s;
      }
    }
  };
  auto walk = [&](auto&& self, int level, int ex) -> void {
    if (level == L) {
      try_stock(ex);
      return;
    }
    for (int i : open) {
      if (used[i]) continue;
      used[i] = 1;
      chain[level] = i;
      self(self, level + 1, ex);
      used[i] = 0;
    }
  };
  for (int ex : open) walk(walk, 0, ex);
  return best;
}

}  // namespace

OracleResult brute_force_solve(const Instance& inst) {
  const int I = inst.num_suppliers();
  const int J = inst.num_terminals();
  if (I > 6 || J > 5 || inst.levels > 3)
    throw std::invalid_argument("brute_force_solve: limited to 6 suppliers, 5 terminals, 3 levels");
  for (int j = 0; j < J; ++j)
    if (inst.terminals[j].max_stock > 15)
      throw std::invalid_argument("brute_force_solve: limited to max stock 15");
  {
    auto violations = validate(inst);
    if (!violations.empty()) throw ValidationError(violations.front().message);
  }

  bool have = false;
  double best_total = std::numeric_limits<double>::infinity();
  std::vector<TerminalPick> best_picks;
  std::vector<int> best_used;

  for (unsigned mask = 1; mask < (1u << I); ++mask) {
    std::vector<int> open;
    for (int i = 0; i < I; ++i)
      if (mask & (1u << i)) open.push_back(i);
    if (static_cast<int>(open.size()) < inst.levels) continue;

    std::vector<TerminalPick> picks(J);
    std::vector<char> used(I, 0);
    double total = 0.0;
    for (int j = 0; j < J; ++j) {
      picks[j] = best_for_terminal(inst, j, open);
      total += picks[j].cost;
      for (int i : picks[j].chain) used[i] = 1;
      used[picks[j].ex] = 1;
    }
    // Unused open suppliers are closed, so their fixed costs never count.
    std::vector<int> used_ids;
    for (int i = 0; i < I; ++i)
      if (used[i]) {
        total += inst.suppliers[i].fixed_cost;
        used_ids.push_back(i);
      }
    if (!have || total < best_total) {
      have = true;
      best_total = total;
      best_picks = picks;
      best_used = used_ids;
    }
  }

  std::vector<std::vector<int>> chains(J);
  std::vector<int> ex(J), stock(J);
  for (int j = 0; j < J; ++j) {
    chains[j] = best_picks[j].chain;
    ex[j] = best_picks[j].ex;
    stock[j] = best_picks[j].s;
  }
  OracleResult res;
  res.best = Solution::from_assignments(inst, chains, ex, stock);
  res.total = best_total;
  return res;
}

SimStats simulate_base_stock(const SimConfig& config) {
  if (!(config.demand > 0.0) || !std::isfinite(config.demand))
    throw std::invalid_argument("simulate: demand rate must be positive");
  if (!(config.lead >= 0.0) || !std::isfinite(config.lead))
    throw std::invalid_argument("simulate: lead time must be >= 0");
  if (config.stock < 0) throw std::invalid_argument("simulate: stock must be >= 0");
  if (config.horizon_events < 1)
    throw std::invalid_argument("simulate: need at least one event");

  SplitMix64 rng(config.seed);
  auto lead_sample = [&] {
    if (config.lead_dist == LeadTimeDist::kDeterministic) return config.lead;
    return -std::log(rng.next_unit()) * config.lead;
  };

  const std::uint64_t warmup = config.horizon_events / 20;  // first 5% discarded
  const std::uint64_t counted_total = config.horizon_events - warmup;
  const int batches = counted_total >= 1000 ? 50 : 1;
  std::vector<std::uint64_t> batch_events(batches, 0), batch_expedited(batches, 0);

  std::priority_queue<double, std::vector<double>, std::greater<double>> outstanding;
  int on_hand = config.stock;
  double now = 0.0;
  std::uint64_t counted = 0, expedited = 0;

  for (std::uint64_t ev = 0; ev < config.horizon_events; ++ev) {
    now += -std::log(rng.next_unit()) / config.demand;
    while (!outstanding.empty() && outstanding.top() <= now) {
      outstanding.pop();
      ++on_hand;
    }
    const bool expedite = (on_hand == 0);
    if (!expedite) {
      --on_hand;
      outstanding.push(now + lead_sample());
    }
    if (ev >= warmup) {
      const std::uint64_t b = counted * batches / counted_total;
      ++batch_events[b];
      batch_expedited[b] += expedite ? 1 : 0;
      ++counted;
      expedited += expedite ? 1 : 0;
    }
  }

  SimStats stats;
  stats.events = counted;
  stats.expedited_events = expedited;
  stats.expedite_fraction = static_cast<double>(expedited) / static_cast<double>(counted);
  if (batches > 1) {
    double mean = 0.0;
    std::vector<double> f(batches);
    for (int b = 0; b < batches; ++b) {
      f[b] = static_cast<double>(batch_expedited[b]) / static_cast<double>(batch_events[b]);
      mean += f[b];
    }
    mean /= batches;
    double var = 0.0;
    for (int b = 0; b < batches; ++b) var += (f[b] - mean) * (f[b] - mean);
    var /= (batches - 1);
    stats.standard_error = std::sqrt(var / batches);
  } else {
    const double p = stats.expedite_fraction;
    stats.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(counted));
  }
  return stats;
}

}  // namespace scnd
