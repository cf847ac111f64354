#include "scnd/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace scnd {

Multipliers Multipliers::zeros(const Instance& inst) {
  Multipliers m;
  m.lambda = Grid(inst.num_suppliers(), inst.num_terminals(), 0.0);
  m.mu = Grid(inst.num_suppliers(), inst.num_terminals(), 0.0);
  return m;
}

StockoutTable StockoutTable::build(const Instance& inst) {
  const int I = inst.num_suppliers();
  const int J = inst.num_terminals();
  StockoutTable t;
  t.cols_ = J;
  t.offsets_.resize(static_cast<size_t>(I) * J);
  size_t total = 0;
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) {
      t.offsets_[static_cast<size_t>(i) * J + j] = total;
      total += inst.terminals[j].max_stock + 1;
    }
  t.rows_.resize(total);
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) {
      double* row = t.rows_.data() + t.offsets_[static_cast<size_t>(i) * J + j];
      // Same extended-precision recursion as stockout_probability, so cached
      // and uncached paths produce identical bits.
      const long double rho = inst.terminals[j].demand_rate * inst.lead_time(i, j);
      long double p = 1.0L;
      row[0] = static_cast<double>(p);
      for (int u = 1; u <= inst.terminals[j].max_stock; ++u) {
        p = rho * p / (u + rho * p);
        row[u] = static_cast<double>(p);
      }
    }
  return t;
}

BisectResult bisect_stock(const std::function<double(int)>& slope,
                          const std::function<double(int)>& cost, int s_max) {
  if (s_max < 0) throw std::invalid_argument("bisect_stock: s_max must be >= 0");
  // The minimizer of a discretely convex sequence is the largest s whose
  // backward difference is negative (0 if none); on flats this is the
  // smallest minimizer.
  int lo = 0, hi = s_max;
  while (lo < hi) {
    int mid = lo + (hi - lo + 1) / 2;
    if (slope(mid) < 0.0)
      lo = mid;
    else
      hi = mid - 1;
  }
  return {lo, cost(lo)};
}

LocationResult solve_location_subproblem(const Instance& inst, const Multipliers& m) {
  const int I = inst.num_suppliers();
  const int J = inst.num_terminals();
  LocationResult res;
  res.installed.assign(I, 0);
  for (int i = 0; i < I; ++i) {
    double reduced = inst.suppliers[i].fixed_cost;
    for (int j = 0; j < J; ++j) reduced -= m.lambda(i, j) + m.mu(i, j);
    if (reduced <= 0.0) {
      res.installed[i] = 1;
      res.gamma += reduced;
    }
  }
  return res;
}

namespace {

// Shared scratch for one terminal: stockout rows for each supplier, reused by
// both subproblem strategies.
struct TerminalContext {
  const Instance& inst;
  const Multipliers& m;
  int j;
  int I, L, s_max;
  double d, h, qL;
  std::vector<double> w;                    // level weights, 1-based at [l-1]
  std::vector<const double*> prow;          // P_ij(s) per supplier
  std::vector<std::vector<double>> local;   // backing rows when no table given

  TerminalContext(const Instance& inst_, const Multipliers& m_, int j_,
                  const StockoutTable* table)
      : inst(inst_), m(m_), j(j_) {
    I = inst.num_suppliers();
    L = inst.levels;
    s_max = inst.terminals[j].max_stock;
    d = inst.terminals[j].demand_rate;
    h = inst.terminals[j].holding_cost;
    qL = all_levels_fail(inst.q, L);
    w.resize(L);
    for (int l = 1; l <= L; ++l) w[l - 1] = level_weight(inst.q, l);
    prow.resize(I);
    if (table) {
      for (int i = 0; i < I; ++i) prow[i] = table->row(i, j);
    } else {
      local.resize(I);
      for (int i = 0; i < I; ++i) {
        local[i].resize(s_max + 1);
        const double rho = d * inst.lead_time(i, j);
        double p = 1.0;
        local[i][0] = p;
        for (int u = 1; u <= s_max; ++u) {
          p = rho * p / (u + rho * p);
          local[i][u] = p;
        }
        prow[i] = local[i].data();
      }
    }
  }

  // Unit service cost of supplier i at stock s against expedited rate e.
  // Written as a convex mix so that at s = 0 (stockout certain) it is exactly
  // e for every supplier: chains that differ only by reordering then price as
  // exact ties and the lexicographic tie-break is reachable.
  double unit_cost(int i, double e, int s) const {
    const double p = prow[i][s];
    if (p == 1.0) return e;
    const double r = inst.regular_cost(i, j);
    return r * (1.0 - p) + e * p;
  }

  // Canonical relaxed per-terminal cost of (chain, expedited, stock); every
  // candidate both strategies consider is priced through this one function so
  // their results agree to the last bit. The chain's multipliers are summed in
  // supplier-id order, making the total invariant under chain reordering.
  double chain_cost(const std::vector<int>& chain, int ex, int s) const {
    const double e = inst.expedited_cost(ex, j);
    double a = 0.0;
    for (int l = 0; l < L; ++l) a += w[l] * unit_cost(chain[l], e, s);
    double lam = 0.0;
    if (L <= 8) {
      int sorted[8];
      for (int l = 0; l < L; ++l) sorted[l] = chain[l];
      std::sort(sorted, sorted + L);
      for (int l = 0; l < L; ++l) lam += m.lambda(sorted[l], j);
    } else {
      std::vector<int> sorted(chain);
      std::sort(sorted.begin(), sorted.end());
      for (int i : sorted) lam += m.lambda(i, j);
    }
    return d * a + h * s + lam + d * e * qL + m.mu(ex, j);
  }
};

bool tuple_less(int ex_a, const std::vector<int>& chain_a, int s_a,
                int ex_b, const std::vector<int>& chain_b, int s_b) {
  if (ex_a != ex_b) return ex_a < ex_b;
  if (chain_a != chain_b) return chain_a < chain_b;
  return s_a < s_b;
}

// Literal search: every (expedited, ordered distinct chain) pair in
// lexicographic (expedited, chain) order, stock by bisection. Pairs whose
// stock-independent cost floor already exceeds the incumbent are skipped.
TerminalResult solve_chain_bisection(const TerminalContext& ctx) {
  TerminalResult best;
  double best_cost = std::numeric_limits<double>::infinity();
  bool have = false;

  std::vector<int> chain(ctx.L);
  std::vector<char> used(ctx.I, 0);

  auto consider = [&](int ex) {
    // b-part is a floor for the full cost: the stock terms h*s and the
    // markup sum are nonnegative.
    double b = 0.0;
    for (int l = 0; l < ctx.L; ++l) {
      const int i = chain[l];
      b += ctx.d * ctx.inst.regular_cost(i, ctx.j) * ctx.w[l] + ctx.m.lambda(i, ctx.j);
    }
    b += ctx.d * ctx.inst.expedited_cost(ex, ctx.j) * ctx.qL + ctx.m.mu(ex, ctx.j);
    if (have && b > best_cost) return;

    auto cost = [&](int s) { return ctx.chain_cost(chain, ex, s); };
    auto slope = [&](int s) { return cost(s) - cost(s - 1); };
    BisectResult r = bisect_stock(slope, cost, ctx.s_max);
    if (!have || r.cost < best_cost) {
      have = true;
      best_cost = r.cost;
      best.chain = chain;
      best.expedited = ex;
      best.stock = r.s;
      best.phi = r.cost;
    }
  };

  // Chains in lexicographic order via depth-first assembly.
  auto walk = [&](auto&& self, int level, int ex) -> void {
    if (level == ctx.L) {
      consider(ex);
      return;
    }
    for (int i = 0; i < ctx.I; ++i) {
      if (used[i]) continue;
      used[i] = 1;
      chain[level] = i;
      self(self, level + 1, ex);
      used[i] = 0;
    }
  };
  for (int ex = 0; ex < ctx.I; ++ex) walk(walk, 0, ex);
  return best;
}

// Stock-major search. For a fixed (stock, expedited) the cost separates per
// level up to the all-different constraint, so the optimal chain lives in the
// union of the L cheapest suppliers per level; an exchange over the separable
// costs shows the lexicographically smallest optimal chain survives this
// pruning. Since every cost term is nonnegative, the stock loop stops once
// h * s alone strictly exceeds the incumbent.
TerminalResult solve_levelwise(const TerminalContext& ctx) {
  const int I = ctx.I, L = ctx.L;
  TerminalResult best;
  double best_cost = std::numeric_limits<double>::infinity();
  bool have = false;

  // Per-level cost decomposes as clv = gpart + e * upart with
  //   gpart = d w_l r_i (1 - P_i(s)) + lambda_i,   upart = d w_l P_i(s),
  // so at s = 0 gpart is exactly lambda_i and supplier ties resolve by id.
  std::vector<double> gpart(static_cast<size_t>(L) * I);
  std::vector<double> upart(static_cast<size_t>(L) * I);
  std::vector<double> clv(static_cast<size_t>(L) * I);  // per-level cost, fixed (s, ex)
  // Top-L (value, id) entries per level, ascending.
  std::vector<int> top(static_cast<size_t>(L) * L);
  std::vector<int> top_count(L);
  std::vector<int> chain(L), cand(L);
  std::vector<char> used(I, 0);

  for (int s = 0; s <= ctx.s_max; ++s) {
    const double hs = ctx.h * s;
    if (have && hs > best_cost) break;

    for (int l = 0; l < L; ++l)
      for (int i = 0; i < I; ++i) {
        const double dw = ctx.d * ctx.w[l];
        const double p = ctx.prow[i][s];
        gpart[static_cast<size_t>(l) * I + i] =
            dw * (ctx.inst.regular_cost(i, ctx.j) * (1.0 - p)) + ctx.m.lambda(i, ctx.j);
        upart[static_cast<size_t>(l) * I + i] = dw * p;
      }

    for (int ex = 0; ex < I; ++ex) {
      const double e = ctx.inst.expedited_cost(ex, ctx.j);
      const double fixed_part =
          hs + ctx.d * e * ctx.qL + ctx.m.mu(ex, ctx.j);
      if (have && fixed_part > best_cost) continue;

      for (int l = 0; l < L; ++l) {
        const double* g = gpart.data() + static_cast<size_t>(l) * I;
        const double* u = upart.data() + static_cast<size_t>(l) * I;
        double* cl = clv.data() + static_cast<size_t>(l) * I;
        for (int i = 0; i < I; ++i) cl[i] = g[i] + e * u[i];
        // Insertion top-L by (value, id).
        int* t = top.data() + static_cast<size_t>(l) * L;
        int n = 0;
        for (int i = 0; i < I; ++i) {
          int pos = n;
          while (pos > 0 && (cl[i] < cl[t[pos - 1]] ||
                             (cl[i] == cl[t[pos - 1]] && i < t[pos - 1])))
            --pos;
          if (pos >= L) continue;
          if (n < L) ++n;
          for (int k = n - 1; k > pos; --k) t[k] = t[k - 1];
          t[pos] = i;
        }
        top_count[l] = n;
      }

      // All distinct combinations from the per-level shortlists, each priced
      // canonically; the winner is the (cost, chain) lexicographic minimum.
      double combo_cost = std::numeric_limits<double>::infinity();
      bool combo_have = false;
      auto pick = [&](auto&& self, int level) -> void {
        if (level == L) {
          const double c = ctx.chain_cost(cand, ex, s);
          if (!combo_have || c < combo_cost || (c == combo_cost && cand < chain)) {
            combo_have = true;
            combo_cost = c;
            chain = cand;
          }
          return;
        }
        const int* t = top.data() + static_cast<size_t>(level) * L;
        for (int k = 0; k < top_count[level]; ++k) {
          const int i = t[k];
          if (used[i]) continue;
          used[i] = 1;
          cand[level] = i;
          self(self, level + 1);
          used[i] = 0;
        }
      };
      pick(pick, 0);
      if (!combo_have) continue;

      const double cost = combo_cost;
      if (!have || cost < best_cost ||
          (cost == best_cost &&
           tuple_less(ex, chain, s, best.expedited, best.chain, best.stock))) {
        have = true;
        best_cost = cost;
        best.chain = chain;
        best.expedited = ex;
        best.stock = s;
        best.phi = cost;
      }
    }
  }
  return best;
}

SubproblemMethod pick_method(const Instance& inst, SubproblemMethod method) {
  if (method != SubproblemMethod::kAuto) return method;
  const int I = inst.num_suppliers();
  const int L = inst.levels;
  double chains = 1.0;
  for (int l = 0; l < L; ++l) chains *= static_cast<double>(I - l);
  return chains * I <= 50000.0 ? SubproblemMethod::kChainBisection
                               : SubproblemMethod::kLevelwise;
}

}  // namespace

TerminalResult solve_terminal_subproblem(const Instance& inst, const Multipliers& m,
                                         int j, const StockoutTable* table,
                                         SubproblemMethod method) {
  if (j < 0 || j >= inst.num_terminals())
    throw std::invalid_argument("solve_terminal_subproblem: terminal index out of range");
  TerminalContext ctx(inst, m, j, table);
  switch (pick_method(inst, method)) {
    case SubproblemMethod::kChainBisection:
      return solve_chain_bisection(ctx);
    default:
      return solve_levelwise(ctx);
  }
}

RelaxedSolution solve_relaxed(const Instance& inst, const Multipliers& m,
                              const RelaxOptions& opts) {
  const int J = inst.num_terminals();
  const StockoutTable* table = opts.table;
  StockoutTable local;
  if (!table) {
    local = StockoutTable::build(inst);
    table = &local;
  }

  std::vector<TerminalResult> results(J);
  const int threads = std::max(1, std::min(opts.threads, J > 0 ? J : 1));
  if (threads <= 1) {
    for (int j = 0; j < J; ++j)
      results[j] = solve_terminal_subproblem(inst, m, j, table, opts.method);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (int j = t; j < J; j += threads)
          results[j] = solve_terminal_subproblem(inst, m, j, table, opts.method);
      });
    for (auto& th : pool) th.join();
  }

  LocationResult loc = solve_location_subproblem(inst, m);

  RelaxedSolution out;
  out.sol = Solution::empty(inst);
  out.sol.installed = loc.installed;
  out.phi.resize(J);
  for (int j = 0; j < J; ++j) {
    const TerminalResult& r = results[j];
    out.phi[j] = r.phi;
    for (int l = 1; l <= inst.levels; ++l) out.sol.y(inst, r.chain[l - 1], j, l) = 1;
    out.sol.z(inst, r.expedited, j) = 1;
    out.sol.stock[j] = r.stock;
  }
  out.gamma = loc.gamma;
  out.delta = loc.gamma;
  for (int j = 0; j < J; ++j) out.delta += out.phi[j];
  return out;
}

}  // namespace scnd
