#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "scnd/cost.hpp"
#include "scnd/instance.hpp"
#include "testutil.hpp"

using namespace scnd;

namespace {

Instance tiny_two_by_one() {
  Instance inst;
  inst.q = 0.2;
  inst.levels = 2;
  inst.suppliers = {{10.0}, {12.0}};
  inst.terminals = {{2.0, 1.5, 6}};
  inst.regular_cost = Grid(2, 1);
  inst.expedited_cost = Grid(2, 1);
  inst.lead_time = Grid(2, 1);
  inst.regular_cost(0, 0) = 1.0;
  inst.regular_cost(1, 0) = 3.0;
  inst.lead_time(0, 0) = 0.5;
  inst.lead_time(1, 0) = 1.5;
  inst.expedited_cost(0, 0) = 9.0;
  inst.expedited_cost(1, 0) = 8.0;
  return inst;
}

bool has_rule(const std::vector<Violation>& v, const std::string& rule) {
  for (const auto& x : v)
    if (x.rule == rule) return true;
  return false;
}

}  // namespace

TEST_CASE("stockout probability at zero stock is one") {
  for (double rho : {0.0, 1e-6, 0.3, 1.0, 7.0, 1e3})
    CHECK(stockout_probability(rho, 0) == 1.0);
}

TEST_CASE("stockout probability pinned closed forms") {
  CHECK(stockout_probability(1.0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  // (2^3/3!) / (1 + 2 + 2 + 8/6) = (8/6) / (38/6) = 8/38 = 4/19
  CHECK(stockout_probability(2.0, 3) == doctest::Approx(4.0 / 19.0).epsilon(1e-12));
  // rho = 3, s = 2: (9/2) / (1 + 3 + 9/2) = 4.5/8.5 = 9/17
  CHECK(stockout_probability(3.0, 2) == doctest::Approx(9.0 / 17.0).epsilon(1e-12));
}

TEST_CASE("stockout probability rejects bad arguments") {
  CHECK_THROWS_AS((void)stockout_probability(-1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)stockout_probability(1.0, -1), std::invalid_argument);
  CHECK_THROWS_AS((void)stockout_probability(std::nan(""), 1), std::invalid_argument);
}

TEST_CASE("recursion matches the direct finite sum across the working grid") {
  const std::vector<double> rhos = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 0.1, 0.25, 0.5,
                                    1.0,  2.0,  3.5,  5.0,  10.0, 25.0, 50.0,
                                    100.0, 250.0, 500.0, 1e3};
  for (double rho : rhos)
    for (int s = 0; s <= 200; ++s) {
      const double got = stockout_probability(rho, s);
      const double want = testutil::stockout_direct(rho, s);
      const double diff = std::abs(got - want);
      const double rel = diff / std::max(std::abs(want), 1e-300);
      // Below roughly 1e-308 doubles go subnormal and relative precision
      // degrades by construction, so allow one spacing of absolute slack there.
      const bool ok = rel <= 1e-12 || diff <= 1e-323;
      CHECK_MESSAGE(ok, "rho=", rho, " s=", s, " got=", got, " want=", want);
    }
}

TEST_CASE("stockout probability is strictly decreasing in stock") {
  // Strict until the value underflows double entirely.
  for (double rho : {1e-4, 0.5, 1.0, 10.0, 500.0}) {
    double prev = stockout_probability(rho, 0);
    for (int s = 1; s <= 120 && prev > 0.0; ++s) {
      const double cur = stockout_probability(rho, s);
      CHECK(cur < prev);
      CHECK(cur >= 0.0);
      prev = cur;
    }
  }
}

TEST_CASE("stockout probability is strictly increasing in load") {
  for (int s : {1, 2, 5, 20, 100}) {
    double prev = -1.0;
    for (double rho : {1e-5, 1e-3, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0, 1e3}) {
      const double cur = stockout_probability(rho, s);
      if (cur > 0.0 && prev >= 0.0) CHECK(cur > prev);
      CHECK(cur >= prev);
      prev = cur;
    }
  }
}

TEST_CASE("stockout probability differences are discretely convex") {
  for (double rho : {0.05, 0.5, 1.0, 2.5, 10.0, 80.0})
    for (int s = 1; s <= 150; ++s) {
      const double a = stockout_probability(rho, s - 1);
      const double b = stockout_probability(rho, s);
      const double c = stockout_probability(rho, s + 1);
      CHECK((a - b) >= (b - c) * (1.0 - 1e-12) - 1e-300);
    }
}

TEST_CASE("level weights match the pinned values and the power form") {
  CHECK(level_weight(0.0, 1) == 1.0);
  CHECK(level_weight(0.0, 2) == 0.0);
  CHECK(level_weight(0.3, 2) == doctest::Approx(0.21).epsilon(1e-15));
  for (double q : {0.0, 0.1, 0.45, 0.9})
    for (int l = 1; l <= 6; ++l)
      CHECK(level_weight(q, l) ==
            doctest::Approx(testutil::level_weight_direct(q, l)).epsilon(1e-14));
  CHECK_THROWS_AS((void)level_weight(0.5, 0), std::invalid_argument);
}

TEST_CASE("level weights plus total-failure probability partition to one") {
  for (double q : {0.0, 0.05, 0.3, 0.6, 0.95, 0.999})
    for (int L = 1; L <= 8; ++L) {
      double total = all_levels_fail(q, L);
      for (int l = 1; l <= L; ++l) total += level_weight(q, l);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("solution accessors and assembly") {
  Instance inst = tiny_two_by_one();
  Solution sol = Solution::from_assignments(inst, {{0, 1}}, {1}, {2});
  CHECK(sol.installed[0] == 1);
  CHECK(sol.installed[1] == 1);
  CHECK(sol.y(inst, 0, 0, 1) == 1);
  CHECK(sol.y(inst, 1, 0, 2) == 1);
  CHECK(sol.y(inst, 1, 0, 1) == 0);
  CHECK(sol.z(inst, 1, 0) == 1);
  CHECK(sol.stock[0] == 2);
  CHECK(sol.chain_of(inst, 0) == std::vector<int>{0, 1});
  CHECK(sol.expedited_of(inst, 0) == 1);
  CHECK(check_feasible(inst, sol).empty());
}

TEST_CASE("check_feasible flags each constraint family") {
  Instance inst = tiny_two_by_one();
  Solution base = Solution::from_assignments(inst, {{0, 1}}, {1}, {2});

  SUBCASE("same supplier serving two levels") {
    Solution sol = base;
    sol.y(inst, 1, 0, 2) = 0;
    sol.y(inst, 0, 0, 2) = 1;
    CHECK(has_rule(check_feasible(inst, sol), "distinct_chain"));
  }
  SUBCASE("regular assignment to an uninstalled supplier") {
    Solution sol = base;
    sol.installed[1] = 0;
    auto v = check_feasible(inst, sol);
    CHECK(has_rule(v, "regular_needs_installed"));
    CHECK(has_rule(v, "expedited_needs_installed"));
  }
  SUBCASE("expedited assignment to an uninstalled supplier") {
    Solution sol = base;
    sol.z(inst, 1, 0) = 0;
    sol.z(inst, 0, 0) = 1;
    sol.installed[1] = 0;  // still used at level 2
    auto v = check_feasible(inst, sol);
    CHECK(has_rule(v, "regular_needs_installed"));
    CHECK(!has_rule(v, "expedited_needs_installed"));
  }
  SUBCASE("missing and duplicated level assignment") {
    Solution sol = base;
    sol.y(inst, 1, 0, 2) = 0;
    CHECK(has_rule(check_feasible(inst, sol), "one_regular_per_level"));
    sol.y(inst, 1, 0, 2) = 1;
    sol.y(inst, 0, 0, 2) = 1;
    CHECK(has_rule(check_feasible(inst, sol), "one_regular_per_level"));
  }
  SUBCASE("missing expedited supplier") {
    Solution sol = base;
    sol.z(inst, 1, 0) = 0;
    CHECK(has_rule(check_feasible(inst, sol), "one_expedited"));
  }
  SUBCASE("stock outside bounds") {
    Solution sol = base;
    sol.stock[0] = 7;
    CHECK(has_rule(check_feasible(inst, sol), "stock_bounds"));
    sol.stock[0] = -1;
    CHECK(has_rule(check_feasible(inst, sol), "stock_bounds"));
  }
  SUBCASE("shape mismatch throws") {
    Solution sol = base;
    sol.stock.push_back(0);
    CHECK_THROWS_AS((void)check_feasible(inst, sol), std::invalid_argument);
  }
}

TEST_CASE("evaluate matches a hand-computed two-supplier design") {
  Instance inst = tiny_two_by_one();
  Solution sol = Solution::from_assignments(inst, {{0, 1}}, {1}, {2});
  CostBreakdown c = evaluate(inst, sol);

  // d = 2, chain (0, 1), expedited 1, S = 2, q = 0.2 so w = (0.8, 0.16).
  // Loads: level 1 rho = 2*0.5 = 1 with P(1,2) = 0.2; level 2 rho = 2*1.5 = 3
  // with P(3,2) = 9/17.
  CHECK(c.holding == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(c.regular == doctest::Approx(2.0 * (1.0 * 0.8 + 3.0 * 0.16)).epsilon(1e-13));
  CHECK(c.markup ==
        doctest::Approx(2.0 * ((8.0 - 1.0) * 0.8 * 0.2 +
                               (8.0 - 3.0) * 0.16 * (9.0 / 17.0))).epsilon(1e-13));
  CHECK(c.emergency == doctest::Approx(2.0 * 8.0 * 0.04).epsilon(1e-13));
  CHECK(c.fixed == doctest::Approx(22.0).epsilon(1e-14));
  CHECK(c.expedited_share ==
        doctest::Approx(0.8 * 0.2 + 0.16 * (9.0 / 17.0)).epsilon(1e-13));
  CHECK(c.total == c.holding + c.regular + c.markup + c.emergency + c.fixed);
}

TEST_CASE("evaluate with zero stock has zero holding cost") {
  Instance inst = tiny_two_by_one();
  Solution sol = Solution::from_assignments(inst, {{0, 1}}, {1}, {0});
  CHECK(evaluate(inst, sol).holding == 0.0);
}

TEST_CASE("evaluate with no disruptions uses only level one") {
  Instance inst = tiny_two_by_one();
  inst.q = 0.0;
  Solution sol = Solution::from_assignments(inst, {{0, 1}}, {1}, {1});
  CostBreakdown c = evaluate(inst, sol);
  CHECK(c.emergency == 0.0);
  // Only the level-1 supplier contributes: rho = 1, P(1,1) = 0.5.
  CHECK(c.regular == doctest::Approx(2.0 * 1.0).epsilon(1e-13));
  CHECK(c.markup == doctest::Approx(2.0 * (8.0 - 1.0) * 0.5).epsilon(1e-13));
  CHECK(c.expedited_share == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("uniform holding cost scales total stock directly") {
  Instance inst;
  inst.q = 0.1;
  inst.levels = 1;
  inst.suppliers = {{5.0}};
  inst.terminals = {{1.0, 100.0, 200}, {1.0, 100.0, 200}};
  inst.regular_cost = Grid(1, 2);
  inst.expedited_cost = Grid(1, 2);
  inst.lead_time = Grid(1, 2);
  for (int j = 0; j < 2; ++j) {
    inst.regular_cost(0, j) = 1.0;
    inst.lead_time(0, j) = 1.0;
    inst.expedited_cost(0, j) = 2.0;
  }
  Solution sol = Solution::from_assignments(inst, {{0}, {0}}, {0, 0}, {100, 65});
  CHECK(evaluate(inst, sol).holding == doctest::Approx(16500.0).epsilon(1e-14));
}

TEST_CASE("evaluate rejects infeasible solutions with the first violation") {
  Instance inst = tiny_two_by_one();
  Solution sol = Solution::from_assignments(inst, {{0, 1}}, {1}, {2});
  sol.stock[0] = 99;
  CHECK_THROWS_WITH_AS((void)evaluate(inst, sol), doctest::Contains("stock"),
                       ValidationError);
}

TEST_CASE("cost components are nonnegative on random feasible designs") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Instance inst = testutil::make_random_instance(seed, 4, 3, 2, 8);
    SplitMix64 g(seed * 977);
    std::vector<std::vector<int>> chains;
    std::vector<int> ex, stock;
    for (int j = 0; j < 3; ++j) {
      int a = static_cast<int>(g.next() % 4);
      int b = static_cast<int>(g.next() % 4);
      while (b == a) b = static_cast<int>(g.next() % 4);
      chains.push_back({a, b});
      ex.push_back(static_cast<int>(g.next() % 4));
      stock.push_back(static_cast<int>(g.next() % 9));
    }
    CostBreakdown c = evaluate(inst, Solution::from_assignments(inst, chains, ex, stock));
    CHECK(c.holding >= 0.0);
    CHECK(c.regular >= 0.0);
    CHECK(c.markup >= 0.0);
    CHECK(c.emergency >= 0.0);
    CHECK(c.fixed >= 0.0);
    CHECK(c.total == c.holding + c.regular + c.markup + c.emergency + c.fixed);
    CHECK(c.expedited_share >= 0.0);
    CHECK(c.expedited_share <= 1.0);
  }
}
