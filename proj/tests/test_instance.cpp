#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "scnd/cost.hpp"
#include "scnd/generator.hpp"
#include "scnd/instance.hpp"
#include "testutil.hpp"

using namespace scnd;

namespace {

std::string data_path(const char* name) {
  return std::string(SCND_DATA_DIR) + "/" + name;
}

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

TEST_CASE("validate accepts a well-formed instance") {
  CHECK(validate(tiny_two_by_one()).empty());
}

TEST_CASE("validate flags q outside [0,1)") {
  Instance inst = tiny_two_by_one();
  inst.q = 1.2;
  auto v = validate(inst);
  REQUIRE(!v.empty());
  CHECK(has_rule(v, "disruption_prob"));
  inst.q = 1.0;
  CHECK(has_rule(validate(inst), "disruption_prob"));
  inst.q = -0.1;
  CHECK(has_rule(validate(inst), "disruption_prob"));
}

TEST_CASE("validate flags fewer suppliers than levels") {
  Instance inst = tiny_two_by_one();
  inst.levels = 3;
  CHECK(has_rule(validate(inst), "supplier_count"));
}

TEST_CASE("validate flags opposite cost/lead-time orderings") {
  Instance inst = tiny_two_by_one();
  // r says supplier 0 is closer, t says supplier 1 is: contradictory.
  inst.lead_time(0, 0) = 2.0;
  inst.lead_time(1, 0) = 0.5;
  CHECK(has_rule(validate(inst), "cost_leadtime_order"));
}

TEST_CASE("equal costs with unequal lead times are allowed") {
  Instance inst = tiny_two_by_one();
  inst.regular_cost(1, 0) = inst.regular_cost(0, 0);
  CHECK(validate(inst).empty());
}

TEST_CASE("validate flags non-dominant expedited cost") {
  Instance inst = tiny_two_by_one();
  inst.expedited_cost(0, 0) = inst.regular_cost(1, 0);  // e == max r
  CHECK(has_rule(validate(inst), "expedited_dominance"));
}

TEST_CASE("validate flags nonpositive demand and negative costs") {
  Instance inst = tiny_two_by_one();
  inst.terminals[0].demand_rate = 0.0;
  CHECK(!validate(inst).empty());
  inst = tiny_two_by_one();
  inst.suppliers[0].fixed_cost = -1.0;
  CHECK(!validate(inst).empty());
  inst = tiny_two_by_one();
  inst.regular_cost(0, 0) = -2.0;
  CHECK(!validate(inst).empty());
}

TEST_CASE("instance JSON round trip preserves every field") {
  Instance inst = tiny_two_by_one();
  Instance back = instance_from_json_text(instance_to_json_text(inst));
  CHECK(back.q == inst.q);
  CHECK(back.levels == inst.levels);
  REQUIRE(back.num_suppliers() == 2);
  REQUIRE(back.num_terminals() == 1);
  CHECK(back.suppliers[1].fixed_cost == 12.0);
  CHECK(back.terminals[0].demand_rate == 2.0);
  CHECK(back.terminals[0].holding_cost == 1.5);
  CHECK(back.terminals[0].max_stock == 6);
  CHECK(back.regular_cost(1, 0) == 3.0);
  CHECK(back.expedited_cost(0, 0) == 9.0);
  CHECK(back.lead_time(1, 0) == 1.5);
  // Serialization itself is stable.
  CHECK(instance_to_json_text(back) == instance_to_json_text(inst));
}

TEST_CASE("instance file round trip") {
  Instance inst = tiny_two_by_one();
  const std::string path = "/tmp/scnd_test_instance.json";
  save_instance(inst, path);
  Instance back = load_instance(path);
  CHECK(instance_to_json_text(back) == instance_to_json_text(inst));
  std::remove(path.c_str());
}

TEST_CASE("load_instance rejects malformed and invalid input") {
  CHECK_THROWS_AS((void)instance_from_json_text("not json at all"), ParseError);
  CHECK_THROWS_AS((void)instance_from_json_text("{}"), ParseError);
  CHECK_THROWS_AS((void)load_instance("/nonexistent/dir/file.json"), ParseError);

  Instance bad = tiny_two_by_one();
  bad.q = 1.2;
  std::string text = instance_to_json_text(bad);
  CHECK_THROWS_WITH_AS((void)instance_from_json_text(text),
                       doctest::Contains("disruption_prob"), ValidationError);

  bad = tiny_two_by_one();
  bad.lead_time(0, 0) = 2.0;
  bad.lead_time(1, 0) = 0.5;
  text = instance_to_json_text(bad);
  CHECK_THROWS_WITH_AS((void)instance_from_json_text(text),
                       doctest::Contains("cost/lead-time ordering"), ValidationError);
}

TEST_CASE("splitmix64 matches the published reference outputs") {
  SplitMix64 g0(0);
  CHECK(g0.next() == 0xe220a8397b1dcdafULL);
  CHECK(g0.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(g0.next() == 0x06c45d188009454fULL);
  SplitMix64 g1(1);
  CHECK(g1.next() == 0x910a2dec89025cc1ULL);
  CHECK(g1.next() == 0xbeeb8da1658eec67ULL);
  SplitMix64 gbig(1234567);
  CHECK(gbig.next() == 0x599ed017fb08fc85ULL);
  CHECK(gbig.next() == 0x2c73f08458540fa5ULL);
}

TEST_CASE("splitmix64 unit draws live in (0,1]") {
  SplitMix64 g(42);
  double lo = 1.0, hi = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const double u = g.next_unit();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("haversine is symmetric, zero on the diagonal, triangle-consistent") {
  SplitMix64 g(7);
  for (int trial = 0; trial < 200; ++trial) {
    const double lat1 = -80.0 + 160.0 * g.next_unit();
    const double lon1 = -180.0 + 360.0 * g.next_unit();
    const double lat2 = -80.0 + 160.0 * g.next_unit();
    const double lon2 = -180.0 + 360.0 * g.next_unit();
    const double lat3 = -80.0 + 160.0 * g.next_unit();
    const double lon3 = -180.0 + 360.0 * g.next_unit();
    const double ab = haversine_km(lat1, lon1, lat2, lon2);
    const double ba = haversine_km(lat2, lon2, lat1, lon1);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
    CHECK(haversine_km(lat1, lon1, lat1, lon1) == doctest::Approx(0.0).epsilon(1e-9));
    const double bc = haversine_km(lat2, lon2, lat3, lon3);
    const double ac = haversine_km(lat1, lon1, lat3, lon3);
    CHECK(ac <= (ab + bc) * (1.0 + 1e-9) + 1e-9);
  }
  // Spot value: New York to Los Angeles is close to 3936 km.
  CHECK(haversine_km(40.7128, -74.0060, 34.0522, -118.2437) ==
        doctest::Approx(3936.0).epsilon(0.01));
}

TEST_CASE("site CSV parses the bundled capitals file") {
  auto sites = load_sites(data_path("us_capitals_49.csv"));
  REQUIRE(sites.size() == 49);
  CHECK(sites[0].name == "Montgomery");
  CHECK(sites[0].lat == doctest::Approx(32.3792));
  CHECK(sites[48].name == "Washington");
  for (const auto& s : sites) {
    CHECK(s.city_pop > 0);
    CHECK(s.state_pop > 0);
  }
}

TEST_CASE("site CSV rejects bad headers and rows") {
  CHECK_THROWS_AS((void)sites_from_csv_text(""), ParseError);
  CHECK_THROWS_AS((void)sites_from_csv_text("name,lat,lon\na,1,2\n"), ParseError);
  const std::string header = "name,lat,lon,city_pop,state_pop\n";
  CHECK_THROWS_AS((void)sites_from_csv_text(header + "a,1,2,3\n"), ParseError);
  CHECK_THROWS_AS((void)sites_from_csv_text(header + "a,99,0,1,1\n"), ParseError);
  CHECK_THROWS_AS((void)sites_from_csv_text(header + "a,0,0,-5,1\n"), ParseError);
  CHECK_THROWS_AS((void)sites_from_csv_text(header + "a,x,0,1,1\n"), ParseError);
  auto ok = sites_from_csv_text(header + "a,10.5,-20.25,100,200\n");
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].lon == -20.25);
}

TEST_CASE("generator is deterministic and validator-clean") {
  auto sites = load_sites(data_path("us_capitals_49.csv"));
  GeneratorParams params;  // defaults mirror the bundled experiment scalars
  Instance a = generate_synthetic(sites, params, 1);
  Instance b = generate_synthetic(sites, params, 1);
  CHECK(instance_to_json_text(a) == instance_to_json_text(b));
  CHECK(validate(a).empty());
  Instance c = generate_synthetic(sites, params, 2);
  CHECK(instance_to_json_text(a) != instance_to_json_text(c));
}

TEST_CASE("generator fields follow the documented construction") {
  auto sites = load_sites(data_path("us_capitals_49.csv"));
  GeneratorParams params;
  Instance inst = generate_synthetic(sites, params, 1);
  REQUIRE(inst.num_suppliers() == 49);
  REQUIRE(inst.num_terminals() == 49);
  CHECK(inst.q == params.q);
  CHECK(inst.levels == params.levels);
  for (int i = 0; i < 49; ++i) {
    CHECK(inst.suppliers[i].fixed_cost ==
          doctest::Approx(params.c_f * sites[i].city_pop).epsilon(1e-12));
    CHECK(inst.terminals[i].demand_rate ==
          doctest::Approx(params.c_d * sites[i].state_pop).epsilon(1e-12));
    CHECK(inst.terminals[i].holding_cost == params.h);
    // Co-located supplier and terminal: zero distance on the diagonal.
    CHECK(inst.regular_cost(i, i) == 0.0);
    CHECK(inst.lead_time(i, i) == 0.0);
  }
  // r and t are the same distances under different scales.
  for (int i = 0; i < 49; ++i)
    for (int j = 0; j < 49; ++j) {
      CHECK(inst.regular_cost(i, j) ==
            doctest::Approx(inst.regular_cost(j, i)).epsilon(1e-12));
      CHECK(inst.lead_time(i, j) * params.c_r ==
            doctest::Approx(inst.regular_cost(i, j) * params.c_l).epsilon(1e-12));
    }
  // Expedited draws live in (max_r, (1+c_e) max_r].
  for (int j = 0; j < 49; ++j) {
    double max_r = 0.0;
    for (int i = 0; i < 49; ++i) max_r = std::max(max_r, inst.regular_cost(i, j));
    for (int i = 0; i < 49; ++i) {
      CHECK(inst.expedited_cost(i, j) > max_r);
      CHECK(inst.expedited_cost(i, j) <= (1.0 + params.c_e) * max_r * (1 + 1e-12));
    }
  }
}

TEST_CASE("generator default max stock follows the probability cutoff") {
  auto sites = load_sites(data_path("us_capitals_49.csv"));
  GeneratorParams params;
  Instance inst = generate_synthetic(sites, params, 1);
  for (int j = 0; j < inst.num_terminals(); ++j) {
    double max_t = 0.0;
    for (int i = 0; i < inst.num_suppliers(); ++i)
      max_t = std::max(max_t, inst.lead_time(i, j));
    const double rho = inst.terminals[j].demand_rate * max_t;
    int s = 0;
    while (s < params.stock_cap && stockout_probability(rho, s) >= 1e-6) ++s;
    CHECK(inst.terminals[j].max_stock == s);
  }
}

TEST_CASE("generator honors a forced max stock") {
  auto sites = load_sites(data_path("us_capitals_49.csv"));
  GeneratorParams params;
  params.max_stock = 17;
  Instance inst = generate_synthetic(sites, params, 1);
  for (const auto& t : inst.terminals) CHECK(t.max_stock == 17);
}

TEST_CASE("c_e = 0 degenerates to e equal to max r, which the validator rejects") {
  auto sites = load_sites(data_path("us_capitals_49.csv"));
  GeneratorParams params;
  params.c_e = 0.0;
  Instance inst = generate_synthetic(sites, params, 1);
  for (int j = 0; j < inst.num_terminals(); ++j) {
    double max_r = 0.0;
    for (int i = 0; i < inst.num_suppliers(); ++i)
      max_r = std::max(max_r, inst.regular_cost(i, j));
    for (int i = 0; i < inst.num_suppliers(); ++i)
      CHECK(inst.expedited_cost(i, j) == max_r);
  }
  CHECK(has_rule(validate(inst), "expedited_dominance"));
}

TEST_CASE("generator refuses an empty site list") {
  CHECK_THROWS_AS((void)generate_synthetic({}, GeneratorParams{}, 1), ValidationError);
}
