#include "scnd/generator.hpp"

#include <cmath>

#include "scnd/cost.hpp"

namespace scnd {

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadiusKm = 6371.0088;
  constexpr double kDeg = 3.14159265358979323846 / 180.0;
  double phi1 = lat1 * kDeg, phi2 = lat2 * kDeg;
  double dphi = (lat2 - lat1) * kDeg;
  double dlam = (lon2 - lon1) * kDeg;
  double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
             std::cos(phi1) * std::cos(phi2) * std::sin(dlam / 2) * std::sin(dlam / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

Instance generate_synthetic(const std::vector<Site>& sites,
                            const GeneratorParams& params,
                            std::uint64_t seed) {
  if (sites.empty()) throw ValidationError("generator: empty site list");
  const int n = static_cast<int>(sites.size());

  Instance inst;
  inst.q = params.q;
  inst.levels = params.levels;
  inst.regular_cost = Grid(n, n);
  inst.expedited_cost = Grid(n, n);
  inst.lead_time = Grid(n, n);

  for (int i = 0; i < n; ++i)
    inst.suppliers.push_back({params.c_f * sites[i].city_pop});

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double d = haversine_km(sites[i].lat, sites[i].lon, sites[j].lat, sites[j].lon);
      inst.regular_cost(i, j) = params.c_r * d;
      inst.lead_time(i, j) = params.c_l * d;
    }

  std::vector<double> max_r(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      max_r[j] = std::max(max_r[j], inst.regular_cost(i, j));

  // Row-major draws so the stream position of e_ij depends only on (i, j).
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      inst.expedited_cost(i, j) = (1.0 + params.c_e * rng.next_unit()) * max_r[j];

  for (int j = 0; j < n; ++j) {
    Terminal t;
    t.demand_rate = params.c_d * sites[j].state_pop;
    t.holding_cost = params.h;
    if (params.max_stock >= 0) {
      t.max_stock = params.max_stock;
    } else {
      double max_lead = 0.0;
      for (int i = 0; i < n; ++i) max_lead = std::max(max_lead, inst.lead_time(i, j));
      double rho = t.demand_rate * max_lead;
      int s = 0;
      while (s < params.stock_cap && stockout_probability(rho, s) >= 1e-6) ++s;
      t.max_stock = s;
    }
    inst.terminals.push_back(t);
  }
  return inst;
}

}  // namespace scnd
