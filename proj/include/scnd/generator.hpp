#pragma once

#include <cstdint>
#include <vector>

#include "scnd/instance.hpp"

namespace scnd {

// SplitMix64: the reference 64-bit shift/multiply generator. Used for every
// random draw in the project so results are reproducible across platforms and
// standard libraries. Reference outputs are frozen in the tests.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1]: 53 random bits shifted away from zero. Never returns 0,
  // so -log(u) and strict-dominance margins are always finite and positive.
  double next_unit() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Great-circle distance in km on a sphere of radius 6371.0088 km.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

// Scalars for the synthetic co-located instance family: every site hosts one
// supplier and one terminal; costs scale with great-circle distance and
// census populations.
struct GeneratorParams {
  double q = 0.1;        // disruption probability
  int levels = 3;        // L
  double h = 100.0;      // uniform holding cost
  double c_r = 0.01;     // regular cost per km
  double c_e = 1.0;      // expedited markup spread: e ~ U(1, 1+c_e] * max_r
  double c_f = 0.02;     // fixed cost per unit of city population
  double c_d = 1e-5;     // demand per unit of state population
  double c_l = 1e-4;     // lead time per km
  int stock_cap = 200;   // hard cap on the default per-terminal max stock
  int max_stock = -1;    // >= 0 forces this max stock for every terminal
};

// Builds the instance deterministically from (sites, params, seed). Expedited
// costs are the only random part: e_ij = (1 + c_e * u_ij) * max_i' r_i'j with
// u_ij in (0,1] drawn row-major (suppliers outer, terminals inner). The default
// per-terminal stock bound is the smallest S whose stockout probability at the
// terminal's largest lead-time load falls below 1e-6, capped at stock_cap.
Instance generate_synthetic(const std::vector<Site>& sites,
                            const GeneratorParams& params,
                            std::uint64_t seed);

}  // namespace scnd
