#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace scnd {

// Dense row-major matrix of doubles, indexed (supplier, terminal) throughout.
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  double& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::vector<double>& raw() const { return data_; }
  std::vector<double>& raw() { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

struct Supplier {
  double fixed_cost = 0.0;
};

struct Terminal {
  double demand_rate = 0.0;
  double holding_cost = 0.0;
  int max_stock = 0;
};

// A two-echelon design problem: every terminal is assigned one regular supplier
// per backup level 1..levels plus one expedited supplier, and carries base stock.
// regular_cost / expedited_cost / lead_time are supplier-major (rows = suppliers).
struct Instance {
  std::vector<Supplier> suppliers;
  std::vector<Terminal> terminals;
  Grid regular_cost;
  Grid expedited_cost;
  Grid lead_time;
  double q = 0.0;  // per-order supplier disruption probability
  int levels = 1;  // L, number of regular backup levels

  int num_suppliers() const { return static_cast<int>(suppliers.size()); }
  int num_terminals() const { return static_cast<int>(terminals.size()); }
};

// One broken invariant; `rule` is a stable identifier, `message` carries indices.
struct Violation {
  std::string rule;
  std::string message;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structural and numeric checks: matrix shapes, q in [0,1), L >= 1, |I| >= L,
// positive demand, nonnegative costs and lead times, per-terminal cost/lead-time
// co-monotonicity (strictly opposite orderings of r and t are rejected), and
// strict expedited dominance e_i'j > r_ij for every supplier pair.
std::vector<Violation> validate(const Instance& inst);

// JSON round trip. load_instance throws ParseError on malformed input and
// ValidationError naming the first violated invariant; save writes the
// canonical schema documented in docs/formats.md.
Instance load_instance(const std::string& path);
Instance instance_from_json_text(const std::string& text);
std::string instance_to_json_text(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

// Geographic site used by the synthetic generator: name,lat,lon,city_pop,state_pop.
struct Site {
  std::string name;
  double lat = 0.0;
  double lon = 0.0;
  double city_pop = 0.0;
  double state_pop = 0.0;
};

// Reads the site CSV (mandatory header row, UTF-8, '.' decimals).
std::vector<Site> load_sites(const std::string& path);
std::vector<Site> sites_from_csv_text(const std::string& text);

}  // namespace scnd
