#include "scnd/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace scnd {
namespace {

using nlohmann::json;

std::string idx2(const char* a, int i, const char* b, int j) {
  std::ostringstream os;
  os << a << " " << i << ", " << b << " " << j;
  return os.str();
}

bool finite_grid(const Grid& g) {
  for (double v : g.raw())
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  const int I = inst.num_suppliers();
  const int J = inst.num_terminals();

  auto shape_ok = [&](const Grid& g) { return g.rows() == I && g.cols() == J; };
  if (!shape_ok(inst.regular_cost) || !shape_ok(inst.expedited_cost) ||
      !shape_ok(inst.lead_time)) {
    out.push_back({"matrix_shape",
                   "cost/lead-time matrices must be suppliers x terminals"});
    return out;  // index-based checks below would be meaningless
  }
  if (!finite_grid(inst.regular_cost) || !finite_grid(inst.expedited_cost) ||
      !finite_grid(inst.lead_time)) {
    out.push_back({"finite", "cost/lead-time matrices must be finite"});
    return out;
  }

  if (!(inst.q >= 0.0 && inst.q < 1.0))
    out.push_back({"disruption_prob", "disruption_prob out of range: q must be in [0, 1)"});
  if (inst.levels < 1)
    out.push_back({"levels", "number of levels must be at least 1"});
  if (I < inst.levels)
    out.push_back({"supplier_count", "fewer suppliers than levels"});

  for (int i = 0; i < I; ++i) {
    if (!(inst.suppliers[i].fixed_cost >= 0.0) ||
        !std::isfinite(inst.suppliers[i].fixed_cost))
      out.push_back({"fixed_cost", "negative fixed cost at supplier " + std::to_string(i)});
  }
  for (int j = 0; j < J; ++j) {
    const Terminal& t = inst.terminals[j];
    if (!(t.demand_rate > 0.0) || !std::isfinite(t.demand_rate))
      out.push_back({"demand_rate", "demand rate must be positive at terminal " + std::to_string(j)});
    if (!(t.holding_cost >= 0.0) || !std::isfinite(t.holding_cost))
      out.push_back({"holding_cost", "negative holding cost at terminal " + std::to_string(j)});
    if (t.max_stock < 0)
      out.push_back({"max_stock", "negative max stock at terminal " + std::to_string(j)});
  }
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) {
      if (inst.regular_cost(i, j) < 0.0)
        out.push_back({"regular_cost", "negative regular cost at " + idx2("supplier", i, "terminal", j)});
      if (inst.lead_time(i, j) < 0.0)
        out.push_back({"lead_time", "negative lead time at " + idx2("supplier", i, "terminal", j)});
    }

  // Per terminal, farther-by-cost must not be strictly nearer-by-time: the
  // refined repair sorts chains by regular cost and relies on the same order
  // holding for stockout probabilities. Ties on either side are fine.
  for (int j = 0; j < J; ++j)
    for (int a = 0; a < I; ++a)
      for (int b = a + 1; b < I; ++b) {
        double dr = inst.regular_cost(a, j) - inst.regular_cost(b, j);
        double dt = inst.lead_time(a, j) - inst.lead_time(b, j);
        if ((dr > 0.0 && dt < 0.0) || (dr < 0.0 && dt > 0.0)) {
          out.push_back({"cost_leadtime_order",
                         "cost/lead-time ordering violated at terminal " + std::to_string(j) +
                             " between suppliers " + std::to_string(a) + " and " +
                             std::to_string(b)});
        }
      }

  // Expedited service must strictly beat every regular rate at the terminal.
  for (int j = 0; j < J; ++j) {
    double max_r = 0.0;
    for (int i = 0; i < I; ++i) max_r = std::max(max_r, inst.regular_cost(i, j));
    for (int i = 0; i < I; ++i)
      if (!(inst.expedited_cost(i, j) > max_r))
        out.push_back({"expedited_dominance",
                       "expedited cost must strictly exceed regular cost at " +
                           idx2("supplier", i, "terminal", j)});
  }
  return out;
}

namespace {

Grid grid_from_json(const json& arr, const char* key, int rows, int cols) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != rows)
    throw ParseError(std::string(key) + ": expected " + std::to_string(rows) + " rows");
  Grid g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = arr[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ParseError(std::string(key) + ": row " + std::to_string(i) + " must have " +
                       std::to_string(cols) + " entries");
    for (int j = 0; j < cols; ++j) {
      if (!row[j].is_number())
        throw ParseError(std::string(key) + ": non-numeric entry at row " + std::to_string(i));
      g(i, j) = row[j].get<double>();
    }
  }
  return g;
}

json grid_to_json(const Grid& g) {
  json arr = json::array();
  for (int i = 0; i < g.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < g.cols(); ++j) row.push_back(g(i, j));
    arr.push_back(std::move(row));
  }
  return arr;
}

}  // namespace

Instance instance_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("instance JSON: top level must be an object");
  for (const char* key :
       {"suppliers", "terminals", "regular_cost", "expedited_cost", "lead_time", "q", "L"})
    if (!doc.contains(key)) throw ParseError(std::string("instance JSON: missing key ") + key);

  Instance inst;
  try {
    for (const json& s : doc["suppliers"])
      inst.suppliers.push_back({s.at("fixed_cost").get<double>()});
    for (const json& t : doc["terminals"])
      inst.terminals.push_back({t.at("demand_rate").get<double>(),
                                t.at("holding_cost").get<double>(),
                                t.at("max_stock").get<int>()});
    inst.q = doc["q"].get<double>();
    inst.levels = doc["L"].get<int>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("instance JSON: ") + e.what());
  }
  const int I = inst.num_suppliers();
  const int J = inst.num_terminals();
  inst.regular_cost = grid_from_json(doc["regular_cost"], "regular_cost", I, J);
  inst.expedited_cost = grid_from_json(doc["expedited_cost"], "expedited_cost", I, J);
  inst.lead_time = grid_from_json(doc["lead_time"], "lead_time", I, J);

  auto violations = validate(inst);
  if (!violations.empty()) throw ValidationError(violations.front().message);
  return inst;
}

std::string instance_to_json_text(const Instance& inst) {
  json doc;
  doc["q"] = inst.q;
  doc["L"] = inst.levels;
  doc["suppliers"] = json::array();
  for (const Supplier& s : inst.suppliers)
    doc["suppliers"].push_back({{"fixed_cost", s.fixed_cost}});
  doc["terminals"] = json::array();
  for (const Terminal& t : inst.terminals)
    doc["terminals"].push_back({{"demand_rate", t.demand_rate},
                                {"holding_cost", t.holding_cost},
                                {"max_stock", t.max_stock}});
  doc["regular_cost"] = grid_to_json(inst.regular_cost);
  doc["expedited_cost"] = grid_to_json(inst.expedited_cost);
  doc["lead_time"] = grid_to_json(inst.lead_time);
  return doc.dump(2) + "\n";
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json_text(buf.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write instance file: " + path);
  out << instance_to_json_text(inst);
}

namespace {

// Splits one CSV record; quoting is not needed for the site schema, but
// embedded spaces are common in names, so only commas separate fields.
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_field(const std::string& s, const char* what, int line_no) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("site CSV line ") + std::to_string(line_no) +
                     ": bad " + what + " value '" + s + "'");
  }
}

}  // namespace

std::vector<Site> sites_from_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("site CSV: empty file");
  auto header = split_csv_line(line);
  const std::vector<std::string> want = {"name", "lat", "lon", "city_pop", "state_pop"};
  if (header.size() != want.size())
    throw ParseError("site CSV: header must be name,lat,lon,city_pop,state_pop");
  for (size_t k = 0; k < want.size(); ++k)
    if (header[k] != want[k])
      throw ParseError("site CSV: header field '" + header[k] + "' should be '" + want[k] + "'");

  std::vector<Site> sites;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv_line(line);
    if (f.size() != 5)
      throw ParseError("site CSV line " + std::to_string(line_no) + ": expected 5 fields");
    Site s;
    s.name = f[0];
    s.lat = parse_field(f[1], "lat", line_no);
    s.lon = parse_field(f[2], "lon", line_no);
    s.city_pop = parse_field(f[3], "city_pop", line_no);
    s.state_pop = parse_field(f[4], "state_pop", line_no);
    if (s.lat < -90.0 || s.lat > 90.0 || s.lon < -180.0 || s.lon > 180.0)
      throw ParseError("site CSV line " + std::to_string(line_no) + ": coordinates out of range");
    if (s.city_pop < 0.0 || s.state_pop < 0.0)
      throw ParseError("site CSV line " + std::to_string(line_no) + ": negative population");
    sites.push_back(std::move(s));
  }
  return sites;
}

std::vector<Site> load_sites(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open site CSV: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sites_from_csv_text(buf.str());
}

}  // namespace scnd
