#include "scnd/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "scnd/cost.hpp"
#include "scnd/relaxation.hpp"

namespace scnd {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write file: " + path);
  out << text;
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

// Fixed significant-digit formatting keeps sweep CSVs identical across runs.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string report_to_json_text(const Instance& inst, const SolveResult& result) {
  json doc;
  json sol;
  json installed = json::array();
  for (int i = 0; i < inst.num_suppliers(); ++i)
    if (result.best.installed[i]) installed.push_back(i);
  sol["installed"] = std::move(installed);
  json regular = json::array(), expedited = json::array(), stock = json::array();
  for (int j = 0; j < inst.num_terminals(); ++j) {
    json chain = json::array();
    for (int i : result.best.chain_of(inst, j)) chain.push_back(i);
    regular.push_back(std::move(chain));
    expedited.push_back(result.best.expedited_of(inst, j));
    stock.push_back(result.best.stock[j]);
  }
  sol["regular"] = std::move(regular);
  sol["expedited"] = std::move(expedited);
  sol["stock"] = std::move(stock);
  doc["solution"] = std::move(sol);

  doc["costs"] = {{"CH", result.costs.holding},   {"CR", result.costs.regular},
                  {"CM", result.costs.markup},    {"CE", result.costs.emergency},
                  {"CF", result.costs.fixed},     {"C", result.costs.total},
                  {"PE", result.costs.expedited_share}};
  doc["bounds"] = {{"lower", result.lower_bound},
                   {"upper", result.upper_bound},
                   {"gap", result.gap}};
  int n = 0, total_stock = 0;
  for (std::uint8_t x : result.best.installed) n += x;
  for (int s : result.best.stock) total_stock += s;
  doc["installed_count"] = n;
  doc["total_stock"] = total_stock;
  doc["exit_reason"] = to_string(result.exit_reason);
  doc["wall_time_s"] = result.seconds;

  json iters = json::array();
  for (const IterationRecord& r : result.log)
    iters.push_back({{"iter", r.iter},
                     {"lower", r.lower},
                     {"best_lower", r.best_lower},
                     {"incumbent", r.incumbent},
                     {"tau", r.tau},
                     {"step", r.step},
                     {"seconds", r.seconds}});
  doc["iterations"] = std::move(iters);
  return doc.dump(2) + "\n";
}

std::string zero_timing(const std::string& report_json) {
  json doc = json::parse(report_json);
  doc["wall_time_s"] = 0.0;
  if (doc.contains("iterations"))
    for (json& it : doc["iterations"]) it["seconds"] = 0.0;
  return doc.dump(2) + "\n";
}

Solution solution_from_report_json_text(const Instance& inst, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report JSON: ") + e.what());
  }
  if (!doc.contains("solution")) throw ParseError("report JSON: missing solution");
  const json& sol = doc["solution"];
  for (const char* key : {"installed", "regular", "expedited", "stock"})
    if (!sol.contains(key)) throw ParseError(std::string("report JSON: missing solution.") + key);

  const int I = inst.num_suppliers();
  const int J = inst.num_terminals();
  if (static_cast<int>(sol["regular"].size()) != J ||
      static_cast<int>(sol["expedited"].size()) != J ||
      static_cast<int>(sol["stock"].size()) != J)
    throw ValidationError("report does not match instance: per-terminal arrays must have " +
                          std::to_string(J) + " entries");

  Solution s = Solution::empty(inst);
  try {
    for (const json& idx : sol["installed"]) {
      int i = idx.get<int>();
      if (i < 0 || i >= I)
        throw ValidationError("report does not match instance: supplier id " +
                              std::to_string(i) + " out of range");
      s.installed[i] = 1;
    }
    for (int j = 0; j < J; ++j) {
      const json& chain = sol["regular"][j];
      if (static_cast<int>(chain.size()) != inst.levels)
        throw ValidationError("report does not match instance: terminal " + std::to_string(j) +
                              " chain must have " + std::to_string(inst.levels) + " levels");
      for (int l = 1; l <= inst.levels; ++l) {
        int i = chain[l - 1].get<int>();
        if (i < 0 || i >= I)
          throw ValidationError("report does not match instance: supplier id " +
                                std::to_string(i) + " out of range");
        s.y(inst, i, j, l) = 1;
      }
      int ex = sol["expedited"][j].get<int>();
      if (ex < 0 || ex >= I)
        throw ValidationError("report does not match instance: supplier id " +
                              std::to_string(ex) + " out of range");
      s.z(inst, ex, j) = 1;
      s.stock[j] = sol["stock"][j].get<int>();
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("report JSON: ") + e.what());
  }
  return s;
}

std::string layout_to_json_text(const Instance& inst, const Solution& sol) {
  auto violations = check_feasible(inst, sol);
  if (!violations.empty()) throw ValidationError(violations.front().message);

  json nodes = json::array();
  for (int i = 0; i < inst.num_suppliers(); ++i)
    nodes.push_back({{"site", i},
                     {"role", "supplier"},
                     {"installed", sol.installed[i] != 0}});
  for (int j = 0; j < inst.num_terminals(); ++j)
    nodes.push_back({{"site", j}, {"role", "terminal"}, {"stock", sol.stock[j]}});

  const double qL = all_levels_fail(inst.q, inst.levels);
  json edges = json::array();
  for (int j = 0; j < inst.num_terminals(); ++j) {
    const double d = inst.terminals[j].demand_rate;
    const std::vector<int> chain = sol.chain_of(inst, j);
    double stockout_share = 0.0;
    for (int l = 1; l <= inst.levels; ++l) {
      const int i = chain[l - 1];
      const double w = level_weight(inst.q, l);
      const double p = stockout_probability(d * inst.lead_time(i, j), sol.stock[j]);
      edges.push_back({{"terminal", j},
                       {"supplier", i},
                       {"level", l},
                       {"service_probability", w},
                       {"expedite_share", w * p}});
      stockout_share += w * p;
    }
    // The expedited supplier carries the all-levels-fail orders plus every
    // stockout expedite from the regular levels.
    edges.push_back({{"terminal", j},
                     {"supplier", sol.expedited_of(inst, j)},
                     {"level", "expedited"},
                     {"service_probability", qL},
                     {"expedite_share", stockout_share + qL}});
  }
  json doc;
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<Site> sites;
  try {
    sites = load_sites(args.sites_csv);
  } catch (const std::ios_base::failure& e) {
    err << e.what() << "\n";
    return kExitIo;
  } catch (const ParseError& e) {
    if (std::string(e.what()).rfind("cannot open", 0) == 0) {
      err << e.what() << "\n";
      return kExitIo;
    }
    err << e.what() << "\n";
    return kExitValidation;
  }
  Instance inst;
  try {
    inst = generate_synthetic(sites, args.params, args.seed);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitValidation;
  }
  auto violations = validate(inst);
  if (!violations.empty()) {
    for (const auto& v : violations) err << v.message << "\n";
    return kExitValidation;
  }
  try {
    write_file(args.out_path, instance_to_json_text(inst));
  } catch (const std::ios_base::failure& e) {
    err << e.what() << "\n";
    return kExitIo;
  }
  out << "generated " << inst.num_suppliers() << " suppliers / " << inst.num_terminals()
      << " terminals (q=" << fmt(inst.q) << ", L=" << inst.levels << ") -> "
      << args.out_path << "\n";
  return kExitOk;
}

namespace {

// Shared instance loader for the commands: distinguishes unreadable files
// (I/O) from unparseable or invalid content (validation).
int load_for_command(const std::string& path, Instance& inst, std::ostream& err) {
  try {
    inst = load_instance(path);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return std::string(e.what()).rfind("cannot open", 0) == 0 ? kExitIo : kExitValidation;
  } catch (const ValidationError& e) {
    err << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  Instance inst;
  if (int rc = load_for_command(args.instance_path, inst, err)) return rc;

  SolveResult result;
  try {
    result = solve(inst, args.config);
  } catch (const std::exception& e) {
    err << "solve failed: " << e.what() << "\n";
    return kExitSolver;
  }
  try {
    write_file(args.out_path, report_to_json_text(inst, result));
  } catch (const std::ios_base::failure& e) {
    err << e.what() << "\n";
    return kExitIo;
  }
  int n = 0, total_stock = 0;
  for (std::uint8_t x : result.best.installed) n += x;
  for (int s : result.best.stock) total_stock += s;
  out << "total " << fmt(result.costs.total) << " gap " << fmt(result.gap) << " installed "
      << n << " stock " << total_stock << " iters " << result.log.size() << " ("
      << to_string(result.exit_reason) << ", " << fmt(result.seconds) << "s) -> "
      << args.out_path << "\n";
  return kExitOk;
}

namespace {

bool apply_param(GeneratorParams& p, const std::string& name, double value) {
  if (name == "q") p.q = value;
  else if (name == "h") p.h = value;
  else if (name == "c_r") p.c_r = value;
  else if (name == "c_e") p.c_e = value;
  else if (name == "c_f") p.c_f = value;
  else if (name == "c_d") p.c_d = value;
  else if (name == "c_l") p.c_l = value;
  else return false;
  return true;
}

std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

}  // namespace

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  {
    GeneratorParams probe = args.base;
    if (!apply_param(probe, args.param, 0.0)) {
      err << "unknown sweep parameter '" << args.param
          << "' (expected one of q h c_r c_e c_f c_d c_l)\n";
      return kExitValidation;
    }
  }
  if (args.values.empty()) {
    err << "sweep needs at least one value\n";
    return kExitValidation;
  }
  std::vector<Site> sites;
  try {
    sites = load_sites(args.sites_csv);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return std::string(e.what()).rfind("cannot open", 0) == 0 ? kExitIo : kExitValidation;
  }

  std::ostringstream csv;
  csv << "# one solve per row; instances regenerated with the same seed, so the\n";
  csv << "# underlying expedited-markup draws u_ij are identical across rows (a c_e\n";
  csv << "# sweep rescales e = (1 + c_e u) max_r by construction)\n";
  csv << "value,CH,CR,CM,CE,CF,C,PE,S,N,gap,error\n";

  for (double value : args.values) {
    GeneratorParams params = args.base;
    apply_param(params, args.param, value);
    try {
      Instance inst = generate_synthetic(sites, params, args.seed);
      auto violations = validate(inst);
      if (!violations.empty()) throw ValidationError(violations.front().message);
      SolveResult r = solve(inst, args.config);
      int n = 0, total_stock = 0;
      for (std::uint8_t x : r.best.installed) n += x;
      for (int s : r.best.stock) total_stock += s;
      csv << fmt(value) << "," << fmt(r.costs.holding) << "," << fmt(r.costs.regular) << ","
          << fmt(r.costs.markup) << "," << fmt(r.costs.emergency) << ","
          << fmt(r.costs.fixed) << "," << fmt(r.costs.total) << ","
          << fmt(r.costs.expedited_share) << "," << total_stock << "," << n << ","
          << fmt(r.gap) << ",\n";
    } catch (const std::exception& e) {
      csv << fmt(value) << ",,,,,,,,,,," << csv_safe(e.what()) << "\n";
    }
  }
  try {
    write_file(args.out_csv, csv.str());
  } catch (const std::ios_base::failure& e) {
    err << e.what() << "\n";
    return kExitIo;
  }
  out << "swept " << args.param << " over " << args.values.size() << " values -> "
      << args.out_csv << "\n";
  return kExitOk;
}

int cmd_layout(const LayoutArgs& args, std::ostream& out, std::ostream& err) {
  Instance inst;
  if (int rc = load_for_command(args.instance_path, inst, err)) return rc;

  std::string report_text;
  try {
    report_text = read_file(args.report_path);
  } catch (const std::ios_base::failure& e) {
    err << e.what() << "\n";
    return kExitIo;
  }
  std::string layout;
  try {
    Solution sol = solution_from_report_json_text(inst, report_text);
    layout = layout_to_json_text(inst, sol);
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitValidation;
  }
  try {
    write_file(args.out_path, layout);
  } catch (const std::ios_base::failure& e) {
    err << e.what() << "\n";
    return kExitIo;
  }
  out << "layout with " << (inst.num_suppliers() + inst.num_terminals()) << " nodes and "
      << inst.num_terminals() * (inst.levels + 1) << " edges -> " << args.out_path << "\n";
  return kExitOk;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  SimStats stats;
  try {
    stats = simulate_base_stock(args.config);
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitValidation;
  }
  const double analytic =
      stockout_probability(args.config.demand * args.config.lead, args.config.stock);
  double z = 0.0;
  if (stats.standard_error > 0.0)
    z = (stats.expedite_fraction - analytic) / stats.standard_error;
  else if (stats.expedite_fraction != analytic)
    z = std::numeric_limits<double>::infinity();

  json doc;
  doc["demand"] = args.config.demand;
  doc["lead"] = args.config.lead;
  doc["stock"] = args.config.stock;
  doc["lead_dist"] = args.config.lead_dist == LeadTimeDist::kDeterministic
                         ? "deterministic"
                         : "exponential";
  doc["horizon_events"] = args.config.horizon_events;
  doc["seed"] = args.config.seed;
  doc["events"] = stats.events;
  doc["expedited_events"] = stats.expedited_events;
  doc["expedite_fraction"] = stats.expedite_fraction;
  doc["standard_error"] = stats.standard_error;
  doc["analytic"] = analytic;
  doc["z"] = z;
  const std::string text = doc.dump(2) + "\n";
  out << text;
  if (!args.out_path.empty()) {
    try {
      write_file(args.out_path, text);
    } catch (const std::ios_base::failure& e) {
      err << e.what() << "\n";
      return kExitIo;
    }
  }
  return kExitOk;
}

}  // namespace scnd
