#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scnd/generator.hpp"
#include "scnd/instance.hpp"
#include "scnd/oracle.hpp"
#include "scnd/solver.hpp"

namespace scnd {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitIo = 3;

// Solve report serialization (schema in docs/formats.md). Timing fields are
// the only part that varies between identical runs; zero_timing strips them
// for byte-comparison.
std::string report_to_json_text(const Instance& inst, const SolveResult& result);
std::string zero_timing(const std::string& report_json);

// Extracts the design from a serialized report; throws ParseError on
// malformed input or ValidationError when shapes disagree with the instance.
Solution solution_from_report_json_text(const Instance& inst, const std::string& text);

// Node/edge view of a solved design for plotting: one node per supplier and
// terminal (installed flag, stock), and per terminal one edge per regular
// level (service probability, stockout expedite share) plus one edge to the
// expedited supplier (all-levels-fail probability, total expedite share).
std::string layout_to_json_text(const Instance& inst, const Solution& sol);

struct GenerateArgs {
  std::string sites_csv;
  std::string out_path;
  GeneratorParams params;
  std::uint64_t seed = 1;
};

struct SolveArgs {
  std::string instance_path;
  std::string out_path;
  SolverConfig config;
};

// One row per value: the named generator scalar is swept, the instance is
// regenerated with the same seed (so the underlying expedited-markup draws are
// reused; sweeping c_e rescales them by construction), and a solve runs.
// Failed rows keep their slot with the error column filled.
struct SweepArgs {
  std::string sites_csv;
  std::string out_csv;
  std::string param;           // one of: q h c_r c_e c_f c_d c_l
  std::vector<double> values;
  GeneratorParams base;
  std::uint64_t seed = 1;
  SolverConfig config;
};

struct LayoutArgs {
  std::string instance_path;
  std::string report_path;
  std::string out_path;
};

struct SimulateArgs {
  SimConfig config;
  std::string out_path;  // empty: print to stdout only
};

int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err);
int cmd_layout(const LayoutArgs& args, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);

}  // namespace scnd
