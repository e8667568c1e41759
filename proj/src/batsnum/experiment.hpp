#pragma once

// Orchestration: solve a scenario in one of the modes, attach the bound,
// optionally simulate, and regenerate the comparison tables.

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "batsnum/scenario.hpp"
#include "batsnum/serialize.hpp"
#include "batsnum/sim.hpp"
#include "batsnum/solution.hpp"

namespace batsnum {

enum class SolveMode { nap, two_step, up, pd };

SolveMode parse_mode(const std::string& s);  // nap, two-step, up, pd
const char* to_string(SolveMode m);
LossFamily parse_loss_family(const std::string& s);  // iid, ge
const char* to_string(LossFamily f);

struct RunReport {
  Scenario scenario;
  Solution solution;  // upper bound attached
  std::optional<SimReport> simulation;
  std::vector<std::pair<std::string, double>> timings;  // seconds
};

// Runs the requested mode plus whatever it depends on (the bound always;
// NAP for two-step; NAP and two-step for pd).
RunReport run_solve(const Scenario& scenario, SolveMode mode);

Json to_json(const RunReport& r);
// Accepts a run report document (scenario + solution).
RunReport run_report_from_json(const Json& j);

struct TableRow {
  std::string scenario;
  double U1 = 0.0;
  double U2 = 0.0;
  double U_tilde = 0.0;
  double kappa = 0.0;  // percent
  std::string mode;
  std::string loss_family;
};

// All presets x families x {nap, two-step, up}. Jobs are independent and
// spread over `workers` threads (0 = hardware concurrency); row order does
// not depend on scheduling.
std::vector<TableRow> reproduce_tables(const std::vector<LossFamily>& families, unsigned workers = 0,
                                       const std::function<void(const std::string&)>& progress = {});

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows);

}  // namespace batsnum
