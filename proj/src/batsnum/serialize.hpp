#pragma once

// JSON documents for scenarios, loss models, policies, solutions and
// simulation reports. Readers throw ValidationError with a field path.

#include <string>

#include <nlohmann/json.hpp>

#include "batsnum/loss.hpp"
#include "batsnum/policy.hpp"
#include "batsnum/scenario.hpp"
#include "batsnum/sim.hpp"
#include "batsnum/solution.hpp"

namespace batsnum {

using Json = nlohmann::json;

Json to_json(const Scenario& s);
// Parses, fills derived interference sets and validates.
Scenario scenario_from_json(const Json& j);

Json to_json(const BatchLossModel& m);
BatchLossModel loss_model_from_json(const Json& j, const std::string& path = "");

// {"type":"nonadaptive","m":m} or {"type":"adaptive","rows":[[[m,p],...],...]}
// with one sparse row per rank.
Json to_json(const RecodingPolicy& p);
RecodingPolicy policy_from_json(const Json& j, const std::string& path = "");

// Schedules are written as link-name lists, so the network is needed.
Json to_json(const Solution& s, const Network& network);
Solution solution_from_json(const Json& j, const Network& network);

// Buffer series are summarized (final value, peak, slope); the full series
// goes to CSV.
Json to_json(const SimReport& r);

Json parse_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

// A preset name ("case1".."case11") or a path to a scenario document.
Scenario load_scenario(const std::string& name_or_path, LossFamily family = LossFamily::iid);

}  // namespace batsnum
