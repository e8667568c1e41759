#include "batsnum/batsnum.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "batsnum/errors.hpp"
#include "batsnum/experiment.hpp"
#include "batsnum/fixed_policy.hpp"
#include "batsnum/serialize.hpp"
#include "batsnum/sim.hpp"

struct bn_scenario {
  batsnum::Scenario value;
};

struct bn_solution {
  batsnum::RunReport report;
};

struct bn_sim_report {
  batsnum::SimReport value;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_path;

bn_status fail(bn_status code, const std::string& msg, const std::string& path = "") {
  last_error = msg;
  last_path = path;
  return code;
}

// Maps exceptions from the core onto status codes.
template <class F>
bn_status guarded(F&& f) {
  last_error.clear();
  last_path.clear();
  try {
    return f();
  } catch (const batsnum::ValidationError& e) {
    return fail(BN_ERR_VALIDATION, e.what(), e.path());
  } catch (const batsnum::InfeasibleError& e) {
    std::ostringstream msg;
    msg << e.what();
    if (!e.certificate().empty()) {
      msg << " (certificate y =";
      for (double y : e.certificate()) msg << ' ' << y;
      msg << ')';
    }
    return fail(BN_ERR_INFEASIBLE, msg.str());
  } catch (const batsnum::ParameterError& e) {
    return fail(BN_ERR_ARGUMENT, e.what());
  } catch (const batsnum::SizeError& e) {
    return fail(BN_ERR_VALIDATION, e.what());
  } catch (const std::exception& e) {
    return fail(BN_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BN_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bn_status null_arg(const char* what) { return fail(BN_ERR_ARGUMENT, std::string(what) + " is null"); }

}  // namespace

extern "C" {

const char* bn_version(void) { return "0.1.0"; }
const char* bn_last_error(void) { return last_error.c_str(); }
const char* bn_last_error_path(void) { return last_path.c_str(); }
void bn_string_free(char* s) { delete[] s; }

bn_status bn_scenario_preset(const char* name, const char* loss_family, bn_scenario** out) {
  if (!name || !out) return null_arg("argument");
  return guarded([&] {
    const auto fam = batsnum::parse_loss_family(loss_family ? loss_family : "iid");
    *out = new bn_scenario{batsnum::preset_scenario(name, fam)};
    return BN_OK;
  });
}

bn_status bn_scenario_from_json(const char* json, bn_scenario** out) {
  if (!json || !out) return null_arg("argument");
  return guarded([&] {
    batsnum::Json j;
    try {
      j = batsnum::Json::parse(json);
    } catch (const batsnum::Json::parse_error& e) {
      throw batsnum::ValidationError("", std::string("malformed JSON: ") + e.what());
    }
    *out = new bn_scenario{batsnum::scenario_from_json(j)};
    return BN_OK;
  });
}

bn_status bn_scenario_load(const char* name_or_path, const char* loss_family, bn_scenario** out) {
  if (!name_or_path || !out) return null_arg("argument");
  return guarded([&] {
    const auto fam = batsnum::parse_loss_family(loss_family ? loss_family : "iid");
    *out = new bn_scenario{batsnum::load_scenario(name_or_path, fam)};
    return BN_OK;
  });
}

bn_status bn_scenario_to_json(const bn_scenario* s, char** out) {
  if (!s || !out) return null_arg("argument");
  return guarded([&] {
    *out = dup_string(batsnum::to_json(s->value).dump(2));
    return BN_OK;
  });
}

bn_status bn_scenario_counts(const bn_scenario* s, size_t* nodes, size_t* links, size_t* flows) {
  if (!s) return null_arg("scenario");
  if (nodes) *nodes = s->value.network.nodes.size();
  if (links) *links = s->value.network.links.size();
  if (flows) *flows = s->value.flows.size();
  return BN_OK;
}

void bn_scenario_free(bn_scenario* s) { delete s; }

bn_status bn_solve(const bn_scenario* s, const char* mode, bn_solution** out) {
  if (!s || !mode || !out) return null_arg("argument");
  return guarded([&] {
    const auto m = batsnum::parse_mode(mode);
    *out = new bn_solution{batsnum::run_solve(s->value, m)};
    if ((*out)->report.solution.status == batsnum::SolveStatus::iteration_cap)
      return fail(BN_ERR_NONCONVERGENCE, "solver stopped at its iteration cap");
    return BN_OK;
  });
}

bn_status bn_solution_to_json(const bn_solution* sol, char** out) {
  if (!sol || !out) return null_arg("argument");
  return guarded([&] {
    *out = dup_string(batsnum::to_json(sol->report).dump(2));
    return BN_OK;
  });
}

bn_status bn_solution_from_json(const char* json, bn_solution** out) {
  if (!json || !out) return null_arg("argument");
  return guarded([&] {
    batsnum::Json j;
    try {
      j = batsnum::Json::parse(json);
    } catch (const batsnum::Json::parse_error& e) {
      throw batsnum::ValidationError("", std::string("malformed JSON: ") + e.what());
    }
    *out = new bn_solution{batsnum::run_report_from_json(j)};
    return BN_OK;
  });
}

bn_status bn_solution_summary_get(const bn_solution* sol, bn_solution_summary* out) {
  if (!sol || !out) return null_arg("argument");
  const auto& s = sol->report.solution;
  out->utility = s.utility;
  out->upper_bound = s.upper_bound;
  out->kappa = s.kappa;
  out->status = static_cast<int>(s.status);
  out->iterations = s.iterations;
  out->flows = s.flows.size();
  out->warnings = s.warnings.size();
  return BN_OK;
}

bn_status bn_solution_flow(const bn_solution* sol, size_t flow, bn_flow_summary* out) {
  if (!sol || !out) return null_arg("argument");
  const auto& flows = sol->report.solution.flows;
  if (flow >= flows.size()) return fail(BN_ERR_ARGUMENT, "flow index out of range");
  const auto& f = flows[flow];
  *out = {f.alpha, f.eta, f.expected_rank, f.utility, f.cutset};
  return BN_OK;
}

bn_status bn_solution_warning(const bn_solution* sol, size_t index, const char** out) {
  if (!sol || !out) return null_arg("argument");
  const auto& w = sol->report.solution.warnings;
  if (index >= w.size()) return fail(BN_ERR_ARGUMENT, "warning index out of range");
  *out = w[index].c_str();
  return BN_OK;
}

bn_status bn_solution_check(const bn_solution* sol) {
  if (!sol) return null_arg("solution");
  return guarded([&] {
    batsnum::check_feasible(sol->report.scenario, sol->report.solution);
    return BN_OK;
  });
}

void bn_solution_free(bn_solution* sol) { delete sol; }

void bn_sim_options_default(bn_sim_options* opt) {
  if (!opt) return;
  const batsnum::SimOptions d;
  opt->slots = d.slots;
  opt->seed = d.seed;
  opt->frame_length = d.frame_length;
  opt->systematic = d.mode == batsnum::RecodingMode::systematic;
  opt->buffer_sample_every = d.buffer_sample_every;
  opt->alpha_scale = d.alpha_scale;
}

bn_status bn_simulate(const bn_solution* sol, const bn_sim_options* opt, bn_sim_report** out) {
  if (!sol || !out) return null_arg("argument");
  return guarded([&] {
    bn_sim_options o;
    bn_sim_options_default(&o);
    if (opt) o = *opt;
    batsnum::SimOptions so;
    so.slots = o.slots;
    so.seed = o.seed;
    so.frame_length = o.frame_length;
    so.mode = o.systematic ? batsnum::RecodingMode::systematic : batsnum::RecodingMode::uniform;
    so.buffer_sample_every = o.buffer_sample_every;
    so.alpha_scale = o.alpha_scale;
    *out = new bn_sim_report{batsnum::run_simulation(sol->report.scenario, sol->report.solution, so)};
    return BN_OK;
  });
}

bn_status bn_sim_report_to_json(const bn_sim_report* r, char** out) {
  if (!r || !out) return null_arg("argument");
  return guarded([&] {
    *out = dup_string(batsnum::to_json(r->value).dump(2));
    return BN_OK;
  });
}

bn_status bn_sim_report_flow(const bn_sim_report* r, size_t flow, bn_sim_flow* out) {
  if (!r || !out) return null_arg("argument");
  const auto& flows = r->value.flows;
  if (flow >= flows.size()) return fail(BN_ERR_ARGUMENT, "flow index out of range");
  const auto& f = flows[flow];
  *out = {f.alpha, f.emitted, f.completed, f.mean_rank, f.rank_stderr, f.utility};
  return BN_OK;
}

bn_status bn_sim_report_write_buffer_csv(const bn_sim_report* r, const char* path, int stride) {
  if (!r || !path) return null_arg("argument");
  return guarded([&] {
    std::ofstream out(path);
    if (!out) return fail(BN_ERR_ARGUMENT, std::string("cannot write ") + path);
    batsnum::write_buffer_csv(out, r->value, stride);
    return BN_OK;
  });
}

bn_status bn_sim_report_stable(const bn_sim_report* r, int* stable) {
  if (!r || !stable) return null_arg("argument");
  *stable = batsnum::buffer_stability(r->value).stable ? 1 : 0;
  return BN_OK;
}

void bn_sim_report_free(bn_sim_report* r) { delete r; }

bn_status bn_reproduce_tables(const char* loss_families, unsigned workers, char** csv_out) {
  if (!loss_families || !csv_out) return null_arg("argument");
  return guarded([&] {
    std::vector<batsnum::LossFamily> fams;
    std::stringstream ss(loss_families);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) fams.push_back(batsnum::parse_loss_family(item));
    if (fams.empty()) return fail(BN_ERR_ARGUMENT, "no loss family given");
    const auto rows = batsnum::reproduce_tables(fams, workers);
    std::ostringstream out;
    batsnum::write_table_csv(out, rows);
    *csv_out = dup_string(out.str());
    return BN_OK;
  });
}

}  // extern "C"
