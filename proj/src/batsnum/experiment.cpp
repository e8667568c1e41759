#include "batsnum/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <thread>

#include "batsnum/errors.hpp"
#include "batsnum/primal_dual.hpp"
#include "batsnum/solvers.hpp"
#include "batsnum/two_step.hpp"

namespace batsnum {

SolveMode parse_mode(const std::string& s) {
  if (s == "nap") return SolveMode::nap;
  if (s == "two-step") return SolveMode::two_step;
  if (s == "up") return SolveMode::up;
  if (s == "pd") return SolveMode::pd;
  throw ValidationError("mode", "expected nap, two-step, up or pd, got '" + s + "'");
}

const char* to_string(SolveMode m) {
  switch (m) {
    case SolveMode::nap: return "nap";
    case SolveMode::two_step: return "two-step";
    case SolveMode::up: return "up";
    case SolveMode::pd: return "pd";
  }
  return "nap";
}

LossFamily parse_loss_family(const std::string& s) {
  if (s == "iid") return LossFamily::iid;
  if (s == "ge") return LossFamily::ge;
  throw ValidationError("loss", "expected iid or ge, got '" + s + "'");
}

const char* to_string(LossFamily f) { return f == LossFamily::iid ? "iid" : "ge"; }

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

RunReport run_solve(const Scenario& scenario, SolveMode mode) {
  RunReport r;
  r.scenario = scenario;
  Stopwatch clock;
  Instance inst(scenario);
  r.timings.emplace_back("prepare", clock.lap());
  Solution up = solve_up(inst);
  attach_upper_bound(up, up);
  r.timings.emplace_back("up", clock.lap());
  if (mode == SolveMode::up) {
    r.solution = std::move(up);
    return r;
  }
  Solution nap = solve_nap(inst);
  r.timings.emplace_back("nap", clock.lap());
  Solution out = std::move(nap);
  if (mode == SolveMode::two_step || mode == SolveMode::pd) {
    out = two_step_from(inst, out);
    r.timings.emplace_back("two-step", clock.lap());
  }
  if (mode == SolveMode::pd) {
    out = primal_dual_adaptive(inst, out);
    r.timings.emplace_back("pd", clock.lap());
  }
  attach_upper_bound(out, up);
  r.solution = std::move(out);
  return r;
}

Json to_json(const RunReport& r) {
  Json j;
  j["scenario"] = to_json(r.scenario);
  j["solution"] = to_json(r.solution, r.scenario.network);
  if (r.simulation) j["simulation"] = to_json(*r.simulation);
  Json t = Json::object();
  for (const auto& [k, v] : r.timings) t[k] = v;
  j["timings"] = t;
  return j;
}

RunReport run_report_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("", "expected an object");
  if (!j.contains("scenario")) throw ValidationError("scenario", "required field missing");
  if (!j.contains("solution")) throw ValidationError("solution", "required field missing");
  RunReport r;
  try {
    r.scenario = scenario_from_json(j.at("scenario"));
  } catch (const ValidationError& e) {
    const std::string inner = e.path().empty() ? "scenario" : "scenario." + e.path();
    std::string what = e.what();
    if (!e.path().empty()) what = what.substr(e.path().size() + 2);
    throw ValidationError(inner, what);
  }
  r.solution = solution_from_json(j.at("solution"), r.scenario.network);
  if (r.solution.flows.size() != r.scenario.flows.size())
    throw ValidationError("solution.flows", "one entry per scenario flow required");
  return r;
}

std::vector<TableRow> reproduce_tables(const std::vector<LossFamily>& families, unsigned workers,
                                       const std::function<void(const std::string&)>& progress) {
  struct Job {
    std::string name;
    LossFamily family;
    std::vector<TableRow> rows;
  };
  std::vector<Job> jobs;
  for (LossFamily f : families)
    for (const auto& name : preset_names()) jobs.push_back({name, f, {}});

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      Job& job = jobs[k];
      try {
        Instance inst(preset_scenario(job.name, job.family));
        Solution up = solve_up(inst);
        attach_upper_bound(up, up);
        Solution nap = solve_nap(inst);
        Solution ts = two_step_from(inst, nap);
        attach_upper_bound(nap, up);
        attach_upper_bound(ts, up);
        for (const Solution* s : {&nap, &ts, &up}) {
          TableRow row;
          row.scenario = job.name;
          row.U1 = s->flows.size() > 0 ? s->flows[0].utility : 0.0;
          row.U2 = s->flows.size() > 1 ? s->flows[1].utility : 0.0;
          row.U_tilde = up.utility;
          row.kappa = 100.0 * s->kappa;
          row.mode = s->mode;
          row.loss_family = to_string(job.family);
          job.rows.push_back(row);
        }
        if (progress) {
          std::lock_guard<std::mutex> lock(mu);
          progress(job.name + " " + to_string(job.family) + " done");
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<TableRow> rows;
  for (auto& job : jobs)
    for (auto& r : job.rows) rows.push_back(std::move(r));
  return rows;
}

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  out << "case,U1,U2,U_tilde,kappa,mode,loss_family\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.4f,%s,%s\n", r.scenario.c_str(), r.U1, r.U2,
                  r.U_tilde, r.kappa, r.mode.c_str(), r.loss_family.c_str());
    out << buf;
  }
}

}  // namespace batsnum
