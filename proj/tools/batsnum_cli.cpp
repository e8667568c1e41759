// batsnum command line: solve, simulate, reproduce.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "batsnum/batsnum.h"

namespace {

namespace fs = std::filesystem;

// Exit codes follow the library status: 2 validation, 3 non-convergence,
// 4 infeasible; anything else is 1.
int exit_code(bn_status s) {
  switch (s) {
    case BN_OK: return 0;
    case BN_ERR_VALIDATION: return 2;
    case BN_ERR_NONCONVERGENCE: return 3;
    case BN_ERR_INFEASIBLE: return 4;
    default: return 1;
  }
}

int report(bn_status s) {
  std::cerr << "error: " << bn_last_error() << '\n';
  return exit_code(s);
}

struct StringDeleter {
  void operator()(char* p) const { bn_string_free(p); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

std::string out_dir() {
  const char* env = std::getenv("BATSNUM_OUT_DIR");
  return env && *env ? env : ".";
}

fs::path output_path(const std::string& explicit_path, const std::string& default_name) {
  if (!explicit_path.empty()) return explicit_path;
  fs::path dir = out_dir();
  fs::create_directories(dir);
  return dir / default_name;
}

bool write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path.string() << '\n';
    return false;
  }
  out << text;
  return true;
}

struct SolveArgs {
  std::string mode = "two-step";
  int case_id = 1;
  std::string loss = "iid";
  std::string scenario;
  std::string out;
};

int run_solve(const SolveArgs& a) {
  bn_scenario* sc = nullptr;
  const std::string source = a.scenario.empty() ? "case" + std::to_string(a.case_id) : a.scenario;
  if (bn_status s = bn_scenario_load(source.c_str(), a.loss.c_str(), &sc); s != BN_OK) return report(s);
  std::unique_ptr<bn_scenario, void (*)(bn_scenario*)> scenario(sc, bn_scenario_free);

  bn_solution* sol = nullptr;
  const bn_status solved = bn_solve(scenario.get(), a.mode.c_str(), &sol);
  if (!sol) return report(solved);
  std::unique_ptr<bn_solution, void (*)(bn_solution*)> solution(sol, bn_solution_free);

  char* json = nullptr;
  if (bn_status s = bn_solution_to_json(solution.get(), &json); s != BN_OK) return report(s);
  OwnedString text(json);
  const std::string stem = fs::path(source).stem().string();
  const fs::path path = output_path(a.out, stem + "-" + a.mode + "-" + a.loss + ".json");
  if (!write_file(path, std::string(text.get()) + "\n")) return 1;

  bn_solution_summary sum;
  bn_solution_summary_get(solution.get(), &sum);
  bn_flow_summary f1{}, f2{};
  bn_solution_flow(solution.get(), 0, &f1);
  if (sum.flows > 1) bn_solution_flow(solution.get(), 1, &f2);
  std::printf("case,U1,U2,U_tilde,kappa,mode,loss_family\n");
  std::printf("%s,%.6f,%.6f,%.6f,%.4f,%s,%s\n", stem.c_str(), f1.utility, sum.flows > 1 ? f2.utility : 0.0,
              sum.upper_bound, 100.0 * sum.kappa, a.mode.c_str(), a.loss.c_str());
  for (size_t k = 0; k < sum.warnings; ++k) {
    const char* w = nullptr;
    if (bn_solution_warning(solution.get(), k, &w) == BN_OK) std::cerr << "warning: " << w << '\n';
  }
  std::cerr << "wrote " << path.string() << '\n';
  if (solved != BN_OK) return report(solved);
  return 0;
}

struct SimulateArgs {
  std::string solution;
  long long slots = 1000000;
  unsigned long long seed = 1;
  int frame = 1000;
  bool systematic = false;
  double alpha_scale = 1.0;
  int sample_every = 1;
  int csv_stride = 1;
  std::string out;
  std::string csv;
};

int run_simulate(const SimulateArgs& a) {
  std::ifstream in(a.solution);
  if (!in) {
    std::cerr << "error: cannot open " << a.solution << '\n';
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  bn_solution* sol = nullptr;
  if (bn_status s = bn_solution_from_json(buf.str().c_str(), &sol); s != BN_OK) return report(s);
  std::unique_ptr<bn_solution, void (*)(bn_solution*)> solution(sol, bn_solution_free);

  bn_sim_options opt;
  bn_sim_options_default(&opt);
  opt.slots = a.slots;
  opt.seed = a.seed;
  opt.frame_length = a.frame;
  opt.systematic = a.systematic ? 1 : 0;
  opt.alpha_scale = a.alpha_scale;
  opt.buffer_sample_every = a.sample_every;
  bn_sim_report* rep = nullptr;
  if (bn_status s = bn_simulate(solution.get(), &opt, &rep); s != BN_OK) return report(s);
  std::unique_ptr<bn_sim_report, void (*)(bn_sim_report*)> sim(rep, bn_sim_report_free);

  char* json = nullptr;
  if (bn_status s = bn_sim_report_to_json(sim.get(), &json); s != BN_OK) return report(s);
  OwnedString text(json);
  const std::string stem = fs::path(a.solution).stem().string();
  const fs::path path = output_path(a.out, stem + "-sim.json");
  if (!write_file(path, std::string(text.get()) + "\n")) return 1;
  const fs::path csv = a.csv.empty() ? path.parent_path() / (stem + "-buffers.csv") : fs::path(a.csv);
  if (bn_status s = bn_sim_report_write_buffer_csv(sim.get(), csv.string().c_str(), a.csv_stride); s != BN_OK)
    return report(s);

  bn_solution_summary sum;
  bn_solution_summary_get(solution.get(), &sum);
  int stable = 0;
  bn_sim_report_stable(sim.get(), &stable);
  std::printf("flow,alpha,emitted,completed,mean_rank,rank_stderr,utility\n");
  for (size_t i = 0; i < sum.flows; ++i) {
    bn_sim_flow f;
    bn_sim_report_flow(sim.get(), i, &f);
    std::printf("%zu,%.8f,%lld,%lld,%.4f,%.4f,%.6f\n", i + 1, f.alpha, static_cast<long long>(f.emitted),
                static_cast<long long>(f.completed), f.mean_rank, f.rank_stderr, f.utility);
  }
  std::printf("buffers %s\n", stable ? "stable" : "growing");
  std::cerr << "wrote " << path.string() << " and " << csv.string() << '\n';
  return 0;
}

struct ReproduceArgs {
  bool tables = false;
  std::string loss = "both";
  unsigned workers = 0;
  std::string out;
};

int run_reproduce(const ReproduceArgs& a) {
  if (!a.tables) {
    std::cerr << "error: nothing to reproduce (pass --tables)\n";
    return 2;
  }
  const std::string families = a.loss == "both" ? "iid,ge" : a.loss;
  char* csv = nullptr;
  if (bn_status s = bn_reproduce_tables(families.c_str(), a.workers, &csv); s != BN_OK) return report(s);
  OwnedString text(csv);
  const std::string name = a.loss == "both" ? "tables.csv" : "tables-" + a.loss + ".csv";
  const fs::path path = output_path(a.out, name);
  if (!write_file(path, text.get())) return 1;
  std::fputs(text.get(), stdout);
  std::cerr << "wrote " << path.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network utility maximization for batched network coding"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bn_version()));

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve one scenario and write a run report");
  s->add_option("--mode", solve.mode, "nap, two-step, up or pd")
      ->check(CLI::IsMember({"nap", "two-step", "up", "pd"}));
  s->add_option("--case", solve.case_id, "Preset case number")->check(CLI::Range(1, 11));
  s->add_option("--loss", solve.loss, "Loss family for presets")->check(CLI::IsMember({"iid", "ge"}));
  s->add_option("--scenario", solve.scenario, "Scenario JSON file (overrides --case)");
  s->add_option("-o,--out", solve.out, "Output file");

  SimulateArgs sim;
  auto* m = app.add_subcommand("simulate", "Simulate a solved run report");
  m->add_option("--solution", sim.solution, "Run report written by solve")->required();
  m->add_option("--slots", sim.slots, "Number of timeslots")->check(CLI::NonNegativeNumber);
  m->add_option("--seed", sim.seed, "Random seed");
  m->add_option("--frame", sim.frame, "TDMA frame length")->check(CLI::PositiveNumber);
  m->add_flag("--systematic", sim.systematic, "Systematic instead of uniform recoding");
  m->add_option("--alpha-scale", sim.alpha_scale, "Scale the solved batch rates")->check(CLI::PositiveNumber);
  m->add_option("--sample-every", sim.sample_every, "Buffer sampling period")->check(CLI::PositiveNumber);
  m->add_option("--csv-stride", sim.csv_stride, "Write every k-th buffer sample")->check(CLI::PositiveNumber);
  m->add_option("-o,--out", sim.out, "Output file for the report");
  m->add_option("--csv", sim.csv, "Output file for the buffer series");

  ReproduceArgs rep;
  auto* r = app.add_subcommand("reproduce", "Regenerate the comparison tables");
  r->add_flag("--tables", rep.tables, "All presets in nap, two-step and up modes");
  r->add_option("--loss", rep.loss, "iid, ge or both")->check(CLI::IsMember({"iid", "ge", "both"}));
  r->add_option("--workers", rep.workers, "Worker threads (0 = all cores)");
  r->add_option("-o,--out", rep.out, "Output CSV file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (s->parsed()) return run_solve(solve);
    if (m->parsed()) return run_simulate(sim);
    return run_reproduce(rep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
