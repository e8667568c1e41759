#ifndef BATSNUM_BATSNUM_H
#define BATSNUM_BATSNUM_H

/*
 * C interface to the batsnum library: scenario loading, the NUM solvers,
 * the packet-level simulator and table reproduction.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call returns a bn_status; on failure bn_last_error() describes the
 * problem for the calling thread. Strings returned through char** outputs
 * are owned by the caller and released with bn_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(BATSNUM_BUILDING_LIBRARY)
#define BN_API __attribute__((visibility("default")))
#else
#define BN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bn_status {
  BN_OK = 0,
  BN_ERR_ARGUMENT = 1,         /* null pointer, index out of range, bad numeric option */
  BN_ERR_VALIDATION = 2,       /* malformed document, unknown preset, mode or loss family */
  BN_ERR_NONCONVERGENCE = 3,   /* solver hit its iteration cap; result still returned */
  BN_ERR_INFEASIBLE = 4,       /* solution violates the rate region */
  BN_ERR_INTERNAL = 5
} bn_status;

typedef struct bn_scenario bn_scenario;
typedef struct bn_solution bn_solution;
typedef struct bn_sim_report bn_sim_report;

typedef struct bn_solution_summary {
  double utility;      /* sum of per-flow log utilities */
  double upper_bound;  /* utility of the cut-set bound problem */
  double kappa;        /* exp((utility - upper_bound) / flows) */
  int status;          /* 0 converged, 1 iteration cap, 2 reverted to start */
  int iterations;
  size_t flows;
  size_t warnings;
} bn_solution_summary;

typedef struct bn_flow_summary {
  double alpha;          /* batches per slot */
  double eta;
  double expected_rank;  /* analytic, at the sink */
  double utility;
  double cutset;
} bn_flow_summary;

typedef struct bn_sim_flow {
  double alpha;
  int64_t emitted;
  int64_t completed;
  double mean_rank;
  double rank_stderr;
  double utility;
} bn_sim_flow;

BN_API const char* bn_version(void);
/* Message of the last failure on this thread; "" if none. */
BN_API const char* bn_last_error(void);
/* Field path of the last validation failure; "" if not applicable. */
BN_API const char* bn_last_error_path(void);
BN_API void bn_string_free(char* s);

/* `loss_family` is "iid" or "ge" and only affects presets. */
BN_API bn_status bn_scenario_preset(const char* name, const char* loss_family, bn_scenario** out);
BN_API bn_status bn_scenario_from_json(const char* json, bn_scenario** out);
/* A preset name or the path of a scenario document. */
BN_API bn_status bn_scenario_load(const char* name_or_path, const char* loss_family, bn_scenario** out);
BN_API bn_status bn_scenario_to_json(const bn_scenario* s, char** out);
BN_API bn_status bn_scenario_counts(const bn_scenario* s, size_t* nodes, size_t* links, size_t* flows);
BN_API void bn_scenario_free(bn_scenario* s);

/* `mode` is "nap", "two-step", "up" or "pd". On BN_ERR_NONCONVERGENCE the
 * solution is still stored in *out. */
BN_API bn_status bn_solve(const bn_scenario* s, const char* mode, bn_solution** out);
/* Run report document: {"scenario": ..., "solution": ..., "timings": ...}. */
BN_API bn_status bn_solution_to_json(const bn_solution* sol, char** out);
BN_API bn_status bn_solution_from_json(const char* json, bn_solution** out);
BN_API bn_status bn_solution_summary_get(const bn_solution* sol, bn_solution_summary* out);
BN_API bn_status bn_solution_flow(const bn_solution* sol, size_t flow, bn_flow_summary* out);
BN_API bn_status bn_solution_warning(const bn_solution* sol, size_t index, const char** out);
/* Checks the rate vector and schedule against the scenario. */
BN_API bn_status bn_solution_check(const bn_solution* sol);
BN_API void bn_solution_free(bn_solution* sol);

typedef struct bn_sim_options {
  int64_t slots;
  uint64_t seed;
  int frame_length;
  int systematic;          /* 0 uniform recoding, 1 systematic */
  int buffer_sample_every;
  double alpha_scale;      /* 1 runs the solved rates */
} bn_sim_options;

BN_API void bn_sim_options_default(bn_sim_options* opt);
BN_API bn_status bn_simulate(const bn_solution* sol, const bn_sim_options* opt, bn_sim_report** out);
BN_API bn_status bn_sim_report_to_json(const bn_sim_report* r, char** out);
BN_API bn_status bn_sim_report_flow(const bn_sim_report* r, size_t flow, bn_sim_flow* out);
/* Buffer series as CSV (slot,node,buffer_size), every `stride`-th sample. */
BN_API bn_status bn_sim_report_write_buffer_csv(const bn_sim_report* r, const char* path, int stride);
/* 1 if every node's buffer slope over the final half is below 0.01 packets/slot. */
BN_API bn_status bn_sim_report_stable(const bn_sim_report* r, int* stable);
BN_API void bn_sim_report_free(bn_sim_report* r);

/* Table CSV for all presets; `loss_families` is "iid", "ge" or "iid,ge".
 * `workers` 0 uses every core. */
BN_API bn_status bn_reproduce_tables(const char* loss_families, unsigned workers, char** csv_out);

#ifdef __cplusplus
}
#endif

#endif
