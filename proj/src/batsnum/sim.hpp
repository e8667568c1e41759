#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "batsnum/ffmat.hpp"
#include "batsnum/netmodel.hpp"
#include "batsnum/policy.hpp"
#include "batsnum/rng.hpp"
#include "batsnum/scenario.hpp"
#include "batsnum/solution.hpp"

namespace batsnum {

enum class RecodingMode { uniform, systematic };

struct Packet {
  int flow = 0;
  int hop = 0;               // index of the link this packet travels on
  std::int64_t batch = 0;    // monotone per flow
  std::vector<Element> coef;  // length M
  bool last_of_batch = false;
  std::int64_t seq = 0;      // per-link sequence number
};

struct TdmaFrame {
  std::vector<Schedule> slots;
  std::vector<std::string> warnings;
};

// Each schedule gets floor(w F) slots plus largest-remainder rounding of
// the residue; slots of different schedules are interleaved by smooth
// weighted round robin. Unassigned slots are idle.
TdmaFrame build_tdma_frame(const Decomposition& decomposition, int frame_length);

// Batch source with a rate accumulator: long-run batches per slot = alpha.
class BatchSource {
 public:
  explicit BatchSource(double alpha) : alpha_(alpha) {}
  // Number of batches (0 or more) that enter during this slot.
  int tick();
  double alpha() const { return alpha_; }

 private:
  double alpha_;
  double acc_ = 0.0;
};

// Generates the recoded packets of one batch from the received coefficient
// vectors: count m ~ p(.|rank), uniform random combinations, or the received
// independent vectors first in systematic mode; order uniformly permuted.
std::vector<std::vector<Element>> recode_batch(const RowSpace& received, const RecodingPolicy& policy,
                                               RecodingMode mode, Rng& rng);

struct SimOptions {
  std::int64_t slots = 1000000;
  std::uint64_t seed = 1;
  int frame_length = 1000;
  RecodingMode mode = RecodingMode::uniform;
  int buffer_sample_every = 1;
  // Rates are scaled by this factor before running (1 = as solved); values
  // above one deliberately overload the network.
  double alpha_scale = 1.0;
};

struct FlowSimStats {
  std::string name;
  double alpha = 0.0;
  std::int64_t emitted = 0;
  std::int64_t completed = 0;           // batches whose sink rank is final
  std::vector<double> rank_histogram;  // empirical h at the sink, sums to 1
  double mean_rank = 0.0;
  double rank_stderr = 0.0;
  double delivered_batch_rate = 0.0;  // completed / slots
  double utility = 0.0;               // log(alpha * mean_rank)
};

struct LinkSimStats {
  std::int64_t sent = 0;
  std::int64_t received = 0;
};

struct SimReport {
  std::string scenario;
  std::int64_t slots = 0;
  std::uint64_t seed = 0;
  int sample_every = 1;
  std::vector<FlowSimStats> flows;
  std::vector<LinkSimStats> links;
  std::vector<std::string> node_names;
  // buffers[node][k]: packets waiting at the node after slot k*sample_every.
  std::vector<std::vector<std::int32_t>> buffers;
  double utility = 0.0;
  std::vector<std::string> warnings;
};

// Rejects infeasible solutions up front (InfeasibleError).
SimReport run_simulation(const Scenario& scenario, const Solution& solution, const SimOptions& options);

struct StabilityReport {
  std::vector<double> slope;  // packets per slot over the final half
  bool stable = true;
};
StabilityReport buffer_stability(const SimReport& report, double threshold = 0.01);

// CSV with header slot,node,buffer_size; every `stride`-th sample.
void write_buffer_csv(std::ostream& out, const SimReport& report, int stride = 1);

}  // namespace batsnum
