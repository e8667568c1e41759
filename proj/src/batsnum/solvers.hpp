#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "batsnum/rankcalc.hpp"
#include "batsnum/scenario.hpp"
#include "batsnum/solution.hpp"

namespace batsnum {

// Memoized E[h] of one path under nonadaptive recoding numbers.
class PathRankCache {
 public:
  explicit PathRankCache(std::vector<const HopKernel*> kernels) : kernels_(std::move(kernels)) {}
  double operator()(const std::vector<int>& m);
  const std::vector<const HopKernel*>& kernels() const { return kernels_; }
  std::size_t size() const { return memo_.size(); }

 private:
  struct Hash {
    std::size_t operator()(const std::vector<int>& v) const {
      std::uint64_t h = 0xcbf29ce484222325ULL;
      for (int x : v) h = (h ^ static_cast<std::uint64_t>(x)) * 0x100000001b3ULL;
      return static_cast<std::size_t>(h);
    }
  };
  std::vector<const HopKernel*> kernels_;
  std::unordered_map<std::vector<int>, double, Hash> memo_;
};

struct LocalSearchResult {
  double alpha = 0.0;
  std::vector<int> m;
  double objective = 0.0;  // E[h] / sum_e lambda_e m_e
  int steps = 0;
  // All multipliers on the path were zero; alpha was capped by capacity.
  bool unbounded = false;
};

// Repeated exhaustive search over N(m) = {m' : |m'_e - m_e| <= 1} for the
// maximizer of E[h] / sum_e lambda_e m_e. `lambda` and `capacity` are per hop.
LocalSearchResult flow_subproblem_local_search(PathRankCache& cache, const std::vector<double>& lambda,
                                               const std::vector<double>& capacity,
                                               std::vector<int> init, double threshold);

// Cyclic coordinate ascent: each hop's m is optimized over 0..M0 with the
// others held fixed, until a full sweep changes nothing.
LocalSearchResult flow_subproblem_coordinate_search(PathRankCache& cache,
                                                    const std::vector<double>& lambda,
                                                    std::vector<int> init);

// Dual subgradient loop with per-flow local search and max-weight scheduling,
// then feasibility recovery over the recoding vectors visited at the end.
Solution solve_nap(const Instance& instance);

// Cut-set upper-bound problem.
Solution solve_up(const Instance& instance);

struct SingleFlowResult {
  double alpha = 0.0;
  std::vector<int> m;
  double throughput = 0.0;  // alpha * E[h]
};

// Rate region {s_e <= c}: equal m on every hop, maximize c E[h] / m.
SingleFlowResult solve_single_flow_no_collision(const std::vector<const HopKernel*>& kernels, double c);
// Rate region {sum_e s_e <= c}: maximize c E[h] / sum_e m_e by local search.
SingleFlowResult solve_single_flow_all_collision(const std::vector<const HopKernel*>& kernels, double c,
                                                 std::vector<int> init);

// Initial recoding numbers ceil(M / (1 - eps_e)), clipped to M0.
std::vector<int> initial_recoding_numbers(const Instance& instance, std::size_t flow);

}  // namespace batsnum
