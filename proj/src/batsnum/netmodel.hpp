#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "batsnum/loss.hpp"

namespace batsnum {

struct Link {
  std::string name;
  int tail = 0;
  int head = 0;
  double capacity = 1.0;  // packets per slot
  LossSpec loss;

  friend bool operator==(const Link&, const Link&) = default;
};

enum class InterferenceKind { two_hop, explicit_sets, none, all };

struct Network {
  std::vector<std::string> nodes;
  std::vector<Link> links;
  // interference[e] = I_e, indices into links.
  std::vector<std::vector<int>> interference;

  std::size_t num_links() const { return links.size(); }
  bool conflict(int a, int b) const;
  // Checks node references and symmetry of the interference sets.
  void validate() const;

  friend bool operator==(const Network&, const Network&) = default;
};

// Links conflict when they share an endpoint or an endpoint of one is adjacent
// (through any link) to an endpoint of the other.
std::vector<std::vector<int>> two_hop_interference(const Network& network);
std::vector<std::vector<int>> interference_sets(const Network& network, InterferenceKind kind);

// Active links as a bitmask (bit e = link e).
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(std::uint32_t mask) : mask_(mask) {}
  static Schedule of(const std::vector<int>& links);

  bool active(int e) const { return (mask_ >> e) & 1u; }
  std::uint32_t mask() const { return mask_; }
  std::vector<int> links() const;
  int size() const;

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  std::uint32_t mask_ = 0;
};

bool is_feasible(const Network& network, const Schedule& s);

inline constexpr std::size_t kMaxEnumeratedLinks = 25;

// All feasible schedules including the empty one, in increasing mask order.
// Throws SizeError beyond kMaxEnumeratedLinks links.
std::vector<Schedule> enumerate_feasible_schedules(const Network& network);

// Capacity-weighted rate vector c_e s_e.
std::vector<double> rate_vector(const Network& network, const Schedule& s);

// argmax over feasible schedules of sum_e w_e c_e s_e; ties go to the
// lexicographically smallest 0/1 vector (s_1, s_2, ...).
Schedule max_weight_schedule(const Network& network, const std::vector<Schedule>& schedules,
                             const std::vector<double>& weights);
Schedule max_weight_schedule(const Network& network, const std::vector<double>& weights);

using Decomposition = std::vector<std::pair<Schedule, double>>;

struct RateCover {
  double time_share = 0.0;       // minimum total share; infinity if unreachable
  Decomposition decomposition;   // empty when unreachable
  std::vector<double> certificate;  // optimal link weighting y of the dual LP
};
// Least total time share whose schedules dominate `target`.
RateCover min_time_share(const Network& network, const std::vector<Schedule>& schedules,
                         const std::vector<double>& target);

// Time shares over feasible schedules whose combined rate vector dominates
// `target`; shares sum to at most 1. Throws InfeasibleError whose certificate
// y satisfies y.target > 1 >= y.rate(s) for every schedule.
Decomposition decompose_rate_vector(const Network& network, const std::vector<Schedule>& schedules,
                                    const std::vector<double>& target);
Decomposition decompose_rate_vector(const Network& network, const std::vector<double>& target);

std::vector<double> combined_rate(const Network& network, const Decomposition& d);

}  // namespace batsnum
