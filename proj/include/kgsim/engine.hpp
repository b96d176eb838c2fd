#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "kgsim/graph.hpp"
#include "kgsim/joint_distribution.hpp"
#include "kgsim/variable_set.hpp"

namespace kgsim::engine {

using info::Bits;
using info::VariableSet;
using topology::Edge;
using topology::Graph;

enum class Policy {
  SendMineOnly,          // sends only its own tips
  ForwardMinePlusOthers  // sends its own tips plus everything acquired so far
};

std::string_view policy_name(Policy policy) noexcept;  // "smo" / "fmpo"
// Throws InvalidConfig for anything but "smo" or "fmpo".
Policy parse_policy(std::string_view name);

inline constexpr double kDefaultTolerance = 1e-9;

// know[i] is the set of sources whose tips node i holds; always contains i.
class KnowledgeState {
 public:
  explicit KnowledgeState(std::size_t node_count);

  std::size_t node_count() const noexcept { return know_.size(); }
  const VariableSet& known_by(UserId node) const { return know_.at(node); }
  void set_known(UserId node, VariableSet known);

  friend bool operator==(const KnowledgeState&, const KnowledgeState&) = default;

 private:
  std::vector<VariableSet> know_;
};

KnowledgeState init_state(std::size_t m);

using Round = std::vector<Edge>;

// Each round is a matching of graph edges; pairs in a round exchange against
// the state as it stood at the start of the round.
struct Schedule {
  std::vector<Round> rounds;
  std::size_t size() const noexcept { return rounds.size(); }
};

// Throws NotAnEdge, SelfEncounter, or InvalidSchedule (a node twice in a round).
void validate_schedule(const Graph& g, const Schedule& schedule);

// One round per neighbor j of `focal`, pairing (focal, j) in ascending j.
Schedule focal_schedule(const Graph& g, UserId focal);
// Each round is a greedy maximal matching over a seeded shuffle of the edges.
Schedule round_robin_schedule(const Graph& g, std::size_t rounds, std::uint64_t seed);
// Every edge as its own single-pair round, in edge order, `sweeps` times.
Schedule edge_sweep_schedule(const Graph& g, std::size_t sweeps);
// Alternates rounds of `a` and `b` (a0, b0, a1, b1, ...); leftovers of the
// longer schedule follow in order.
Schedule interleave(const Schedule& a, const Schedule& b);

struct Overheads {
  Bits first = 0.0;   // overhead seen from node i
  Bits second = 0.0;  // overhead seen from node j
};

// Tips exchanged that add no knowledge. SMO: I(X_i; know[j]) and
// I(X_j; know[i]). FMPO: H(know[i]) + H(know[j]) - H(know[i] ∪ know[j]) for
// both, counting sources held by both nodes once.
Overheads encounter_overhead(const info::JointDistribution& dist, const KnowledgeState& state,
                             UserId i, UserId j, Policy policy);

struct EncounterOutcome {
  KnowledgeState state;
  Bits gain_first = 0.0;
  Bits gain_second = 0.0;
  Overheads overhead;
};

EncounterOutcome apply_encounter(const info::JointDistribution& dist, const Graph& g,
                                 const KnowledgeState& state, UserId i, UserId j, Policy policy);

struct MetricsRecord {
  std::size_t round = 0;
  UserId node = 0;
  Policy policy = Policy::SendMineOnly;
  Bits kg_bits = 0.0;
  Bits kl_bits = 0.0;
  Bits oh_round_bits = 0.0;
  Bits oh_cum_bits = 0.0;
  bool achieved = false;
  // Encounters this node has taken part in up to and including this round.
  std::size_t encounters = 0;
};

// One record per node per round, round-major. Throws ShapeMismatch when the
// distribution and graph disagree on the node count.
std::vector<MetricsRecord> run(const info::JointDistribution& dist, const Graph& g,
                               const Schedule& schedule, Policy policy,
                               double tolerance = kDefaultTolerance);

// Encounters `node` needed to reach its limit: 0 if the limit is met before
// any exchange, nullopt if never reached. Throws BadVariableIndex.
std::optional<std::size_t> steps_to_limit(const std::vector<MetricsRecord>& records, UserId node,
                                          double tolerance = kDefaultTolerance);

// Final state reached by replaying a schedule; used to inspect knowledge sets.
KnowledgeState replay(const Graph& g, const Schedule& schedule, Policy policy);

// Metrics CSV: header round,node,policy,kg_bits,kl_bits,oh_round_bits,oh_cum_bits,achieved
// with reals at 12 significant digits.
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> read_metrics_csv(std::istream& in);

}  // namespace kgsim::engine
