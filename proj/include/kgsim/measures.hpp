#pragma once

#include <span>
#include <vector>

#include "kgsim/joint_distribution.hpp"
#include "kgsim/variable_set.hpp"

namespace kgsim::info {

// Differences of entropies within this band of zero are float cancellation
// and are reported as 0; anything more negative is an InternalConsistency error.
inline constexpr double kRoundoff = 1e-12;

Bits subset_entropy(const JointDistribution& dist, const VariableSet& s);

// H(a | b) = H(a ∪ b) - H(b). Throws OverlappingSets unless a, b are disjoint.
Bits conditional_entropy(const JointDistribution& dist, const VariableSet& a, const VariableSet& b);

// I(a; b) = H(a) + H(b) - H(a ∪ b) for disjoint, nonempty a and b.
Bits mutual_information(const JointDistribution& dist, const VariableSet& a, const VariableSet& b);

// H(a) + H(b) - H(a ∪ b) for possibly overlapping groups: the information
// the two groups have in common, counting shared sources once. Equals
// mutual_information when a and b are disjoint.
Bits shared_information(const JointDistribution& dist, const VariableSet& a, const VariableSet& b);

// Knowledge gain limit of user i: H(X_1..X_M) - H(X_i).
Bits knowledge_limit(const JointDistribution& dist, UserId i);

// Knowledge gain of user i holding the tips of every source in `known`:
// H(known) - H(X_i). Throws SelfNotInKnowledgeSet if i is not in `known`.
Bits knowledge_gain(const JointDistribution& dist, UserId i, const VariableSet& known);

// Chain-rule terms H(X_order[t] | X_order[0..t-1]) for t = 1..n-1.
std::vector<Bits> chain_decomposition(const JointDistribution& dist, std::span<const UserId> order);

}  // namespace kgsim::info
