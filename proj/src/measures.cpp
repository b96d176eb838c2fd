#include "kgsim/measures.hpp"

#include <string>

#include "kgsim/error.hpp"

namespace kgsim::info {

namespace {

Bits clamp_difference(double value, const char* what) {
  if (value >= 0.0) return value;
  if (value > -kRoundoff) return 0.0;
  throw Error(Errc::InternalConsistency,
              std::string(what) + " evaluated to " + std::to_string(value) + " bits");
}

void check_user(const JointDistribution& dist, UserId i) {
  if (i >= dist.user_count()) {
    throw Error(Errc::BadVariableIndex, "user " + std::to_string(i) + " outside [0, " +
                                            std::to_string(dist.user_count()) + ")");
  }
}

}  // namespace

Bits subset_entropy(const JointDistribution& dist, const VariableSet& s) {
  return dist.entropy(s);
}

Bits conditional_entropy(const JointDistribution& dist, const VariableSet& a, const VariableSet& b) {
  if (!a.disjoint_with(b)) throw Error(Errc::OverlappingSets, a.to_string() + " and " + b.to_string());
  return clamp_difference(dist.entropy(set_union(a, b)) - dist.entropy(b), "conditional entropy");
}

Bits mutual_information(const JointDistribution& dist, const VariableSet& a, const VariableSet& b) {
  if (a.empty() || b.empty()) throw Error(Errc::EmptySet, "mutual information needs two nonempty groups");
  if (!a.disjoint_with(b)) throw Error(Errc::OverlappingSets, a.to_string() + " and " + b.to_string());
  return shared_information(dist, a, b);
}

Bits shared_information(const JointDistribution& dist, const VariableSet& a, const VariableSet& b) {
  return clamp_difference(dist.entropy(a) + dist.entropy(b) - dist.entropy(set_union(a, b)),
                          "mutual information");
}

Bits knowledge_limit(const JointDistribution& dist, UserId i) {
  check_user(dist, i);
  return clamp_difference(dist.entropy(VariableSet::all(dist.user_count())) -
                              dist.entropy(VariableSet::single(i)),
                          "knowledge limit");
}

Bits knowledge_gain(const JointDistribution& dist, UserId i, const VariableSet& known) {
  check_user(dist, i);
  if (!known.contains(i)) {
    throw Error(Errc::SelfNotInKnowledgeSet,
                "user " + std::to_string(i) + " missing from " + known.to_string());
  }
  if (known.size() == 1) return 0.0;
  return clamp_difference(dist.entropy(known) - dist.entropy(VariableSet::single(i)), "knowledge gain");
}

std::vector<Bits> chain_decomposition(const JointDistribution& dist, std::span<const UserId> order) {
  if (order.size() < 2) throw Error(Errc::EmptySet, "chain decomposition needs at least two variables");
  // Validates duplicates and range up front.
  const VariableSet whole(std::vector<UserId>(order.begin(), order.end()));
  if (whole.back() >= dist.user_count()) throw Error(Errc::BadVariableIndex, whole.to_string());

  std::vector<Bits> terms;
  terms.reserve(order.size() - 1);
  VariableSet prefix = VariableSet::single(order[0]);
  for (std::size_t t = 1; t < order.size(); ++t) {
    terms.push_back(conditional_entropy(dist, VariableSet::single(order[t]), prefix));
    prefix.insert(order[t]);
  }
  return terms;
}

}  // namespace kgsim::info
