#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "kgsim/sample_table.hpp"
#include "kgsim/variable_set.hpp"

namespace kgsim::info {

using Bits = double;
using traces::Category;

// Sparse empirical joint PMF over M tip variables, each over v categories.
// Atoms carry integer weights; probability = weight / total_weight.
//
// Immutable after construction. Entropy queries are memoized per
// VariableSet in a cache shared between copies and guarded by a mutex, so
// concurrent queries from several threads are safe.
class JointDistribution {
 public:
  struct Atom {
    std::vector<Category> outcome;
    std::uint64_t weight;
  };

  // Throws EmptyInput for an empty table.
  static JointDistribution from_samples(const traces::SampleTable& table);
  // Merges repeated outcomes. Throws MalformedSamples, OutOfRange or EmptyInput.
  static JointDistribution from_atoms(std::size_t user_count, std::size_t category_count,
                                      std::span<const Atom> atoms);

  std::size_t user_count() const noexcept { return users_; }
  std::size_t category_count() const noexcept { return categories_; }
  std::size_t atom_count() const noexcept { return weights_.size(); }
  std::uint64_t total_weight() const noexcept { return total_; }

  std::span<const Category> outcome(std::size_t atom) const {
    return std::span<const Category>(cells_).subspan(atom * users_, users_);
  }
  std::uint64_t weight(std::size_t atom) const { return weights_[atom]; }
  double probability(std::size_t atom) const {
    return static_cast<double>(weights_[atom]) / static_cast<double>(total_);
  }

  // Entropy in bits of the marginal on `s`. Throws BadVariableIndex.
  Bits entropy(const VariableSet& s) const;

  // Merged integer weights of the marginal on `s`, sorted ascending.
  std::vector<std::uint64_t> marginal_weights(const VariableSet& s) const;

 private:
  struct Cache;

  JointDistribution(std::size_t users, std::size_t categories);
  void check_members(const VariableSet& s) const;
  Bits compute_entropy(const VariableSet& s) const;

  std::size_t users_;
  std::size_t categories_;
  std::vector<Category> cells_;  // atom-major, sorted lexicographically by outcome
  std::vector<std::uint64_t> weights_;
  std::uint64_t total_ = 0;
  std::shared_ptr<Cache> cache_;
};

inline JointDistribution from_samples(const traces::SampleTable& table) {
  return JointDistribution::from_samples(table);
}

}  // namespace kgsim::info
