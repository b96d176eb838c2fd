#pragma once

#include <cstddef>
#include <vector>

#include "kgsim/joint_distribution.hpp"
#include "kgsim/variable_set.hpp"

// Brute-force reference measures over a fully enumerated joint table. Slow
// by construction; meant for cross-checking the sparse library on small
// instances.
namespace kgsim::oracle {

using info::Bits;
using info::VariableSet;

inline constexpr std::size_t kMaxUsers = 6;
inline constexpr std::size_t kMaxCategories = 4;
inline constexpr std::size_t kMaxCells = 4096;

struct DenseDistribution {
  std::size_t user_count = 0;
  std::size_t category_count = 0;
  // Probability of each outcome; index = sum_k x_k * v^k (user 0 least significant).
  std::vector<double> table;
};

// Throws TooLarge when v^M exceeds kMaxCells or the per-axis caps.
DenseDistribution densify(const info::JointDistribution& dist);

Bits brute_subset_entropy(const DenseDistribution& d, const VariableSet& s);
// -sum p(a,b) log2(p(a,b) / p(b)) by enumeration.
Bits brute_conditional_entropy(const DenseDistribution& d, const VariableSet& a, const VariableSet& b);
// sum p(a,b) log2(p(a,b) / (p(a) p(b))) by enumeration.
Bits brute_mutual_information(const DenseDistribution& d, const VariableSet& a, const VariableSet& b);

}  // namespace kgsim::oracle
