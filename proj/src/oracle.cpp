#include "kgsim/oracle.hpp"

#include <cmath>
#include <string>

#include "kgsim/error.hpp"

namespace kgsim::oracle {

namespace {

std::size_t power(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < exp; ++k) out *= base;
  return out;
}

void check_set(const DenseDistribution& d, const VariableSet& s) {
  if (!s.empty() && s.back() >= d.user_count) {
    throw Error(Errc::BadVariableIndex, "variable " + std::to_string(s.back()));
  }
}

// Index of the projection of full-outcome `cell` onto `s`.
std::size_t project(const DenseDistribution& d, std::size_t cell, const VariableSet& s) {
  std::size_t index = 0;
  std::size_t scale = 1;
  std::size_t k = 0;
  for (std::size_t user = 0; user < d.user_count; ++user) {
    const std::size_t digit = cell % d.category_count;
    cell /= d.category_count;
    if (k < s.size() && s.ids()[k] == user) {
      index += digit * scale;
      scale *= d.category_count;
      ++k;
    }
  }
  return index;
}

std::vector<double> marginal(const DenseDistribution& d, const VariableSet& s) {
  std::vector<double> out(power(d.category_count, s.size()), 0.0);
  for (std::size_t cell = 0; cell < d.table.size(); ++cell) out[project(d, cell, s)] += d.table[cell];
  return out;
}

}  // namespace

DenseDistribution densify(const info::JointDistribution& dist) {
  const std::size_t m = dist.user_count();
  const std::size_t v = dist.category_count();
  if (m > kMaxUsers || v > kMaxCategories || power(v, m) > kMaxCells) {
    throw Error(Errc::TooLarge, std::to_string(v) + "^" + std::to_string(m) + " cells exceeds the dense cap");
  }
  DenseDistribution d{m, v, std::vector<double>(power(v, m), 0.0)};
  for (std::size_t a = 0; a < dist.atom_count(); ++a) {
    std::size_t index = 0;
    std::size_t scale = 1;
    for (auto c : dist.outcome(a)) {
      index += c * scale;
      scale *= v;
    }
    d.table[index] += dist.probability(a);
  }
  return d;
}

Bits brute_subset_entropy(const DenseDistribution& d, const VariableSet& s) {
  check_set(d, s);
  double h = 0.0;
  for (double p : marginal(d, s)) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

Bits brute_conditional_entropy(const DenseDistribution& d, const VariableSet& a, const VariableSet& b) {
  check_set(d, a);
  check_set(d, b);
  if (!a.disjoint_with(b)) throw Error(Errc::OverlappingSets, a.to_string() + " and " + b.to_string());
  const VariableSet ab = set_union(a, b);
  const auto p_ab = marginal(d, ab);
  const auto p_b = marginal(d, b);
  // Walk the full table once, mapping each cell to its (a∪b) and b cells;
  // visit every (a∪b) cell exactly once via its first full-table preimage.
  std::vector<char> visited(p_ab.size(), 0);
  double h = 0.0;
  for (std::size_t cell = 0; cell < d.table.size(); ++cell) {
    const std::size_t iab = project(d, cell, ab);
    if (visited[iab]) continue;
    visited[iab] = 1;
    const double p = p_ab[iab];
    if (p > 0.0) h -= p * std::log2(p / p_b[project(d, cell, b)]);
  }
  return h;
}

Bits brute_mutual_information(const DenseDistribution& d, const VariableSet& a, const VariableSet& b) {
  check_set(d, a);
  check_set(d, b);
  if (a.empty() || b.empty()) throw Error(Errc::EmptySet, "mutual information needs two nonempty groups");
  if (!a.disjoint_with(b)) throw Error(Errc::OverlappingSets, a.to_string() + " and " + b.to_string());
  const VariableSet ab = set_union(a, b);
  const auto p_ab = marginal(d, ab);
  const auto p_a = marginal(d, a);
  const auto p_b = marginal(d, b);
  std::vector<char> visited(p_ab.size(), 0);
  double mi = 0.0;
  for (std::size_t cell = 0; cell < d.table.size(); ++cell) {
    const std::size_t iab = project(d, cell, ab);
    if (visited[iab]) continue;
    visited[iab] = 1;
    const double p = p_ab[iab];
    if (p > 0.0) mi += p * std::log2(p / (p_a[project(d, cell, a)] * p_b[project(d, cell, b)]));
  }
  return mi;
}

}  // namespace kgsim::oracle
