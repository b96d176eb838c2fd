#include "kgsim/joint_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "kgsim/error.hpp"

namespace kgsim::info {

struct JointDistribution::Cache {
  std::shared_mutex mutex;
  std::unordered_map<VariableSet, Bits, VariableSetHash> entropy;
};

JointDistribution::JointDistribution(std::size_t users, std::size_t categories)
    : users_(users), categories_(categories), cache_(std::make_shared<Cache>()) {}

JointDistribution JointDistribution::from_samples(const traces::SampleTable& table) {
  if (table.empty()) throw Error(Errc::EmptyInput, "cannot estimate a distribution from zero rows");
  const std::size_t m = table.user_count();
  std::map<std::span<const Category>, std::uint64_t,
           decltype([](std::span<const Category> a, std::span<const Category> b) {
             return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
           })>
      counts;
  for (std::size_t t = 0; t < table.row_count(); ++t) ++counts[table.row(t)];

  JointDistribution dist(m, table.category_count());
  dist.cells_.reserve(counts.size() * m);
  dist.weights_.reserve(counts.size());
  for (const auto& [row, count] : counts) {
    dist.cells_.insert(dist.cells_.end(), row.begin(), row.end());
    dist.weights_.push_back(count);
  }
  dist.total_ = table.row_count();
  return dist;
}

JointDistribution JointDistribution::from_atoms(std::size_t user_count, std::size_t category_count,
                                                std::span<const Atom> atoms) {
  if (user_count == 0 || category_count == 0) {
    throw Error(Errc::InvalidConfig, "distribution needs at least one variable and one category");
  }
  if (atoms.empty()) throw Error(Errc::EmptyInput, "distribution has no atoms");
  std::map<std::vector<Category>, std::uint64_t> merged;
  for (const Atom& atom : atoms) {
    if (atom.outcome.size() != user_count) {
      throw Error(Errc::MalformedSamples, "atom outcome has wrong length");
    }
    for (Category c : atom.outcome) {
      if (c >= category_count) throw Error(Errc::OutOfRange, "atom category outside alphabet");
    }
    if (atom.weight == 0) throw Error(Errc::MalformedSamples, "atom weight must be positive");
    merged[atom.outcome] += atom.weight;
  }
  JointDistribution dist(user_count, category_count);
  for (const auto& [outcome, weight] : merged) {
    dist.cells_.insert(dist.cells_.end(), outcome.begin(), outcome.end());
    dist.weights_.push_back(weight);
    dist.total_ += weight;
  }
  return dist;
}

void JointDistribution::check_members(const VariableSet& s) const {
  if (!s.empty() && s.back() >= users_) {
    throw Error(Errc::BadVariableIndex, "variable " + std::to_string(s.back()) +
                                            " outside [0, " + std::to_string(users_) + ")");
  }
}

std::vector<std::uint64_t> JointDistribution::marginal_weights(const VariableSet& s) const {
  check_members(s);
  const std::size_t n = atom_count();
  std::vector<std::uint64_t> out;
  if (s.empty()) {
    out.push_back(total_);
    return out;
  }

  // Projections whose mixed-radix code fits in 64 bits hash as integers;
  // wider projections hash their raw bytes.
  const double code_bits = static_cast<double>(s.size()) * std::log2(static_cast<double>(categories_));
  if (code_bits < 63.0) {
    std::unordered_map<std::uint64_t, std::uint64_t> merged;
    merged.reserve(n);
    for (std::size_t a = 0; a < n; ++a) {
      const Category* row = cells_.data() + a * users_;
      std::uint64_t code = 0;
      for (UserId u : s) code = code * categories_ + row[u];
      merged[code] += weights_[a];
    }
    out.reserve(merged.size());
    for (const auto& [code, w] : merged) out.push_back(w);
  } else {
    std::unordered_map<std::string, std::uint64_t> merged;
    merged.reserve(n);
    std::string key(s.size() * sizeof(Category), '\0');
    for (std::size_t a = 0; a < n; ++a) {
      const Category* row = cells_.data() + a * users_;
      std::size_t k = 0;
      for (UserId u : s) {
        std::memcpy(key.data() + k * sizeof(Category), &row[u], sizeof(Category));
        ++k;
      }
      merged[key] += weights_[a];
    }
    out.reserve(merged.size());
    for (const auto& [key_bytes, w] : merged) out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Bits JointDistribution::compute_entropy(const VariableSet& s) const {
  const std::vector<std::uint64_t> weights = marginal_weights(s);
  if (weights.size() <= 1) return 0.0;
  // H = log2(N) - (1/N) * sum w log2 w, summed with Neumaier compensation
  // over ascending weights so the result does not depend on hash order.
  double sum = 0.0;
  double comp = 0.0;
  for (std::uint64_t w : weights) {
    if (w == 1) continue;
    const double wd = static_cast<double>(w);
    const double term = wd * std::log2(wd);
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  const double total = static_cast<double>(total_);
  const double h = std::log2(total) - (sum + comp) / total;
  return h > 0.0 ? h : 0.0;
}

Bits JointDistribution::entropy(const VariableSet& s) const {
  check_members(s);
  {
    std::shared_lock lock(cache_->mutex);
    if (auto it = cache_->entropy.find(s); it != cache_->entropy.end()) return it->second;
  }
  const Bits h = compute_entropy(s);
  std::unique_lock lock(cache_->mutex);
  cache_->entropy.emplace(s, h);
  return h;
}

}  // namespace kgsim::info
