#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "kgsim/variable_set.hpp"

namespace kgsim::traces {

using Category = std::uint32_t;

// Time-indexed rows of per-user category assignments, stored row-major.
// A table may hold zero rows; estimation rejects it later.
class SampleTable {
 public:
  SampleTable(std::size_t user_count, std::size_t category_count);

  std::size_t user_count() const noexcept { return users_; }
  std::size_t category_count() const noexcept { return categories_; }
  std::size_t row_count() const noexcept { return users_ ? cells_.size() / users_ : 0; }
  bool empty() const noexcept { return cells_.empty(); }

  // Throws MalformedSamples on a width mismatch, OutOfRange on a bad category.
  void push_row(std::span<const Category> row);
  std::span<const Category> row(std::size_t t) const;
  Category at(std::size_t t, UserId user) const { return cells_[t * users_ + user]; }

  const std::vector<Category>& cells() const noexcept { return cells_; }

  friend bool operator==(const SampleTable&, const SampleTable&) = default;

 private:
  std::size_t users_;
  std::size_t categories_;
  std::vector<Category> cells_;
};

// Table file: first line "M,v,T", then T lines of M comma-separated ids.
void write_sample_table(std::ostream& out, const SampleTable& table);
SampleTable read_sample_table(std::istream& in);

}  // namespace kgsim::traces
