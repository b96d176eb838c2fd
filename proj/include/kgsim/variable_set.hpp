#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace kgsim {

using UserId = std::uint32_t;

namespace info {

// Sorted set of user ids naming a group of tip variables. Also serves as a
// node's knowledge set in the engine.
class VariableSet {
 public:
  VariableSet() = default;
  VariableSet(std::initializer_list<UserId> ids);
  // Throws DuplicateVariable if `ids` repeats an id.
  explicit VariableSet(std::vector<UserId> ids);

  static VariableSet all(std::size_t m);
  static VariableSet single(UserId id) { return VariableSet({id}); }

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  bool contains(UserId id) const noexcept;
  const std::vector<UserId>& ids() const noexcept { return ids_; }
  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }
  UserId front() const { return ids_.front(); }
  UserId back() const { return ids_.back(); }

  // Adds `id` if absent; returns whether it was inserted.
  bool insert(UserId id);

  bool is_subset_of(const VariableSet& other) const noexcept;
  bool disjoint_with(const VariableSet& other) const noexcept;

  std::string to_string() const;

  friend auto operator<=>(const VariableSet&, const VariableSet&) = default;
  friend bool operator==(const VariableSet&, const VariableSet&) = default;

 private:
  std::vector<UserId> ids_;
};

VariableSet set_union(const VariableSet& a, const VariableSet& b);
VariableSet set_intersection(const VariableSet& a, const VariableSet& b);
VariableSet set_difference(const VariableSet& a, const VariableSet& b);

struct VariableSetHash {
  std::size_t operator()(const VariableSet& s) const noexcept;
};

}  // namespace info
}  // namespace kgsim
