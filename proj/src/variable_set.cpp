#include "kgsim/variable_set.hpp"

#include <algorithm>
#include <iterator>

#include "kgsim/error.hpp"

namespace kgsim::info {

VariableSet::VariableSet(std::initializer_list<UserId> ids)
    : VariableSet(std::vector<UserId>(ids)) {}

VariableSet::VariableSet(std::vector<UserId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) {
    throw Error(Errc::DuplicateVariable, "variable set repeats an id");
  }
}

VariableSet VariableSet::all(std::size_t m) {
  VariableSet s;
  s.ids_.resize(m);
  for (std::size_t i = 0; i < m; ++i) s.ids_[i] = static_cast<UserId>(i);
  return s;
}

bool VariableSet::contains(UserId id) const noexcept {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

bool VariableSet::insert(UserId id) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it != ids_.end() && *it == id) return false;
  ids_.insert(it, id);
  return true;
}

bool VariableSet::is_subset_of(const VariableSet& other) const noexcept {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

bool VariableSet::disjoint_with(const VariableSet& other) const noexcept {
  auto a = ids_.begin();
  auto b = other.ids_.begin();
  while (a != ids_.end() && b != other.ids_.end()) {
    if (*a == *b) return false;
    if (*a < *b) ++a; else ++b;
  }
  return true;
}

std::string VariableSet::to_string() const {
  std::string out = "{";
  for (std::size_t k = 0; k < ids_.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(ids_[k]);
  }
  return out + "}";
}

VariableSet set_union(const VariableSet& a, const VariableSet& b) {
  std::vector<UserId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VariableSet(std::move(out));
}

VariableSet set_intersection(const VariableSet& a, const VariableSet& b) {
  std::vector<UserId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VariableSet(std::move(out));
}

VariableSet set_difference(const VariableSet& a, const VariableSet& b) {
  std::vector<UserId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VariableSet(std::move(out));
}

std::size_t VariableSetHash::operator()(const VariableSet& s) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (UserId id : s) {
    h ^= id + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace kgsim::info
