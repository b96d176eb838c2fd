#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "kgsim/sample_table.hpp"

namespace kgsim::traces {

// What to do with a timestamp at which some user has no observation.
enum class MissingPolicy {
  // Absent users get reserved category 0; observed ids shift up by one and
  // the alphabet grows to v + 1.
  IdleCategory,
  // Timestamps lacking any user are discarded.
  DropRow,
};

// Reads an activity trace with header `timestamp,user,category` and one
// observation per line. Rows come out in ascending timestamp order.
SampleTable parse_activity_csv(std::istream& in, std::size_t users, std::size_t categories,
                               MissingPolicy missing = MissingPolicy::DropRow);

struct ProfileVector {
  std::vector<double> probabilities;
};

// Fraction of rows in which `user` sits in each category.
ProfileVector profile_vector(const SampleTable& table, UserId user);

struct SynthConfig {
  std::size_t users = 20;
  std::size_t categories = 24;
  std::size_t rows = 10000;
  double rho = 0.3;
  std::uint64_t seed = 0;

  // Throws InvalidConfig.
  void validate() const;
};

// Correlated synthetic traces. Each user first gets a private profile
// (normalized unit exponentials over the categories). For every row a shared
// latent category is drawn uniformly; each user copies it with probability
// rho and otherwise samples its private profile.
SampleTable synthesize_traces(const SynthConfig& config);

// Extends the alphabet by one reserved category per user and appends one
// row per user, so that afterwards every user's variable keeps positive
// entropy given all the others. Row i repeats a randomly chosen existing row
// with user i switched to its reserved category.
SampleTable inject_unique_tips(const SampleTable& table);

}  // namespace kgsim::traces
