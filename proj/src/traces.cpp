#include "kgsim/traces.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "kgsim/error.hpp"
#include "kgsim/random.hpp"

namespace kgsim::traces {

namespace {

constexpr std::string_view kActivityHeader = "timestamp,user,category";
constexpr std::uint64_t kUniqueTipSeed = 0x756e697175652d74ULL;

std::uint64_t parse_field(std::string_view field, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(Errc::ParseError, "malformed field '" + std::string(field) + "'", line_no);
  }
  return value;
}

}  // namespace

SampleTable parse_activity_csv(std::istream& in, std::size_t users, std::size_t categories,
                               MissingPolicy missing) {
  if (users == 0 || categories == 0) throw Error(Errc::InvalidConfig, "need at least one user and category");
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "missing header", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kActivityHeader) throw Error(Errc::ParseError, "header must be 'timestamp,user,category'", 1);

  std::map<std::uint64_t, std::vector<std::optional<Category>>> by_time;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view text(line);
    const std::size_t c1 = text.find(',');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : text.find(',', c1 + 1);
    if (c2 == std::string_view::npos || text.find(',', c2 + 1) != std::string_view::npos) {
      throw Error(Errc::ParseError, "expected three comma-separated integers", line_no);
    }
    const std::uint64_t ts = parse_field(text.substr(0, c1), line_no);
    const std::uint64_t user = parse_field(text.substr(c1 + 1, c2 - c1 - 1), line_no);
    const std::uint64_t category = parse_field(text.substr(c2 + 1), line_no);
    if (user >= users) throw Error(Errc::OutOfRange, "user id " + std::to_string(user), line_no);
    if (category >= categories) throw Error(Errc::OutOfRange, "category " + std::to_string(category), line_no);

    auto& slot = by_time.try_emplace(ts, users).first->second[user];
    if (slot) {
      throw Error(Errc::DuplicateObservation,
                  "timestamp " + std::to_string(ts) + " user " + std::to_string(user), line_no);
    }
    slot = static_cast<Category>(category);
  }

  const bool idle = missing == MissingPolicy::IdleCategory;
  SampleTable table(users, idle ? categories + 1 : categories);
  std::vector<Category> row(users);
  for (const auto& [ts, observed] : by_time) {
    bool complete = true;
    for (std::size_t u = 0; u < users; ++u) {
      if (observed[u]) {
        row[u] = idle ? *observed[u] + 1 : *observed[u];
      } else {
        complete = false;
        row[u] = 0;
      }
    }
    if (complete || idle) table.push_row(row);
  }
  return table;
}

ProfileVector profile_vector(const SampleTable& table, UserId user) {
  if (user >= table.user_count()) {
    throw Error(Errc::BadVariableIndex, "user " + std::to_string(user));
  }
  if (table.empty()) throw Error(Errc::EmptyInput, "profile of an empty table");
  std::vector<std::uint64_t> counts(table.category_count(), 0);
  for (std::size_t t = 0; t < table.row_count(); ++t) ++counts[table.at(t, user)];
  ProfileVector profile;
  profile.probabilities.reserve(counts.size());
  const double rows = static_cast<double>(table.row_count());
  for (std::uint64_t c : counts) profile.probabilities.push_back(static_cast<double>(c) / rows);
  return profile;
}

void SynthConfig::validate() const {
  if (users < 2) throw Error(Errc::InvalidConfig, "synthetic traces need at least 2 users");
  if (categories < 2) throw Error(Errc::InvalidConfig, "synthetic traces need at least 2 categories");
  if (rows < 1) throw Error(Errc::InvalidConfig, "synthetic traces need at least 1 row");
  if (!(rho >= 0.0 && rho <= 1.0)) throw Error(Errc::InvalidConfig, "rho must lie in [0, 1]");
}

SampleTable synthesize_traces(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const std::size_t m = config.users;
  const std::size_t v = config.categories;

  // Cumulative private profiles, one per user.
  std::vector<std::vector<double>> cdf(m, std::vector<double>(v));
  for (auto& user_cdf : cdf) {
    double total = 0.0;
    for (double& w : user_cdf) {
      w = rng.exponential();
      total += w;
    }
    double acc = 0.0;
    for (double& w : user_cdf) {
      acc += w / total;
      w = acc;
    }
    user_cdf.back() = 1.0;
  }

  SampleTable table(m, v);
  std::vector<Category> row(m);
  for (std::size_t t = 0; t < config.rows; ++t) {
    const auto latent = static_cast<Category>(rng.bounded(v));
    for (std::size_t u = 0; u < m; ++u) {
      if (rng.uniform() < config.rho) {
        row[u] = latent;
        continue;
      }
      const double x = rng.uniform();
      std::size_t c = 0;
      while (c + 1 < v && x >= cdf[u][c]) ++c;
      row[u] = static_cast<Category>(c);
    }
    table.push_row(row);
  }
  return table;
}

SampleTable inject_unique_tips(const SampleTable& table) {
  if (table.empty()) throw Error(Errc::EmptyInput, "cannot inject unique tips into an empty table");
  const std::size_t m = table.user_count();
  const std::size_t v = table.category_count();
  SampleTable out(m, v + m);
  for (std::size_t t = 0; t < table.row_count(); ++t) out.push_row(table.row(t));

  Rng rng(splitmix64(kUniqueTipSeed ^ table.row_count()));
  std::vector<Category> row(m);
  for (std::size_t u = 0; u < m; ++u) {
    const auto source = table.row(rng.bounded(table.row_count()));
    row.assign(source.begin(), source.end());
    row[u] = static_cast<Category>(v + u);
    out.push_row(row);
  }
  return out;
}

}  // namespace kgsim::traces
