#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "kgsim/error.hpp"
#include "kgsim/measures.hpp"
#include "kgsim/traces.hpp"

namespace kgsim {
namespace {

using info::VariableSet;
using traces::Category;
using traces::MissingPolicy;
using traces::SampleTable;

SampleTable parse(const std::string& body, std::size_t m, std::size_t v, MissingPolicy policy) {
  std::istringstream in("timestamp,user,category\n" + body);
  return traces::parse_activity_csv(in, m, v, policy);
}

Error parse_error(const std::string& text, std::size_t m = 2, std::size_t v = 2) {
  std::istringstream in(text);
  try {
    traces::parse_activity_csv(in, m, v);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "expected a parse failure";
  return Error(Errc::InternalConsistency, "");
}

TEST(ParseActivityCsv, CompleteTimestamps) {
  const auto t = parse("0,0,1\n0,1,0\n1,0,0\n1,1,0\n", 2, 2, MissingPolicy::DropRow);
  ASSERT_EQ(t.row_count(), 2u);
  EXPECT_EQ(t.category_count(), 2u);
  EXPECT_EQ(std::vector<Category>(t.row(0).begin(), t.row(0).end()), (std::vector<Category>{1, 0}));
  EXPECT_EQ(std::vector<Category>(t.row(1).begin(), t.row(1).end()), (std::vector<Category>{0, 0}));
}

TEST(ParseActivityCsv, IncompleteTimestampDropped) {
  const auto t = parse("0,0,1\n", 2, 2, MissingPolicy::DropRow);
  EXPECT_TRUE(t.empty());
  EXPECT_THROW(info::from_samples(t), Error);
}

TEST(ParseActivityCsv, IdleCategoryShiftsIds) {
  const auto t = parse("0,0,1\n", 2, 2, MissingPolicy::IdleCategory);
  ASSERT_EQ(t.row_count(), 1u);
  EXPECT_EQ(t.category_count(), 3u);
  EXPECT_EQ(t.at(0, 0), 2u);
  EXPECT_EQ(t.at(0, 1), 0u);
}

TEST(ParseActivityCsv, RowsOrderedByTimestamp) {
  const auto t = parse("9,0,1\n9,1,1\n3,1,0\n3,0,0\n", 2, 2, MissingPolicy::DropRow);
  ASSERT_EQ(t.row_count(), 2u);
  EXPECT_EQ(t.at(0, 0), 0u);
  EXPECT_EQ(t.at(1, 0), 1u);
}

TEST(ParseActivityCsv, Errors) {
  auto e = parse_error("timestamp,user,category\n0,0,1\n0,x,1\n");
  EXPECT_EQ(e.code(), Errc::ParseError);
  EXPECT_EQ(e.line(), 3u);
  e = parse_error("timestamp,user,category\n0,0\n");
  EXPECT_EQ(e.code(), Errc::ParseError);
  EXPECT_EQ(e.line(), 2u);
  e = parse_error("timestamp,user,category\n0,0,1,4\n");
  EXPECT_EQ(e.code(), Errc::ParseError);
  e = parse_error("timestamp,user,category\n0,2,1\n");
  EXPECT_EQ(e.code(), Errc::OutOfRange);
  EXPECT_EQ(e.line(), 2u);
  e = parse_error("timestamp,user,category\n0,1,2\n");
  EXPECT_EQ(e.code(), Errc::OutOfRange);
  e = parse_error("timestamp,user,category\n0,1,1\n0,1,0\n");
  EXPECT_EQ(e.code(), Errc::DuplicateObservation);
  EXPECT_EQ(e.line(), 3u);
  e = parse_error("time,user,category\n");
  EXPECT_EQ(e.code(), Errc::ParseError);
  EXPECT_EQ(e.line(), 1u);
  e = parse_error("timestamp,user,category\n0,-1,1\n");
  EXPECT_EQ(e.code(), Errc::ParseError);
}

TEST(ProfileVector, Counting) {
  SampleTable t(2, 3);
  for (auto row : {std::vector<Category>{0, 1}, {1, 1}}) t.push_row(row);
  EXPECT_EQ(traces::profile_vector(t, 0).probabilities, (std::vector<double>{0.5, 0.5, 0.0}));

  SampleTable one_hot(1, 5);
  for (int k = 0; k < 4; ++k) one_hot.push_row(std::vector<Category>{3});
  EXPECT_EQ(traces::profile_vector(one_hot, 0).probabilities, (std::vector<double>{0, 0, 0, 1, 0}));

  SampleTable mixed(1, 3);
  for (Category c : {0u, 0u, 1u, 2u}) mixed.push_row(std::vector<Category>{c});
  EXPECT_EQ(traces::profile_vector(mixed, 0).probabilities, (std::vector<double>{0.5, 0.25, 0.25}));

  EXPECT_THROW(traces::profile_vector(mixed, 1), Error);
}

TEST(ProfileVector, SumsToOneAfterParsing) {
  std::string body;
  for (int ts = 0; ts < 50; ++ts) {
    for (int u = 0; u < 3; ++u) body += std::to_string(ts) + "," + std::to_string(u) + "," +
                                        std::to_string((ts * (u + 2) + u) % 5) + "\n";
  }
  for (auto policy : {MissingPolicy::DropRow, MissingPolicy::IdleCategory}) {
    const auto t = parse(body, 3, 5, policy);
    for (UserId u = 0; u < 3; ++u) {
      const auto p = traces::profile_vector(t, u).probabilities;
      EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
      for (double x : p) EXPECT_GE(x, 0.0);
    }
  }
}

TEST(SynthConfig, Validation) {
  traces::SynthConfig cfg{3, 4, 10, 0.5, 1};
  EXPECT_NO_THROW(cfg.validate());
  for (auto bad : {traces::SynthConfig{1, 4, 10, 0.5, 1}, traces::SynthConfig{3, 1, 10, 0.5, 1},
                   traces::SynthConfig{3, 4, 0, 0.5, 1}, traces::SynthConfig{3, 4, 10, 1.5, 1},
                   traces::SynthConfig{3, 4, 10, -0.1, 1}}) {
    EXPECT_THROW(traces::synthesize_traces(bad), Error);
  }
}

TEST(SynthesizeTraces, FullCorrelationGivesIdenticalUsers) {
  const auto t = traces::synthesize_traces({5, 6, 2000, 1.0, 3});
  const auto d = info::from_samples(t);
  for (std::size_t a = 0; a < d.atom_count(); ++a) {
    const auto o = d.outcome(a);
    for (auto c : o) EXPECT_EQ(c, o[0]);
  }
  for (UserId i = 0; i < 5; ++i) EXPECT_NEAR(info::knowledge_limit(d, i), 0.0, 1e-12);
}

TEST(SynthesizeTraces, NoCorrelationGivesNearIndependence) {
  const auto d = info::from_samples(traces::synthesize_traces({3, 4, 100000, 0.0, 11}));
  for (UserId a = 0; a < 3; ++a) {
    for (UserId b = a + 1; b < 3; ++b) {
      EXPECT_LE(info::mutual_information(d, VariableSet::single(a), VariableSet::single(b)), 0.02);
    }
  }
}

TEST(SynthesizeTraces, DeterministicPerSeed) {
  const traces::SynthConfig cfg{4, 5, 500, 0.4, 42};
  const auto a = traces::synthesize_traces(cfg);
  const auto b = traces::synthesize_traces(cfg);
  std::ostringstream sa, sb;
  traces::write_sample_table(sa, a);
  traces::write_sample_table(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  auto other = cfg;
  other.seed = 43;
  EXPECT_FALSE(traces::synthesize_traces(other) == a);
}

TEST(SynthesizeTraces, MarginalsBoundedByAlphabet) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const traces::SynthConfig cfg{4, 2 + seed % 5, 300, 0.1 * double(seed), seed};
    const auto d = info::from_samples(traces::synthesize_traces(cfg));
    for (UserId u = 0; u < 4; ++u) {
      EXPECT_LE(info::subset_entropy(d, VariableSet::single(u)), std::log2(double(cfg.categories)) + 1e-12);
    }
  }
}

void expect_unique_tips(const SampleTable& t) {
  const auto d = info::from_samples(t);
  for (UserId i = 0; i < t.user_count(); ++i) {
    const auto rest = set_difference(VariableSet::all(t.user_count()), VariableSet::single(i));
    EXPECT_GT(info::conditional_entropy(d, VariableSet::single(i), rest), 0.0) << "user " << i;
  }
}

TEST(InjectUniqueTips, IdenticalUsersGainUniqueTips) {
  const auto base = traces::synthesize_traces({4, 3, 200, 1.0, 9});
  const auto t = traces::inject_unique_tips(base);
  EXPECT_EQ(t.row_count(), base.row_count() + 4);
  EXPECT_EQ(t.category_count(), base.category_count() + 4);
  expect_unique_tips(t);
}

TEST(InjectUniqueTips, IdempotentProperty) {
  const auto twice = traces::inject_unique_tips(traces::inject_unique_tips(traces::synthesize_traces({3, 2, 50, 0.5, 1})));
  expect_unique_tips(twice);
}

TEST(InjectUniqueTips, MinimalPair) {
  SampleTable t(2, 2);
  t.push_row(std::vector<Category>{0, 0});
  const auto out = traces::inject_unique_tips(t);
  expect_unique_tips(out);
  EXPECT_GT(info::knowledge_limit(info::from_samples(out), 0), 0.0);
  EXPECT_THROW(traces::inject_unique_tips(SampleTable(2, 2)), Error);
}

TEST(SampleTableFile, RoundTrips) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto t = traces::synthesize_traces({2 + seed, 3, 40 + seed, 0.3, seed});
    std::stringstream io;
    traces::write_sample_table(io, t);
    EXPECT_EQ(traces::read_sample_table(io), t);
  }
}

TEST(SampleTableFile, RejectsBadInput) {
  for (const char* text : {"", "2,2\n", "2,2,2\n0,1\n", "2,2,1\n0,2\n", "2,2,1\n0,1,1\n", "2,2,1\n0,1\n5,5\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(traces::read_sample_table(in), Error) << text;
  }
}

}  // namespace
}  // namespace kgsim
