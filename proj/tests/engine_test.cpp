#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "kgsim/engine.hpp"
#include "kgsim/error.hpp"
#include "kgsim/measures.hpp"
#include "kgsim/traces.hpp"
#include "test_util.hpp"

namespace kgsim {
namespace {

using engine::Policy;
using engine::Schedule;
using info::VariableSet;
using topology::Edge;
using topology::Graph;

constexpr Policy kSmo = Policy::SendMineOnly;
constexpr Policy kFmpo = Policy::ForwardMinePlusOthers;

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected kgsim::Error";
  return Errc::InternalConsistency;
}

info::JointDistribution unique_tip_dist(std::size_t m, std::size_t v, std::size_t rows, double rho,
                                        std::uint64_t seed) {
  return info::from_samples(traces::inject_unique_tips(traces::synthesize_traces({m, v, rows, rho, seed})));
}

Graph path(std::size_t m) {
  std::vector<Edge> edges;
  for (UserId i = 0; i + 1 < m; ++i) edges.push_back({i, i + 1});
  return topology::from_edge_list(m, edges);
}

const engine::MetricsRecord& record_at(const std::vector<engine::MetricsRecord>& records, std::size_t m,
                                       std::size_t round, UserId node) {
  return records.at(round * m + node);
}

TEST(InitState, SelfOnly) {
  const auto s = engine::init_state(3);
  for (UserId i = 0; i < 3; ++i) EXPECT_EQ(s.known_by(i), VariableSet::single(i));
  const auto d = testing::three_atom();
  for (UserId i = 0; i < 3; ++i) EXPECT_EQ(info::knowledge_gain(d, i, s.known_by(i)), 0.0);
  EXPECT_EQ(engine::init_state(1).known_by(0), VariableSet({0}));
}

TEST(EncounterOverhead, Examples) {
  const auto same = testing::identical_pair();
  const auto fresh = engine::init_state(2);
  const auto oh = engine::encounter_overhead(same, fresh, 0, 1, kSmo);
  EXPECT_NEAR(oh.first, 1.0, 1e-12);
  EXPECT_NEAR(oh.second, 1.0, 1e-12);

  for (Policy p : {kSmo, kFmpo}) {
    const auto ind = engine::encounter_overhead(testing::uniform_pair(), fresh, 0, 1, p);
    EXPECT_NEAR(ind.first, 0.0, 1e-12);
    EXPECT_NEAR(ind.second, 0.0, 1e-12);
  }

  auto state = engine::init_state(3);
  state.set_known(1, VariableSet({1, 2}));
  const auto d = testing::three_atom();
  const auto f = engine::encounter_overhead(d, state, 0, 1, kFmpo);
  const double expected = info::subset_entropy(d, VariableSet({0})) + info::subset_entropy(d, VariableSet({1, 2})) -
                          info::subset_entropy(d, VariableSet::all(3));
  EXPECT_NEAR(expected, 1.0, 1e-12);
  EXPECT_NEAR(f.first, expected, 1e-12);
  EXPECT_NEAR(f.second, expected, 1e-12);

  EXPECT_EQ(code_of([&] { engine::encounter_overhead(d, state, 1, 1, kSmo); }), Errc::SelfEncounter);
}

TEST(ApplyEncounter, Examples) {
  const auto d = testing::three_atom();
  const auto g = topology::full_mesh(3);

  const auto smo = engine::apply_encounter(d, g, engine::init_state(3), 0, 1, kSmo);
  EXPECT_NEAR(smo.gain_first, info::conditional_entropy(d, VariableSet({1}), VariableSet({0})), 1e-12);
  EXPECT_EQ(smo.state.known_by(0), VariableSet({0, 1}));
  EXPECT_EQ(smo.state.known_by(2), VariableSet({2}));

  auto state = engine::init_state(3);
  state.set_known(1, VariableSet({1, 2}));
  const auto fmpo = engine::apply_encounter(d, g, state, 0, 1, kFmpo);
  EXPECT_NEAR(fmpo.gain_first, info::conditional_entropy(d, VariableSet({1, 2}), VariableSet({0})), 1e-12);
  EXPECT_EQ(fmpo.state.known_by(0), VariableSet({0, 1, 2}));
  EXPECT_EQ(fmpo.state.known_by(1), VariableSet({0, 1, 2}));

  for (Policy p : {kSmo, kFmpo}) {
    const auto once = engine::apply_encounter(d, g, engine::init_state(3), 0, 2, p);
    const auto again = engine::apply_encounter(d, g, once.state, 0, 2, p);
    EXPECT_EQ(again.gain_first, 0.0);
    EXPECT_EQ(again.gain_second, 0.0);
    EXPECT_EQ(again.state, once.state);
  }

  EXPECT_EQ(code_of([&] { engine::apply_encounter(d, path(3), engine::init_state(3), 0, 2, kSmo); }),
            Errc::NotAnEdge);
  EXPECT_EQ(code_of([&] { engine::apply_encounter(d, g, engine::init_state(3), 2, 2, kSmo); }),
            Errc::SelfEncounter);
}

TEST(FocalSchedule, Examples) {
  const auto s = engine::focal_schedule(topology::full_mesh(4), 0);
  ASSERT_EQ(s.size(), 3u);
  for (UserId j = 1; j <= 3; ++j) EXPECT_EQ(s.rounds[j - 1], (engine::Round{{0, j}}));

  const auto p = engine::focal_schedule(path(3), 0);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.rounds[0], (engine::Round{{0, 1}}));

  const std::vector<Edge> one{{1, 2}};
  EXPECT_EQ(engine::focal_schedule(topology::from_edge_list(3, one), 0).size(), 0u);
}

TEST(RoundRobinSchedule, Examples) {
  const auto two = engine::round_robin_schedule(topology::full_mesh(2), 5, 1);
  for (const auto& round : two.rounds) EXPECT_EQ(round, (engine::Round{{0, 1}}));

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = topology::random_geometric(12, 0.45, seed);
    const auto s = engine::round_robin_schedule(g, 20, seed);
    EXPECT_NO_THROW(engine::validate_schedule(g, s));
    for (const auto& round : s.rounds) {
      std::vector<char> matched(12, 0);
      for (const auto& [a, b] : round) matched[a] = matched[b] = 1;
      // Maximal: no edge has both endpoints left free.
      for (const auto& [a, b] : g.edges()) EXPECT_TRUE(matched[a] || matched[b]);
    }
    const auto again = engine::round_robin_schedule(g, 20, seed);
    EXPECT_EQ(again.rounds, s.rounds);
  }
}

TEST(Schedule, ValidationErrors) {
  const auto g = path(4);
  EXPECT_EQ(code_of([&] { engine::validate_schedule(g, Schedule{{{{0, 2}}}}); }), Errc::NotAnEdge);
  EXPECT_EQ(code_of([&] { engine::validate_schedule(g, Schedule{{{{1, 1}}}}); }), Errc::SelfEncounter);
  EXPECT_EQ(code_of([&] { engine::validate_schedule(g, Schedule{{{{0, 1}, {1, 2}}}}); }), Errc::InvalidSchedule);
  EXPECT_NO_THROW(engine::validate_schedule(g, Schedule{{{{0, 1}, {2, 3}}, {{1, 2}}}}));
}

TEST(Run, FullMeshSmoFocalReachesLimit) {
  const std::size_t m = 8;
  const auto d = unique_tip_dist(m, 5, 400, 0.3, 21);
  const auto g = topology::full_mesh(m);
  const auto records = engine::run(d, g, engine::focal_schedule(g, 0), kSmo);
  ASSERT_EQ(records.size(), (m - 1) * m);
  const auto& last = record_at(records, m, m - 2, 0);
  EXPECT_NEAR(last.kg_bits, last.kl_bits, 1e-9);
  EXPECT_TRUE(last.achieved);
  const auto steps = engine::steps_to_limit(records, 0);
  ASSERT_TRUE(steps.has_value());
  EXPECT_LE(*steps, m - 1);
}

TEST(Run, IdenticalUsersAchieveImmediately) {
  const auto d = info::from_samples(traces::synthesize_traces({4, 3, 300, 1.0, 2}));
  const auto g = topology::full_mesh(4);
  const auto records = engine::run(d, g, engine::round_robin_schedule(g, 3, 1), kFmpo);
  for (const auto& rec : records) {
    EXPECT_EQ(rec.kg_bits, 0.0);
    EXPECT_TRUE(rec.achieved);
  }
  for (UserId n = 0; n < 4; ++n) EXPECT_EQ(engine::steps_to_limit(records, n), 0u);
}

TEST(Run, PathGraphSmoStopsShortOfLimit) {
  const auto d = unique_tip_dist(3, 3, 300, 0.5, 8);
  const auto g = path(3);
  const auto records = engine::run(d, g, engine::edge_sweep_schedule(g, 3), kSmo);
  const auto& last = records[records.size() - 3];
  ASSERT_EQ(last.node, 0u);
  const double closed = info::knowledge_gain(d, 0, VariableSet({0, 1}));
  EXPECT_NEAR(last.kg_bits, closed, 1e-12);
  const double gap = info::conditional_entropy(d, VariableSet({2}), VariableSet({0, 1}));
  EXPECT_GT(gap, 0.0);
  EXPECT_NEAR(last.kl_bits - last.kg_bits, gap, 1e-9);
  EXPECT_FALSE(engine::steps_to_limit(records, 0).has_value());
}

TEST(Run, ShapeMismatch) {
  const auto d = testing::three_atom();
  EXPECT_EQ(code_of([&] { engine::run(d, topology::full_mesh(4), Schedule{}, kSmo); }), Errc::ShapeMismatch);
}

TEST(StepsToLimit, FmpoNoSlowerThanSmoOnSharedSchedule) {
  const std::size_t m = 8;
  const auto d = unique_tip_dist(m, 4, 500, 0.3, 5);
  const auto g = topology::full_mesh(m);
  const auto schedule = engine::interleave(engine::focal_schedule(g, 0), engine::round_robin_schedule(g, 60, 4));
  const auto smo = engine::run(d, g, schedule, kSmo);
  const auto fmpo = engine::run(d, g, schedule, kFmpo);
  for (UserId n = 0; n < m; ++n) {
    const auto s = engine::steps_to_limit(smo, n);
    const auto f = engine::steps_to_limit(fmpo, n);
    ASSERT_TRUE(f.has_value());
    if (s) EXPECT_LE(*f, *s);
  }
  EXPECT_EQ(code_of([&] { engine::steps_to_limit(smo, 99); }), Errc::BadVariableIndex);
}

// Earliest round at which each source's tips can reach each node along a
// time-respecting chain of encounters (one hop per round).
std::vector<std::vector<long>> temporal_reach(std::size_t m, const Schedule& s, std::size_t prefix) {
  std::vector<std::vector<long>> arrival(m, std::vector<long>(m, -2));  // arrival[source][node]
  for (UserId src = 0; src < m; ++src) {
    arrival[src][src] = -1;
    for (std::size_t r = 0; r < prefix; ++r) {
      const auto before = arrival[src];
      for (const auto& [a, b] : s.rounds[r]) {
        if (before[a] != -2 && before[a] < long(r) && arrival[src][b] == -2) arrival[src][b] = long(r);
        if (before[b] != -2 && before[b] < long(r) && arrival[src][a] == -2) arrival[src][a] = long(r);
      }
    }
  }
  return arrival;
}

TEST(RunInvariants, RandomInstances) {
  std::mt19937_64 gen(314);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t m = 4 + gen() % 6;
    const auto g = topology::random_geometric(m, 0.5, gen());
    const auto d = unique_tip_dist(m, 3, 100 + gen() % 200, double(gen() % 10) / 10.0, gen());
    const auto schedule = engine::round_robin_schedule(g, 15, gen());
    for (Policy p : {kSmo, kFmpo}) {
      const auto records = engine::run(d, g, schedule, p);
      for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& rec = records[k];
        EXPECT_LE(rec.kg_bits, rec.kl_bits + 1e-9);
        EXPECT_GE(rec.oh_round_bits, 0.0);
        if (k >= m) EXPECT_GE(rec.kg_bits, records[k - m].kg_bits);
      }
      for (std::size_t prefix = 0; prefix <= schedule.size(); prefix += 5) {
        Schedule head{std::vector<engine::Round>(schedule.rounds.begin(), schedule.rounds.begin() + prefix)};
        const auto state = engine::replay(g, head, p);
        const auto reach = temporal_reach(m, schedule, prefix);
        for (UserId n = 0; n < m; ++n) {
          if (p == kSmo) {
            EXPECT_TRUE(state.known_by(n).is_subset_of(set_union(g.neighbors(n), VariableSet::single(n))));
          } else {
            std::vector<UserId> expected;
            for (UserId src = 0; src < m; ++src) {
              if (reach[src][n] != -2) expected.push_back(src);
            }
            EXPECT_EQ(state.known_by(n), VariableSet(expected));
          }
        }
      }
    }
  }
}

TEST(EncounterOverhead, FmpoNeverBelowSmo) {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 3 + gen() % 3;
    const auto d = testing::random_sparse(gen, m, 3, 25);
    if (d.user_count() < 2) continue;
    const std::size_t users = d.user_count();
    const auto g = topology::full_mesh(users);
    const Policy reach_policy = gen() % 2 ? kSmo : kFmpo;
    const auto state = engine::replay(g, engine::round_robin_schedule(g, gen() % 4, gen()), reach_policy);
    const UserId i = gen() % users;
    UserId j = gen() % users;
    if (j == i) j = (i + 1) % users;
    const auto smo = engine::encounter_overhead(d, state, i, j, kSmo);
    const auto fmpo = engine::encounter_overhead(d, state, i, j, kFmpo);
    EXPECT_GE(fmpo.first, smo.first - 1e-12);
    EXPECT_GE(fmpo.second, smo.second - 1e-12);
  }
}

TEST(MetricsCsv, FormatAndRoundTrip) {
  const auto d = unique_tip_dist(4, 3, 200, 0.4, 6);
  const auto g = topology::full_mesh(4);
  const auto records = engine::run(d, g, engine::round_robin_schedule(g, 5, 2), kFmpo);
  std::stringstream io;
  engine::write_metrics_csv(io, records);
  std::string header;
  std::getline(io, header);
  EXPECT_EQ(header, "round,node,policy,kg_bits,kl_bits,oh_round_bits,oh_cum_bits,achieved");
  io.seekg(0);
  const auto back = engine::read_metrics_csv(io);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    EXPECT_EQ(back[k].round, records[k].round);
    EXPECT_EQ(back[k].node, records[k].node);
    EXPECT_EQ(back[k].policy, records[k].policy);
    EXPECT_NEAR(back[k].kg_bits, records[k].kg_bits, 1e-11 * (1 + records[k].kg_bits));
    EXPECT_NEAR(back[k].oh_cum_bits, records[k].oh_cum_bits, 1e-11 * (1 + records[k].oh_cum_bits));
    EXPECT_EQ(back[k].achieved, records[k].achieved);
  }

  std::ostringstream one;
  engine::write_metrics_csv(one, {engine::MetricsRecord{3, 1, kSmo, 1.0 / 3.0, 2.0, 0.0, 0.5, false, 1}});
  EXPECT_EQ(one.str(),
            "round,node,policy,kg_bits,kl_bits,oh_round_bits,oh_cum_bits,achieved\n"
            "3,1,smo,0.333333333333,2,0,0.5,0\n");

  const std::string header_line = "round,node,policy,kg_bits,kl_bits,oh_round_bits,oh_cum_bits,achieved\n";
  for (const std::string& bad : {std::string(""), std::string("round,node\n"), header_line + "0,0,smo,1,2,0,0\n",
                                 header_line + "0,0,xyz,1,2,0,0,0\n", header_line + "0,0,smo,1,2,0,0,2\n",
                                 header_line + "0,0,smo,one,2,0,0,0\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(engine::read_metrics_csv(in), Error) << bad;
  }
}

}  // namespace
}  // namespace kgsim
