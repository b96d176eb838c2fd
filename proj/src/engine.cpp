#include "kgsim/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "kgsim/error.hpp"
#include "kgsim/measures.hpp"
#include "kgsim/random.hpp"

namespace kgsim::engine {

std::string_view policy_name(Policy policy) noexcept {
  return policy == Policy::SendMineOnly ? "smo" : "fmpo";
}

Policy parse_policy(std::string_view name) {
  if (name == "smo") return Policy::SendMineOnly;
  if (name == "fmpo") return Policy::ForwardMinePlusOthers;
  throw Error(Errc::InvalidConfig, "unknown policy '" + std::string(name) + "'");
}

KnowledgeState::KnowledgeState(std::size_t node_count) {
  know_.reserve(node_count);
  for (std::size_t i = 0; i < node_count; ++i) know_.push_back(VariableSet::single(static_cast<UserId>(i)));
}

void KnowledgeState::set_known(UserId node, VariableSet known) {
  if (!known.contains(node)) {
    throw Error(Errc::SelfNotInKnowledgeSet, "node " + std::to_string(node) + " must hold its own tips");
  }
  know_.at(node) = std::move(known);
}

KnowledgeState init_state(std::size_t m) { return KnowledgeState(m); }

void validate_schedule(const Graph& g, const Schedule& schedule) {
  std::vector<std::size_t> seen_in(g.node_count(), SIZE_MAX);
  for (std::size_t r = 0; r < schedule.rounds.size(); ++r) {
    for (const auto& [a, b] : schedule.rounds[r]) {
      if (a == b) throw Error(Errc::SelfEncounter, "node " + std::to_string(a) + " paired with itself");
      if (!g.has_edge(a, b)) {
        throw Error(Errc::NotAnEdge, "(" + std::to_string(a) + "," + std::to_string(b) + ") in round " +
                                         std::to_string(r));
      }
      for (UserId n : {a, b}) {
        if (seen_in[n] == r) {
          throw Error(Errc::InvalidSchedule,
                      "node " + std::to_string(n) + " appears twice in round " + std::to_string(r));
        }
        seen_in[n] = r;
      }
    }
  }
}

Schedule focal_schedule(const Graph& g, UserId focal) {
  Schedule s;
  for (UserId j : g.neighbors(focal)) s.rounds.push_back({Edge{focal, j}});
  return s;
}

Schedule round_robin_schedule(const Graph& g, std::size_t rounds, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges = g.edges();
  std::vector<char> busy(g.node_count());
  Schedule s;
  s.rounds.reserve(rounds);
  for (std::size_t r = 0; r < rounds; ++r) {
    rng.shuffle(std::span<Edge>(edges));
    std::fill(busy.begin(), busy.end(), 0);
    Round round;
    for (const auto& [a, b] : edges) {
      if (busy[a] || busy[b]) continue;
      busy[a] = busy[b] = 1;
      round.push_back({a, b});
    }
    s.rounds.push_back(std::move(round));
  }
  return s;
}

Schedule edge_sweep_schedule(const Graph& g, std::size_t sweeps) {
  Schedule s;
  for (std::size_t k = 0; k < sweeps; ++k) {
    for (const Edge& e : g.edges()) s.rounds.push_back({e});
  }
  return s;
}

Schedule interleave(const Schedule& a, const Schedule& b) {
  Schedule s;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t r = 0; r < n; ++r) {
    if (r < a.size()) s.rounds.push_back(a.rounds[r]);
    if (r < b.size()) s.rounds.push_back(b.rounds[r]);
  }
  return s;
}

Overheads encounter_overhead(const info::JointDistribution& dist, const KnowledgeState& state,
                             UserId i, UserId j, Policy policy) {
  if (i == j) throw Error(Errc::SelfEncounter, "node " + std::to_string(i) + " paired with itself");
  const VariableSet& know_i = state.known_by(i);
  const VariableSet& know_j = state.known_by(j);
  if (policy == Policy::SendMineOnly) {
    return {info::shared_information(dist, VariableSet::single(i), know_j),
            info::shared_information(dist, VariableSet::single(j), know_i)};
  }
  const Bits oh = info::shared_information(dist, know_i, know_j);
  return {oh, oh};
}

namespace {

// Knowledge sets of i and j after they exchange under `policy`.
std::pair<VariableSet, VariableSet> exchanged(const KnowledgeState& state, UserId i, UserId j,
                                              Policy policy) {
  VariableSet next_i = state.known_by(i);
  VariableSet next_j = state.known_by(j);
  if (policy == Policy::SendMineOnly) {
    next_i.insert(j);
    next_j.insert(i);
  } else {
    next_i = set_union(next_i, next_j);
    next_j = next_i;
  }
  return {std::move(next_i), std::move(next_j)};
}

}  // namespace

EncounterOutcome apply_encounter(const info::JointDistribution& dist, const Graph& g,
                                 const KnowledgeState& state, UserId i, UserId j, Policy policy) {
  if (i == j) throw Error(Errc::SelfEncounter, "node " + std::to_string(i) + " paired with itself");
  if (!g.has_edge(i, j)) {
    throw Error(Errc::NotAnEdge, "(" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  EncounterOutcome out{state, 0.0, 0.0, encounter_overhead(dist, state, i, j, policy)};
  auto [next_i, next_j] = exchanged(state, i, j, policy);
  out.gain_first = info::knowledge_gain(dist, i, next_i) - info::knowledge_gain(dist, i, state.known_by(i));
  out.gain_second = info::knowledge_gain(dist, j, next_j) - info::knowledge_gain(dist, j, state.known_by(j));
  out.state.set_known(i, std::move(next_i));
  out.state.set_known(j, std::move(next_j));
  return out;
}

std::vector<MetricsRecord> run(const info::JointDistribution& dist, const Graph& g,
                               const Schedule& schedule, Policy policy, double tolerance) {
  const std::size_t m = g.node_count();
  if (dist.user_count() != m) {
    throw Error(Errc::ShapeMismatch, "distribution has " + std::to_string(dist.user_count()) +
                                         " users but graph has " + std::to_string(m) + " nodes");
  }
  validate_schedule(g, schedule);

  KnowledgeState state(m);
  std::vector<Bits> kl(m);
  std::vector<Bits> kg(m, 0.0);
  std::vector<Bits> oh_round(m);
  std::vector<Bits> oh_cum(m, 0.0);
  std::vector<std::size_t> encounters(m, 0);
  for (UserId n = 0; n < m; ++n) kl[n] = info::knowledge_limit(dist, n);

  std::vector<MetricsRecord> records;
  records.reserve(schedule.size() * m);
  for (std::size_t r = 0; r < schedule.size(); ++r) {
    const KnowledgeState snapshot = state;
    std::fill(oh_round.begin(), oh_round.end(), 0.0);
    for (const auto& [i, j] : schedule.rounds[r]) {
      const Overheads oh = encounter_overhead(dist, snapshot, i, j, policy);
      auto [next_i, next_j] = exchanged(snapshot, i, j, policy);
      kg[i] = info::knowledge_gain(dist, i, next_i);
      kg[j] = info::knowledge_gain(dist, j, next_j);
      state.set_known(i, std::move(next_i));
      state.set_known(j, std::move(next_j));
      oh_round[i] = oh.first;
      oh_round[j] = oh.second;
      ++encounters[i];
      ++encounters[j];
    }
    for (UserId n = 0; n < m; ++n) {
      oh_cum[n] += oh_round[n];
      records.push_back(MetricsRecord{r, n, policy, kg[n], kl[n], oh_round[n], oh_cum[n],
                                      kl[n] - kg[n] <= tolerance, encounters[n]});
    }
  }
  return records;
}

std::optional<std::size_t> steps_to_limit(const std::vector<MetricsRecord>& records, UserId node,
                                          double tolerance) {
  bool seen = false;
  for (const MetricsRecord& rec : records) {
    if (rec.node != node) continue;
    if (!seen && rec.kl_bits <= tolerance) return 0;
    seen = true;
    if (rec.kl_bits - rec.kg_bits <= tolerance) return rec.encounters;
  }
  if (!seen) throw Error(Errc::BadVariableIndex, "no records for node " + std::to_string(node));
  return std::nullopt;
}

KnowledgeState replay(const Graph& g, const Schedule& schedule, Policy policy) {
  validate_schedule(g, schedule);
  KnowledgeState state(g.node_count());
  for (const Round& round : schedule.rounds) {
    const KnowledgeState snapshot = state;
    for (const auto& [i, j] : round) {
      auto [next_i, next_j] = exchanged(snapshot, i, j, policy);
      state.set_known(i, std::move(next_i));
      state.set_known(j, std::move(next_j));
    }
  }
  return state;
}

namespace {

constexpr std::string_view kMetricsHeader =
    "round,node,policy,kg_bits,kl_bits,oh_round_bits,oh_cum_bits,achieved";

void append_real(std::string& line, double value) {
  char buf[32];
  // Rounding noise below the printed precision must not show up as "-0".
  if (value == 0.0) value = 0.0;
  std::snprintf(buf, sizeof buf, "%.12g", value);
  line += buf;
}

double parse_real(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(Errc::ParseError, "bad number '" + std::string(field) + "'", line_no);
  }
  return value;
}

std::uint64_t parse_count(std::string_view field, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(Errc::ParseError, "bad integer '" + std::string(field) + "'", line_no);
  }
  return value;
}

}  // namespace

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRecord>& records) {
  out << kMetricsHeader << '\n';
  std::string line;
  for (const MetricsRecord& rec : records) {
    line = std::to_string(rec.round) + ',' + std::to_string(rec.node) + ',' +
           std::string(policy_name(rec.policy)) + ',';
    append_real(line, rec.kg_bits);
    line += ',';
    append_real(line, rec.kl_bits);
    line += ',';
    append_real(line, rec.oh_round_bits);
    line += ',';
    append_real(line, rec.oh_cum_bits);
    line += rec.achieved ? ",1\n" : ",0\n";
    out << line;
  }
}

std::vector<MetricsRecord> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::EmptyInput, "metrics file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kMetricsHeader) throw Error(Errc::ParseError, "unexpected metrics header", 1);

  std::vector<MetricsRecord> records;
  std::size_t line_no = 1;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fields.clear();
    std::string_view text(line);
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = text.find(',', pos);
      fields.push_back(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (fields.size() != 8) throw Error(Errc::ParseError, "expected 8 fields", line_no);
    MetricsRecord rec;
    rec.round = parse_count(fields[0], line_no);
    rec.node = static_cast<UserId>(parse_count(fields[1], line_no));
    try {
      rec.policy = parse_policy(fields[2]);
    } catch (const Error&) {
      throw Error(Errc::ParseError, "bad policy", line_no);
    }
    rec.kg_bits = parse_real(fields[3], line_no);
    rec.kl_bits = parse_real(fields[4], line_no);
    rec.oh_round_bits = parse_real(fields[5], line_no);
    rec.oh_cum_bits = parse_real(fields[6], line_no);
    if (fields[7] != "0" && fields[7] != "1") throw Error(Errc::ParseError, "bad achieved flag", line_no);
    rec.achieved = fields[7] == "1";
    records.push_back(rec);
  }
  return records;
}

}  // namespace kgsim::engine
