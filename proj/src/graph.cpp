#include "kgsim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

#include "kgsim/error.hpp"
#include "kgsim/random.hpp"

namespace kgsim::topology {

namespace {
constexpr int kMaxConnectAttempts = 1000;
}

Graph::Graph(std::size_t node_count) : adjacency_(node_count) {}

bool Graph::has_edge(UserId a, UserId b) const {
  if (a >= node_count() || b >= node_count()) return false;
  const auto& adj = adjacency_[a];
  return std::binary_search(adj.begin(), adj.end(), b);
}

double Graph::mean_degree() const {
  if (adjacency_.empty()) return 0.0;
  return 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(adjacency_.size());
}

info::VariableSet Graph::neighbors(UserId node) const {
  if (node >= node_count()) throw Error(Errc::BadVariableIndex, "node " + std::to_string(node));
  return info::VariableSet(adjacency_[node]);
}

void Graph::add_edge(UserId a, UserId b) {
  if (a >= node_count() || b >= node_count()) {
    throw Error(Errc::InvalidEdge, "edge (" + std::to_string(a) + "," + std::to_string(b) +
                                       ") outside [0, " + std::to_string(node_count()) + ")");
  }
  if (a == b) throw Error(Errc::SelfLoop, "self-loop at node " + std::to_string(a));
  if (has_edge(a, b)) return;
  auto insert_sorted = [](std::vector<UserId>& adj, UserId x) {
    adj.insert(std::lower_bound(adj.begin(), adj.end(), x), x);
  };
  insert_sorted(adjacency_[a], b);
  insert_sorted(adjacency_[b], a);
  const Edge e{std::min(a, b), std::max(a, b)};
  edges_.insert(std::lower_bound(edges_.begin(), edges_.end(), e), e);
}

Graph full_mesh(std::size_t m) {
  if (m < 2) throw Error(Errc::TooFewNodes, "full mesh needs at least 2 nodes");
  Graph g(m);
  for (UserId a = 0; a < m; ++a) {
    for (UserId b = a + 1; b < m; ++b) g.add_edge(a, b);
  }
  return g;
}

Graph random_geometric(std::size_t m, double radius, std::uint64_t seed) {
  if (m < 2) throw Error(Errc::TooFewNodes, "geometric graph needs at least 2 nodes");
  if (!(radius > 0.0 && radius <= std::sqrt(2.0))) {
    throw Error(Errc::InvalidConfig, "radius must lie in (0, sqrt(2)]");
  }
  const double r2 = radius * radius;
  std::vector<std::pair<double, double>> points(m);
  for (int attempt = 0; attempt < kMaxConnectAttempts; ++attempt) {
    Rng rng(splitmix64(seed + static_cast<std::uint64_t>(attempt)));
    for (auto& [x, y] : points) {
      x = rng.uniform();
      y = rng.uniform();
    }
    Graph g(m);
    for (UserId a = 0; a < m; ++a) {
      for (UserId b = a + 1; b < m; ++b) {
        const double dx = points[a].first - points[b].first;
        const double dy = points[a].second - points[b].second;
        if (dx * dx + dy * dy <= r2) g.add_edge(a, b);
      }
    }
    if (is_connected(g)) return g;
  }
  throw Error(Errc::CouldNotConnect, "no connected placement of " + std::to_string(m) +
                                         " nodes at radius " + std::to_string(radius));
}

Graph from_edge_list(std::size_t m, std::span<const Edge> pairs) {
  Graph g(m);
  for (const auto& [a, b] : pairs) g.add_edge(a, b);
  return g;
}

namespace {

// Hop distances from `source`; unreachable nodes keep SIZE_MAX.
std::vector<std::size_t> bfs(const Graph& g, UserId source) {
  std::vector<std::size_t> dist(g.node_count(), SIZE_MAX);
  std::queue<UserId> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const UserId u = frontier.front();
    frontier.pop();
    for (UserId w : g.neighbors(u)) {
      if (dist[w] == SIZE_MAX) {
        dist[w] = dist[u] + 1;
        frontier.push(w);
      }
    }
  }
  return dist;
}

}  // namespace

bool is_connected(const Graph& g) {
  if (g.node_count() == 0) return true;
  const auto dist = bfs(g, 0);
  return std::none_of(dist.begin(), dist.end(), [](std::size_t d) { return d == SIZE_MAX; });
}

std::size_t diameter(const Graph& g) {
  std::size_t best = 0;
  for (UserId s = 0; s < g.node_count(); ++s) {
    for (std::size_t d : bfs(g, s)) {
      if (d == SIZE_MAX) throw Error(Errc::NotConnected, "diameter of a disconnected graph");
      best = std::max(best, d);
    }
  }
  return best;
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "missing node count", line_no);
  std::size_t m = 0;
  {
    std::istringstream head(line);
    if (!(head >> m) || !(head >> std::ws).eof()) throw Error(Errc::ParseError, "bad node count", line_no);
  }
  Graph g(m);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    long long a = -1;
    long long b = -1;
    if (!(fields >> a >> b) || !(fields >> std::ws).eof() || a < 0 || b < 0) {
      throw Error(Errc::ParseError, "expected 'i j'", line_no);
    }
    if (static_cast<std::size_t>(a) >= m || static_cast<std::size_t>(b) >= m) {
      throw Error(Errc::InvalidEdge, "node id outside [0, M)", line_no);
    }
    try {
      g.add_edge(static_cast<UserId>(a), static_cast<UserId>(b));
    } catch (const Error& e) {
      throw Error(e.code(), "bad edge", line_no);
    }
  }
  return g;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.node_count() << '\n';
  for (const auto& [a, b] : g.edges()) out << a << ' ' << b << '\n';
}

}  // namespace kgsim::topology
