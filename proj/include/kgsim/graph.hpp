#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "kgsim/variable_set.hpp"

namespace kgsim::topology {

using Edge = std::pair<UserId, UserId>;

// Undirected simple graph over nodes [0, M). Edges are stored once with
// first < second, sorted.
class Graph {
 public:
  explicit Graph(std::size_t node_count);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool has_edge(UserId a, UserId b) const;
  std::size_t degree(UserId node) const { return adjacency_.at(node).size(); }
  double mean_degree() const;

  // Distinct neighbor ids in ascending order; never contains `node`.
  info::VariableSet neighbors(UserId node) const;

  // Throws InvalidEdge or SelfLoop. Repeated edges are ignored.
  void add_edge(UserId a, UserId b);

 private:
  std::vector<std::vector<UserId>> adjacency_;
  std::vector<Edge> edges_;
};

// Throws TooFewNodes for m < 2.
Graph full_mesh(std::size_t m);

// Uniform points in the unit square joined when within `radius`. Draws
// again with a derived seed until the graph is connected; throws
// CouldNotConnect after 1000 attempts.
Graph random_geometric(std::size_t m, double radius, std::uint64_t seed);

Graph from_edge_list(std::size_t m, std::span<const Edge> pairs);

bool is_connected(const Graph& g);
// Largest shortest-path hop count. Throws NotConnected.
std::size_t diameter(const Graph& g);

// Edge-list file: first line M, then one "i j" pair per line.
Graph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace kgsim::topology
