// Copyright 2026 The sqw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sqw/types.hpp"

namespace sqw {

// Unordered pair stored canonically as (min, max).
using Edge = std::pair<Vertex, Vertex>;

inline Edge canonical_edge(Vertex a, Vertex b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

/// Simple undirected graph on vertices 0..n-1.
class Graph {
 public:
  Graph() = default;

  /// Throws InvalidArgument on a self-loop or an out-of-range endpoint.
  /// Duplicate edges (in either orientation) are collapsed.
  Graph(std::size_t n, const std::vector<Edge>& edges) : n_(n), adjacency_(n) {
    std::set<Edge> unique;
    for (const auto& [a, b] : edges) {
      if (a >= n || b >= n) {
        throw InvalidArgument("edge (" + std::to_string(a) + "," +
                              std::to_string(b) + ") has an endpoint >= " +
                              std::to_string(n));
      }
      if (a == b) {
        throw InvalidArgument("self-loop at vertex " + std::to_string(a));
      }
      unique.insert(canonical_edge(a, b));
    }
    edges_.assign(unique.begin(), unique.end());
    for (const auto& [a, b] : edges_) {
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
    for (auto& row : adjacency_) std::sort(row.begin(), row.end());
  }

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Canonical edges in lexicographic order.
  const std::vector<Edge>& edges() const { return edges_; }

  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(v); }

  bool has_edge(Vertex a, Vertex b) const {
    if (a >= n_ || b >= n_ || a == b) return false;
    const auto& row = adjacency_[a];
    return std::binary_search(row.begin(), row.end(), b);
  }

  bool is_clique(const std::vector<Vertex>& vertices) const {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (vertices[i] >= n_) return false;
      for (std::size_t j = i + 1; j < vertices.size(); ++j) {
        if (!has_edge(vertices[i], vertices[j])) return false;
      }
    }
    return true;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
};

inline Graph build_graph(std::size_t n, const std::vector<Edge>& edges) {
  return Graph(n, edges);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Graph(n, edges);
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw InvalidArgument("cycle_graph: need at least 3 vertices");
  std::vector<Edge> edges;
  for (Vertex i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph(n, edges);
}

inline bool is_connected(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n <= 1) return true;
  std::vector<bool> seen(n, false);
  std::queue<Vertex> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const Vertex v = frontier.front();
    frontier.pop();
    for (Vertex w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == n;
}

/// Bipartite graph with parts X = {0..x_count-1} and Y = {0..y_count-1}.
/// Edges are (x, y) pairs, kept sorted lexicographically.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  BipartiteGraph(std::size_t x_count, std::size_t y_count,
                 const std::vector<Edge>& edges)
      : x_count_(x_count), y_count_(y_count) {
    if (x_count == 0 || y_count == 0) {
      throw InvalidArgument("bipartite graph parts must be non-empty");
    }
    std::set<Edge> unique;
    for (const auto& [x, y] : edges) {
      if (x >= x_count || y >= y_count) {
        throw InvalidArgument("bipartite edge (" + std::to_string(x) + "," +
                              std::to_string(y) + ") out of range");
      }
      unique.insert({x, y});
    }
    edges_.assign(unique.begin(), unique.end());
  }

  std::size_t x_count() const { return x_count_; }
  std::size_t y_count() const { return y_count_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_edge(Vertex x, Vertex y) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{x, y});
  }

  /// Embedding as a simple graph: X keeps its indices, Y is shifted by
  /// x_count. Canonical edge order of the result matches the (x, y) order.
  Graph as_graph() const {
    std::vector<Edge> edges;
    edges.reserve(edges_.size());
    for (const auto& [x, y] : edges_) edges.emplace_back(x, x_count_ + y);
    return Graph(x_count_ + y_count_, edges);
  }

  friend bool operator==(const BipartiteGraph& a, const BipartiteGraph& b) {
    return a.x_count_ == b.x_count_ && a.y_count_ == b.y_count_ &&
           a.edges_ == b.edges_;
  }

 private:
  std::size_t x_count_ = 0;
  std::size_t y_count_ = 0;
  std::vector<Edge> edges_;
};

inline bool is_connected(const BipartiteGraph& g) { return is_connected(g.as_graph()); }

/// Labeling between the edges of a root graph and the vertices 0..|E|-1 of a
/// derived graph (line graph, or the staggered graph of a Szegedy instance).
class EdgeBijection {
 public:
  EdgeBijection() = default;

  /// Index k is assigned to edges[k]. Throws on duplicate edges.
  explicit EdgeBijection(std::vector<Edge> edges) : backward_(std::move(edges)) {
    for (std::size_t k = 0; k < backward_.size(); ++k) {
      if (!forward_.emplace(backward_[k], k).second) {
        throw InvalidArgument("EdgeBijection: duplicate edge");
      }
    }
  }

  std::size_t size() const { return backward_.size(); }
  bool contains(const Edge& e) const { return forward_.count(e) != 0; }
  std::size_t index_of(const Edge& e) const {
    auto it = forward_.find(e);
    if (it == forward_.end()) {
      throw InvalidArgument("EdgeBijection: edge (" + std::to_string(e.first) +
                            "," + std::to_string(e.second) + ") not labeled");
    }
    return it->second;
  }
  const Edge& edge_of(std::size_t k) const { return backward_.at(k); }
  const std::vector<Edge>& edges() const { return backward_; }

  friend bool operator==(const EdgeBijection& a, const EdgeBijection& b) {
    return a.backward_ == b.backward_;
  }

 private:
  std::map<Edge, std::size_t> forward_;
  std::vector<Edge> backward_;
};

/// List of vertex sets. Used both as a clique cover and as a Krausz partition.
using CliquePartition = std::vector<std::vector<Vertex>>;

struct LineGraph {
  Graph graph;
  EdgeBijection bijection;
};

/// Vertex k of the result is g.edges()[k]; two vertices are adjacent iff the
/// source edges share an endpoint.
inline LineGraph line_graph(const Graph& g) {
  if (g.edge_count() == 0) {
    throw InvalidArgument("line_graph: graph has no edges");
  }
  const auto& edges = g.edges();
  std::vector<std::vector<std::size_t>> incident(g.vertex_count());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    incident[edges[k].first].push_back(k);
    incident[edges[k].second].push_back(k);
  }
  std::vector<Edge> line_edges;
  for (const auto& bundle : incident) {
    for (std::size_t i = 0; i < bundle.size(); ++i) {
      for (std::size_t j = i + 1; j < bundle.size(); ++j) {
        line_edges.emplace_back(bundle[i], bundle[j]);
      }
    }
  }
  return {Graph(edges.size(), line_edges), EdgeBijection(edges)};
}

/// Cliques of L(g) given by the edge bundle at each non-isolated root vertex.
inline CliquePartition induced_krausz_partition(const Graph& root) {
  CliquePartition cliques(root.vertex_count());
  const auto& edges = root.edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    cliques[edges[k].first].push_back(k);
    cliques[edges[k].second].push_back(k);
  }
  std::erase_if(cliques, [](const auto& c) { return c.empty(); });
  return cliques;
}

struct KrauszReport {
  std::vector<std::string> violations;
  // Clique intersection graph (cliques adjacent when they share a vertex) is
  // bipartite.
  bool two_colorable = false;
  // Color per clique when two_colorable, empty otherwise.
  std::vector<int> coloring;

  bool valid() const { return violations.empty(); }
};

inline KrauszReport validate_krausz_partition(const Graph& g,
                                              const CliquePartition& p) {
  KrauszReport report;
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::size_t>> membership(n);
  std::map<Edge, std::size_t> cover_count;

  for (std::size_t c = 0; c < p.size(); ++c) {
    const auto& clique = p[c];
    const std::string tag = "clique " + std::to_string(c);
    std::set<Vertex> seen;
    bool in_range = true;
    for (Vertex v : clique) {
      if (v >= n) {
        report.violations.push_back(tag + ": vertex " + std::to_string(v) +
                                    " out of range");
        in_range = false;
      } else if (!seen.insert(v).second) {
        report.violations.push_back(tag + ": vertex " + std::to_string(v) +
                                    " repeated");
      }
    }
    if (!in_range) continue;
    if (!g.is_clique(clique)) {
      report.violations.push_back(tag + ": not a clique");
    }
    for (Vertex v : seen) membership[v].push_back(c);
    const std::vector<Vertex> members(seen.begin(), seen.end());
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (g.has_edge(members[i], members[j])) {
          ++cover_count[canonical_edge(members[i], members[j])];
        }
      }
    }
  }

  for (const auto& e : g.edges()) {
    const auto it = cover_count.find(e);
    const std::size_t count = it == cover_count.end() ? 0 : it->second;
    const std::string name =
        "(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")";
    if (count == 0) {
      report.violations.push_back("edge " + name + " uncovered");
    } else if (count > 1) {
      report.violations.push_back("edge " + name + " covered " +
                                  std::to_string(count) + " times");
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (membership[v].size() > 2) {
      report.violations.push_back("vertex " + std::to_string(v) + " lies in " +
                                  std::to_string(membership[v].size()) +
                                  " cliques");
    }
  }

  // Two-coloring of the clique intersection graph.
  std::vector<std::vector<std::size_t>> adjacent(p.size());
  for (const auto& cliques : membership) {
    for (std::size_t i = 0; i < cliques.size(); ++i) {
      for (std::size_t j = i + 1; j < cliques.size(); ++j) {
        adjacent[cliques[i]].push_back(cliques[j]);
        adjacent[cliques[j]].push_back(cliques[i]);
      }
    }
  }
  std::vector<int> color(p.size(), -1);
  bool bipartite = true;
  for (std::size_t start = 0; start < p.size() && bipartite; ++start) {
    if (color[start] != -1) continue;
    color[start] = 0;
    std::queue<std::size_t> frontier;
    frontier.push(start);
    while (!frontier.empty() && bipartite) {
      const std::size_t c = frontier.front();
      frontier.pop();
      for (std::size_t d : adjacent[c]) {
        if (color[d] == -1) {
          color[d] = 1 - color[c];
          frontier.push(d);
        } else if (color[d] == color[c]) {
          bipartite = false;
          break;
        }
      }
    }
  }
  report.two_colorable = bipartite;
  if (bipartite) report.coloring = std::move(color);
  return report;
}

class RootGraphError : public Error {
 public:
  enum class Kind { kInvalidPartition, kMissingVertex, kAmbiguousLabeling };

  RootGraphError(Kind kind, const std::string& message)
      : Error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct RootGraph {
  BipartiteGraph graph;
  // Maps each root edge (x, y) to the vertex of g it came from.
  EdgeBijection bijection;
};

/// Rebuilds the bipartite root of g from a two-colored Krausz partition:
/// X-vertex per clique of part_a, Y-vertex per clique of part_b, and one edge
/// per vertex of g (the unique pair of cliques containing it).
inline RootGraph root_graph_from_two_colorable_partition(
    const Graph& g, const CliquePartition& part_a, const CliquePartition& part_b) {
  using Kind = RootGraphError::Kind;
  const std::size_t n = g.vertex_count();

  auto owner = [n](const CliquePartition& part, const char* name) {
    std::vector<std::optional<std::size_t>> result(n);
    for (std::size_t c = 0; c < part.size(); ++c) {
      for (Vertex v : part[c]) {
        if (v >= n) {
          throw RootGraphError(Kind::kInvalidPartition,
                               std::string(name) + " clique " +
                                   std::to_string(c) + " has vertex " +
                                   std::to_string(v) + " out of range");
        }
        if (result[v] && *result[v] != c) {
          throw RootGraphError(Kind::kInvalidPartition,
                               "vertex " + std::to_string(v) + " lies in two " +
                                   name + " cliques");
        }
        result[v] = c;
      }
    }
    return result;
  };
  const auto owner_a = owner(part_a, "first-class");
  const auto owner_b = owner(part_b, "second-class");

  // A vertex pair shared by one clique of each class has no consistent (x, y)
  // label; report it before any other partition defect.
  for (std::size_t a = 0; a < part_a.size(); ++a) {
    for (std::size_t b = 0; b < part_b.size(); ++b) {
      std::vector<Vertex> shared;
      for (Vertex v : part_a[a]) {
        if (std::find(part_b[b].begin(), part_b[b].end(), v) != part_b[b].end()) {
          shared.push_back(v);
        }
      }
      std::sort(shared.begin(), shared.end());
      shared.erase(std::unique(shared.begin(), shared.end()), shared.end());
      if (shared.size() >= 2) {
        throw RootGraphError(
            Kind::kAmbiguousLabeling,
            "cliques a" + std::to_string(a) + " and b" + std::to_string(b) +
                " share " + std::to_string(shared.size()) + " vertices");
      }
    }
  }

  for (Vertex v = 0; v < n; ++v) {
    if (!owner_a[v] || !owner_b[v]) {
      throw RootGraphError(Kind::kMissingVertex,
                           "vertex " + std::to_string(v) +
                               " is missing from a color class");
    }
  }

  CliquePartition combined = part_a;
  combined.insert(combined.end(), part_b.begin(), part_b.end());
  const auto report = validate_krausz_partition(g, combined);
  if (!report.valid()) {
    throw RootGraphError(Kind::kInvalidPartition,
                         "not a Krausz partition: " + report.violations.front());
  }

  std::vector<Edge> root_edges(n);
  for (Vertex v = 0; v < n; ++v) root_edges[v] = {*owner_a[v], *owner_b[v]};
  EdgeBijection bijection(root_edges);
  return {BipartiteGraph(part_a.size(), part_b.size(), root_edges),
          std::move(bijection)};
}

/// Induced K_{1,3}: {center, leaf, leaf, leaf} with pairwise non-adjacent
/// leaves. Exhaustive over centers and neighbor triples.
inline std::optional<std::array<Vertex, 4>> find_claw(const Graph& g) {
  for (Vertex c = 0; c < g.vertex_count(); ++c) {
    const auto& nb = g.neighbors(c);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (g.has_edge(nb[i], nb[j])) continue;
        for (std::size_t k = j + 1; k < nb.size(); ++k) {
          if (!g.has_edge(nb[i], nb[k]) && !g.has_edge(nb[j], nb[k])) {
            return std::array<Vertex, 4>{c, nb[i], nb[j], nb[k]};
          }
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace sqw
