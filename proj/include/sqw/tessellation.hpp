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
#include <cmath>
#include <initializer_list>
#include <iterator>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqw/graph.hpp"
#include "sqw/types.hpp"

namespace sqw {

/// A clique of the host graph carrying a unit vector of nonzero amplitudes.
/// Vertices are kept sorted; amplitudes follow the same order and are
/// renormalized on construction.
class Polygon {
 public:
  Polygon() = default;

  Polygon(std::vector<Vertex> vertices, std::vector<Complex> amplitudes) {
    if (vertices.empty()) throw InvalidArgument("polygon must be non-empty");
    if (vertices.size() != amplitudes.size()) {
      throw InvalidArgument("polygon: vertex and amplitude counts differ");
    }
    std::vector<std::size_t> order(vertices.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vertices[a] < vertices[b]; });
    double norm2 = 0.0;
    for (std::size_t i : order) {
      if (!vertices_.empty() && vertices_.back() == vertices[i]) {
        throw InvalidArgument("polygon: vertex " + std::to_string(vertices[i]) +
                              " repeated");
      }
      if (amplitudes[i] == Complex(0.0, 0.0)) {
        throw InvalidArgument("polygon: zero amplitude on vertex " +
                              std::to_string(vertices[i]));
      }
      vertices_.push_back(vertices[i]);
      amplitudes_.push_back(amplitudes[i]);
      norm2 += std::norm(amplitudes[i]);
    }
    const double norm = std::sqrt(norm2);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw InvalidArgument("polygon: amplitude vector cannot be normalized");
    }
    // Already-unit input is kept bit-exact so serialized polygons reload equal.
    if (std::abs(norm - 1.0) > 1e-14) {
      for (auto& a : amplitudes_) a /= norm;
    }
  }

  static Polygon uniform(std::vector<Vertex> vertices) {
    std::vector<Complex> amps(vertices.size(), Complex(1.0, 0.0));
    return Polygon(std::move(vertices), std::move(amps));
  }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  std::size_t size() const { return vertices_.size(); }

  bool contains(Vertex v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
  }

  // Amplitude on v, zero when v is outside the polygon.
  Complex amplitude(Vertex v) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
    if (it == vertices_.end() || *it != v) return {0.0, 0.0};
    return amplitudes_[static_cast<std::size_t>(it - vertices_.begin())];
  }

  ComplexVector to_vector(std::size_t n) const {
    ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      if (vertices_[i] >= n) {
        throw InvalidArgument("polygon vertex " + std::to_string(vertices_[i]) +
                              " out of range for dimension " + std::to_string(n));
      }
      out(static_cast<Eigen::Index>(vertices_[i])) = amplitudes_[i];
    }
    return out;
  }

  // <this|other>
  Complex inner(const Polygon& other) const {
    Complex sum{0.0, 0.0};
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      sum += std::conj(amplitudes_[i]) * other.amplitude(vertices_[i]);
    }
    return sum;
  }

  friend bool operator==(const Polygon& a, const Polygon& b) {
    return a.vertices_ == b.vertices_ && a.amplitudes_ == b.amplitudes_;
  }

 private:
  std::vector<Vertex> vertices_;
  std::vector<Complex> amplitudes_;
};

/// Ordered list of pairwise disjoint polygons. A partial tessellation leaves
/// some vertices uncovered; those are the marked vertices of the generalized
/// model.
struct Tessellation {
  std::vector<Polygon> polygons;
  bool partial = false;

  std::size_t size() const { return polygons.size(); }

  std::vector<Vertex> covered() const {
    std::vector<Vertex> out;
    for (const auto& p : polygons) {
      out.insert(out.end(), p.vertices().begin(), p.vertices().end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Columns are the polygon vectors (the isometry sum_k |poly_k><k|).
  Operator basis_matrix(std::size_t n) const {
    Operator a = Operator::Zero(static_cast<Eigen::Index>(n),
                                static_cast<Eigen::Index>(polygons.size()));
    for (std::size_t k = 0; k < polygons.size(); ++k) {
      a.col(static_cast<Eigen::Index>(k)) = polygons[k].to_vector(n);
    }
    return a;
  }

  friend bool operator==(const Tessellation& a, const Tessellation& b) {
    return a.partial == b.partial && a.polygons == b.polygons;
  }
};

/// Structural check used before building operators: vertices in range and
/// polygons pairwise disjoint. Throws InvalidArgument.
inline void require_disjoint(const Tessellation& t, std::size_t n) {
  std::vector<bool> used(n, false);
  for (std::size_t k = 0; k < t.polygons.size(); ++k) {
    for (Vertex v : t.polygons[k].vertices()) {
      if (v >= n) {
        throw InvalidArgument("polygon " + std::to_string(k) + " has vertex " +
                              std::to_string(v) + " >= " + std::to_string(n));
      }
      if (used[v]) {
        throw InvalidArgument("polygons overlap at vertex " + std::to_string(v));
      }
      used[v] = true;
    }
  }
}

inline Tessellation uniform_tessellation(
    const Graph& g, const std::vector<std::vector<Vertex>>& polygon_vertex_sets) {
  Tessellation t;
  for (const auto& set : polygon_vertex_sets) {
    if (!g.is_clique(set)) {
      std::string list;
      for (Vertex v : set) list += (list.empty() ? "" : ",") + std::to_string(v);
      throw InvalidArgument("polygon {" + list + "} is not a clique");
    }
    t.polygons.push_back(Polygon::uniform(set));
  }
  require_disjoint(t, g.vertex_count());
  t.partial = t.covered().size() != g.vertex_count();
  return t;
}

struct TessellationReport {
  std::vector<std::string> violations;
  // Edges of the host graph inside no polygon of any tessellation. Only a
  // violation when every tessellation is full.
  std::vector<Edge> uncovered_edges;
  // Polygon pairs from different tessellations sharing two or more vertices:
  // (tessellation i, polygon k, tessellation j, polygon k', shared vertices).
  struct SharedIntersection {
    std::size_t first_tessellation;
    std::size_t first_polygon;
    std::size_t second_tessellation;
    std::size_t second_polygon;
    std::vector<Vertex> shared;
  };
  std::vector<SharedIntersection> multi_vertex_intersections;
  // Vertices missing from some tessellation.
  std::vector<Vertex> marked;

  bool valid() const { return violations.empty(); }
};

namespace detail {

inline void check_tessellation(const Graph& g, const Tessellation& t,
                               const std::string& tag,
                               std::vector<std::string>& out) {
  const std::size_t n = g.vertex_count();
  std::vector<int> owner(n, -1);
  for (std::size_t k = 0; k < t.polygons.size(); ++k) {
    const auto& poly = t.polygons[k];
    const std::string ptag = tag + " polygon " + std::to_string(k);
    bool in_range = true;
    for (Vertex v : poly.vertices()) {
      if (v >= n) {
        out.push_back(ptag + ": vertex " + std::to_string(v) + " out of range");
        in_range = false;
        continue;
      }
      if (owner[v] != -1) {
        out.push_back(ptag + ": overlaps polygon " + std::to_string(owner[v]) +
                      " at vertex " + std::to_string(v));
      } else {
        owner[v] = static_cast<int>(k);
      }
    }
    if (in_range && !g.is_clique(poly.vertices())) {
      out.push_back(ptag + ": not a clique");
    }
    double norm2 = 0.0;
    for (const auto& a : poly.amplitudes()) {
      if (a == Complex(0.0, 0.0)) out.push_back(ptag + ": zero amplitude");
      norm2 += std::norm(a);
    }
    if (std::abs(norm2 - 1.0) > tol::kVerify) {
      out.push_back(ptag + ": amplitude vector is not unit");
    }
  }
  const auto uncovered = std::count(owner.begin(), owner.end(), -1);
  if (!t.partial && uncovered > 0) {
    out.push_back(tag + ": " + std::to_string(uncovered) +
                  " vertices uncovered by a full tessellation");
  }
  if (t.partial && uncovered == 0) {
    out.push_back(tag + ": flagged partial but covers every vertex");
  }
}

}  // namespace detail

/// Per-tessellation invariants plus the family edge-cover condition. Requires
/// at least two tessellations (InvalidArgument otherwise).
inline TessellationReport validate_tessellation_family(
    const Graph& g, std::span<const Tessellation> tessellations) {
  if (tessellations.size() < 2) {
    throw InvalidArgument("a tessellation family needs at least two tessellations");
  }
  TessellationReport report;
  const std::size_t n = g.vertex_count();
  for (std::size_t i = 0; i < tessellations.size(); ++i) {
    detail::check_tessellation(g, tessellations[i], "tessellation " + std::to_string(i),
                               report.violations);
  }

  bool any_partial = false;
  std::vector<bool> in_some(n, false), in_all(n, true);
  for (const auto& t : tessellations) {
    any_partial = any_partial || t.partial;
    std::vector<bool> here(n, false);
    for (const auto& p : t.polygons) {
      for (Vertex v : p.vertices()) {
        if (v < n) here[v] = true;
      }
    }
    for (Vertex v = 0; v < n; ++v) {
      in_some[v] = in_some[v] || here[v];
      in_all[v] = in_all[v] && here[v];
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (!in_all[v]) report.marked.push_back(v);
    if (!in_some[v]) {
      report.violations.push_back("vertex " + std::to_string(v) +
                                  " lies in no tessellation");
    }
  }

  std::set<Edge> covered;
  for (const auto& t : tessellations) {
    for (const auto& p : t.polygons) {
      const auto& vs = p.vertices();
      for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) covered.insert({vs[i], vs[j]});
      }
    }
  }
  for (const auto& e : g.edges()) {
    if (!covered.count(e)) report.uncovered_edges.push_back(e);
  }
  if (!any_partial) {
    for (const auto& e : report.uncovered_edges) {
      report.violations.push_back("edge (" + std::to_string(e.first) + "," +
                                  std::to_string(e.second) +
                                  ") lies in no polygon");
    }
  }

  for (std::size_t i = 0; i < tessellations.size(); ++i) {
    for (std::size_t j = i + 1; j < tessellations.size(); ++j) {
      const auto& a = tessellations[i].polygons;
      const auto& b = tessellations[j].polygons;
      for (std::size_t k = 0; k < a.size(); ++k) {
        for (std::size_t l = 0; l < b.size(); ++l) {
          std::vector<Vertex> shared;
          std::set_intersection(a[k].vertices().begin(), a[k].vertices().end(),
                                b[l].vertices().begin(), b[l].vertices().end(),
                                std::back_inserter(shared));
          if (shared.size() >= 2) {
            report.multi_vertex_intersections.push_back({i, k, j, l, shared});
          }
        }
      }
    }
  }
  return report;
}

inline TessellationReport validate_tessellation_family(
    const Graph& g, std::initializer_list<Tessellation> tessellations) {
  return validate_tessellation_family(
      g, std::span<const Tessellation>(tessellations.begin(), tessellations.size()));
}

struct IntersectionTable {
  // cells[k][l] = a_k ∩ b_l
  std::vector<std::vector<std::vector<Vertex>>> cells;
  std::size_t max_cardinality = 0;
  // Lexicographically first pair attaining max_cardinality.
  std::size_t argmax_first = 0;
  std::size_t argmax_second = 0;
};

inline IntersectionTable polygon_intersections(const Tessellation& a,
                                               const Tessellation& b) {
  IntersectionTable table;
  table.cells.assign(a.size(), std::vector<std::vector<Vertex>>(b.size()));
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (std::size_t l = 0; l < b.size(); ++l) {
      auto& cell = table.cells[k][l];
      std::set_intersection(a.polygons[k].vertices().begin(),
                            a.polygons[k].vertices().end(),
                            b.polygons[l].vertices().begin(),
                            b.polygons[l].vertices().end(),
                            std::back_inserter(cell));
      if (cell.size() > table.max_cardinality) {
        table.max_cardinality = cell.size();
        table.argmax_first = k;
        table.argmax_second = l;
      }
    }
  }
  return table;
}

/// Vertices not covered by every tessellation.
inline std::vector<Vertex> marked_vertices(const Graph& g,
                                           std::span<const Tessellation> tessellations) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    for (const auto& t : tessellations) {
      const bool inside = std::any_of(t.polygons.begin(), t.polygons.end(),
                                      [v](const Polygon& p) { return p.contains(v); });
      if (!inside) {
        out.push_back(v);
        break;
      }
    }
  }
  return out;
}

inline std::vector<Vertex> marked_vertices(const Graph& g,
                                           std::initializer_list<Tessellation> ts) {
  return marked_vertices(g, std::span<const Tessellation>(ts.begin(), ts.size()));
}

}  // namespace sqw
