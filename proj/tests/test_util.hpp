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

// Random instance generators and reference implementations shared by the unit
// tests and the acceptance runner. The reference code deliberately avoids the
// library's operator builders.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sqw/sqw.hpp"

namespace sqw::testing {

using Rng = std::mt19937_64;

inline std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Nonzero amplitude with modulus in [0.2, 1] and, when phased, random phase.
inline Complex random_amplitude(Rng& rng, bool phased) {
  const double r = uniform_real(rng, 0.2, 1.0);
  const double phi = phased ? uniform_real(rng, -std::numbers::pi, std::numbers::pi) : 0.0;
  return std::polar(r, phi);
}

inline Polygon random_polygon(Rng& rng, std::vector<Vertex> vertices, bool phased) {
  std::vector<Complex> amps;
  for (std::size_t i = 0; i < vertices.size(); ++i) amps.push_back(random_amplitude(rng, phased));
  return Polygon(std::move(vertices), std::move(amps));
}

/// Random partition of 0..n-1 into blocks of size 1..max_block.
inline std::vector<std::vector<Vertex>> random_partition(Rng& rng, std::size_t n,
                                                          std::size_t max_block) {
  std::vector<Vertex> order(n);
  for (Vertex v = 0; v < n; ++v) order[v] = v;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<Vertex>> blocks;
  std::size_t i = 0;
  while (i < n) {
    const std::size_t size = std::min(n - i, uniform_int(rng, 1, max_block));
    blocks.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                        order.begin() + static_cast<std::ptrdiff_t>(i + size));
    i += size;
  }
  return blocks;
}

struct StaggeredInstance {
  Graph graph;
  std::vector<Tessellation> tessellations;

  std::size_t n() const { return graph.vertex_count(); }
  const Tessellation& alpha() const { return tessellations[0]; }
  const Tessellation& beta() const { return tessellations[1]; }
};

/// k full tessellations from independent random partitions; the host graph is
/// the union of their cliques.
inline StaggeredInstance random_instance(Rng& rng, std::size_t n, std::size_t k = 2,
                                         std::size_t max_block = 4, bool phased = true) {
  StaggeredInstance out;
  std::vector<std::vector<std::vector<Vertex>>> partitions;
  std::vector<Edge> edges;
  for (std::size_t t = 0; t < k; ++t) {
    partitions.push_back(random_partition(rng, n, max_block));
    for (const auto& block : partitions.back()) {
      for (std::size_t i = 0; i < block.size(); ++i) {
        for (std::size_t j = i + 1; j < block.size(); ++j) edges.emplace_back(block[i], block[j]);
      }
    }
  }
  out.graph = Graph(n, edges);
  for (const auto& blocks : partitions) {
    Tessellation t;
    for (const auto& block : blocks) t.polygons.push_back(random_polygon(rng, block, phased));
    out.tessellations.push_back(std::move(t));
  }
  return out;
}

/// Connected bipartite graph with parts of size m and n (m + n >= 2).
inline BipartiteGraph random_connected_bipartite(Rng& rng, std::size_t m, std::size_t n,
                                                 double extra = 0.4) {
  std::set<Edge> edges;
  // Random spanning tree: x0 and y0 first, every later vertex attaches to an
  // already placed vertex of the other part.
  std::vector<std::pair<int, Vertex>> order;
  for (Vertex x = 1; x < m; ++x) order.emplace_back(0, x);
  for (Vertex y = 1; y < n; ++y) order.emplace_back(1, y);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Vertex> xs{0}, ys{0};
  edges.emplace(0, 0);
  for (const auto& [part, v] : order) {
    if (part == 0) {
      edges.emplace(v, ys[uniform_int(rng, 0, ys.size() - 1)]);
      xs.push_back(v);
    } else {
      edges.emplace(xs[uniform_int(rng, 0, xs.size() - 1)], v);
      ys.push_back(v);
    }
  }
  for (Vertex x = 0; x < m; ++x) {
    for (Vertex y = 0; y < n; ++y) {
      if (uniform_real(rng, 0.0, 1.0) < extra) edges.emplace(x, y);
    }
  }
  return BipartiteGraph(m, n, std::vector<Edge>(edges.begin(), edges.end()));
}

inline SzegedyInstance random_szegedy(Rng& rng, std::size_t m, std::size_t n, bool phased) {
  const auto g = random_connected_bipartite(rng, m, n);
  const auto mi = static_cast<Eigen::Index>(m), ni = static_cast<Eigen::Index>(n);
  RealMatrix p = RealMatrix::Zero(mi, ni), q = RealMatrix::Zero(ni, mi);
  RealMatrix theta = RealMatrix::Zero(mi, ni), theta_prime = RealMatrix::Zero(mi, ni);
  for (const auto& [x, y] : g.edges()) {
    const auto xi = static_cast<Eigen::Index>(x), yi = static_cast<Eigen::Index>(y);
    p(xi, yi) = uniform_real(rng, 0.1, 1.0);
    q(yi, xi) = uniform_real(rng, 0.1, 1.0);
    theta(xi, yi) = uniform_real(rng, -std::numbers::pi, std::numbers::pi);
    theta_prime(xi, yi) = uniform_real(rng, -std::numbers::pi, std::numbers::pi);
  }
  for (Eigen::Index r = 0; r < mi; ++r) p.row(r) /= p.row(r).sum();
  for (Eigen::Index r = 0; r < ni; ++r) q.row(r) /= q.row(r).sum();
  SzegedyInstance inst{g, p, q, std::nullopt, std::nullopt};
  if (phased) {
    inst.theta = theta;
    inst.theta_prime = theta_prime;
  }
  return inst;
}

/// Staggered pair on the line graph of a random connected bipartite root:
/// alpha_x bundles the edges at x, beta_y the edges at y. Every polygon
/// intersection has at most one vertex.
inline StaggeredInstance random_singleton_instance(Rng& rng, std::size_t m, std::size_t n,
                                                   bool phased) {
  const auto root = random_connected_bipartite(rng, m, n);
  StaggeredInstance out;
  out.graph = line_graph(root.as_graph()).graph;
  std::vector<std::vector<Vertex>> at_x(m), at_y(n);
  for (std::size_t k = 0; k < root.edges().size(); ++k) {
    at_x[root.edges()[k].first].push_back(k);
    at_y[root.edges()[k].second].push_back(k);
  }
  Tessellation alpha, beta;
  for (auto& vs : at_x) alpha.polygons.push_back(random_polygon(rng, vs, phased));
  for (auto& vs : at_y) beta.polygons.push_back(random_polygon(rng, vs, phased));
  out.tessellations = {alpha, beta};
  return out;
}

/// Random two-tessellation instance in which some alpha and beta polygon share
/// at least two vertices.
inline StaggeredInstance random_obstructed_instance(Rng& rng, std::size_t n, bool phased) {
  for (;;) {
    auto inst = random_instance(rng, n, 2, 4, phased);
    // Force vertices u, v into one alpha polygon and one beta polygon.
    const Vertex u = uniform_int(rng, 0, n - 1);
    Vertex v = uniform_int(rng, 0, n - 2);
    if (v >= u) ++v;
    std::vector<Tessellation> rebuilt;
    std::vector<Edge> edges;
    for (const auto& t : inst.tessellations) {
      std::vector<std::vector<Vertex>> blocks;
      for (const auto& p : t.polygons) {
        std::vector<Vertex> b;
        for (Vertex w : p.vertices()) {
          if (w != v) b.push_back(w);
        }
        if (std::find(b.begin(), b.end(), u) != b.end()) b.push_back(v);
        if (!b.empty()) blocks.push_back(std::move(b));
      }
      Tessellation nt;
      for (auto& b : blocks) {
        for (std::size_t i = 0; i < b.size(); ++i) {
          for (std::size_t j = i + 1; j < b.size(); ++j) edges.emplace_back(b[i], b[j]);
        }
        nt.polygons.push_back(random_polygon(rng, b, phased));
      }
      rebuilt.push_back(std::move(nt));
    }
    inst.graph = Graph(n, edges);
    inst.tessellations = std::move(rebuilt);
    if (polygon_intersections(inst.alpha(), inst.beta()).max_cardinality >= 2) return inst;
  }
}

// --- reference implementations -----------------------------------------------

/// Dense eigenvalues of a general complex matrix.
inline std::vector<Complex> dense_eigenvalues(const Operator& u) {
  Eigen::ComplexEigenSolver<Operator> solver(u, false);
  std::vector<Complex> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    out.push_back(solver.eigenvalues()(i));
  }
  return out;
}

/// Largest distance in an optimal-by-greedy pairing of two multisets of unit
/// complex numbers; infinity when the sizes differ.
inline double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  auto key = [](Complex z) { return std::arg(z); };
  std::sort(a.begin(), a.end(), [&](Complex x, Complex y) { return key(x) < key(y); });
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& z : a) {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(z - b[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

/// Entry (r, c) of 2 sum |v><v| - I from polygon data directly.
inline Operator reference_reflection(const Tessellation& t, std::size_t n) {
  Operator r = Operator::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = -1.0;
  for (const auto& p : t.polygons) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        r(static_cast<Eigen::Index>(p.vertices()[i]), static_cast<Eigen::Index>(p.vertices()[j])) +=
            2.0 * p.amplitudes()[i] * std::conj(p.amplitudes()[j]);
      }
    }
  }
  return r;
}

struct BruteForceHitting {
  std::optional<std::size_t> T;
  std::vector<double> trace;
};

/// Definition scan with every psi(t) recomputed from scratch as U^t psi0 by
/// t naive matrix-vector products and the sum redone each step.
inline BruteForceHitting brute_force_hitting_time(const Operator& u, const ComplexVector& psi0,
                                                  std::size_t marked, std::size_t n,
                                                  std::size_t t_max) {
  BruteForceHitting out;
  const double threshold = 1.0 - static_cast<double>(marked) / static_cast<double>(n);
  std::vector<ComplexVector> states{psi0};
  for (std::size_t t = 1; t <= t_max; ++t) {
    ComplexVector next = ComplexVector::Zero(psi0.size());
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      Complex acc = 0.0;
      for (Eigen::Index c = 0; c < u.cols(); ++c) acc += u(r, c) * states.back()(c);
      next(r) = acc;
    }
    states.push_back(next);
  }
  for (std::size_t t = 0; t <= t_max; ++t) {
    long double sum = 0.0L;
    for (std::size_t s = 0; s <= t; ++s) {
      long double d = 0.0L;
      for (Eigen::Index k = 0; k < psi0.size(); ++k) {
        d += static_cast<long double>(std::norm(states[s](k) - psi0(k)));
      }
      sum += d;
    }
    const double f = static_cast<double>(sum / static_cast<long double>(t + 1));
    out.trace.push_back(f);
    if (f >= threshold) {
      out.T = t;
      return out;
    }
  }
  return out;
}

/// sin^2((2t + 1) asin(sqrt(|M| / N))).
inline double grover_probability(std::size_t n, std::size_t marked, std::size_t t) {
  const double a = std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(n)));
  const double s = std::sin((2.0 * static_cast<double>(t) + 1.0) * a);
  return s * s;
}

// --- fixtures ----------------------------------------------------------------

inline std::string bundle_path(const std::string& name) {
#ifdef SQW_BUNDLE_DIR
  return std::string(SQW_BUNDLE_DIR) + "/" + name;
#else
  return "bundles/" + name;
#endif
}

inline io::Bundle load_bundle(const std::string& name) {
  std::ifstream in(bundle_path(name));
  if (!in) throw InvalidArgument("missing bundle " + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return io::parse_bundle(buf.str());
}

/// The printed 6x6 operator for the two-tessellable non-line graph.
inline Operator non_line_graph_matrix() {
  Operator u(6, 6);
  u << 1, -1, 1, 1, 0, 0,
      -1, 1, 1, 1, 0, 0,
       0, 0, 1, -1, 1, 1,
       0, 0, -1, 1, 1, 1,
       1, 1, 0, 0, 1, -1,
       1, 1, 0, 0, -1, 1;
  return 0.5 * u;
}

inline StaggeredInstance non_line_graph() {
  StaggeredInstance out;
  out.graph = Graph(6, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
                        {2, 4}, {2, 5}, {3, 4}, {3, 5}, {4, 5}});
  out.tessellations = {uniform_tessellation(out.graph, {{0, 1, 2, 3}, {4, 5}}),
                       uniform_tessellation(out.graph, {{0, 1}, {2, 3, 4, 5}})};
  return out;
}

/// alpha uniform over {0, 1}; beta = cos(theta/2)|0> + sin(theta/2)|1>.
inline StaggeredInstance two_vertex(double theta) {
  StaggeredInstance out;
  out.graph = Graph(2, {{0, 1}});
  Tessellation beta;
  beta.polygons.emplace_back(std::vector<Vertex>{0, 1},
                             std::vector<Complex>{std::cos(theta / 2), std::sin(theta / 2)});
  out.tessellations = {uniform_tessellation(out.graph, {{0, 1}}), beta};
  return out;
}

inline Operator two_vertex_matrix(double theta) {
  Operator u(2, 2);
  u << std::sin(theta), std::cos(theta), -std::cos(theta), std::sin(theta);
  return u;
}

/// 10-cycle with the pair tessellations {2i, 2i+1} and {2i+1, 2i+2}.
inline StaggeredInstance cycle10() {
  StaggeredInstance out;
  out.graph = cycle_graph(10);
  std::vector<std::vector<Vertex>> blue, red;
  for (Vertex i = 0; i < 5; ++i) {
    blue.push_back({2 * i, 2 * i + 1});
    red.push_back({2 * i + 1, (2 * i + 2) % 10});
  }
  out.tessellations = {uniform_tessellation(out.graph, blue),
                       uniform_tessellation(out.graph, red)};
  return out;
}

}  // namespace sqw::testing
