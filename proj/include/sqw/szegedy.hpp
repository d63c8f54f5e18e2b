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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sqw/dynamics.hpp"
#include "sqw/graph.hpp"
#include "sqw/staggered.hpp"
#include "sqw/tessellation.hpp"
#include "sqw/types.hpp"

namespace sqw {

/// Bipartite Markov chain: P maps X -> Y (m x n), Q maps Y -> X (n x m), both
/// right-stochastic, with optional per-edge phases theta (on phi_x) and
/// theta_prime (on psi_y), both indexed [x][y].
struct SzegedyInstance {
  BipartiteGraph bipartite;
  RealMatrix p;
  RealMatrix q;
  std::optional<RealMatrix> theta;
  std::optional<RealMatrix> theta_prime;

  std::size_t m() const { return bipartite.x_count(); }
  std::size_t n() const { return bipartite.y_count(); }
  std::size_t dimension() const { return m() * n(); }
  std::size_t index(Vertex x, Vertex y) const { return x * n() + y; }

  double phase(Vertex x, Vertex y) const {
    return theta ? (*theta)(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) : 0.0;
  }
  double phase_prime(Vertex x, Vertex y) const {
    return theta_prime
               ? (*theta_prime)(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y))
               : 0.0;
  }

  /// Builds the bipartite graph from the support of P.
  static SzegedyInstance from_matrices(RealMatrix p, RealMatrix q,
                                       std::optional<RealMatrix> theta = std::nullopt,
                                       std::optional<RealMatrix> theta_prime = std::nullopt) {
    std::vector<Edge> edges;
    for (Eigen::Index x = 0; x < p.rows(); ++x) {
      for (Eigen::Index y = 0; y < p.cols(); ++y) {
        if (p(x, y) > 0.0) edges.emplace_back(x, y);
      }
    }
    SzegedyInstance inst{BipartiteGraph(static_cast<std::size_t>(p.rows()),
                                        static_cast<std::size_t>(p.cols()), edges),
                         std::move(p), std::move(q), std::move(theta),
                         std::move(theta_prime)};
    return inst;
  }
};

namespace detail {

inline void check_stochastic(const RealMatrix& a, const char* name) {
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      if (!(a(r, c) >= 0.0) || !std::isfinite(a(r, c))) {
        throw ValidationError(std::string(name) + " has a negative or non-finite entry");
      }
      sum += a(r, c);
    }
    if (std::abs(sum - 1.0) > tol::kConstruct) {
      throw ValidationError(std::string(name) + " row " + std::to_string(r) +
                            " sums to " + std::to_string(sum));
    }
  }
}

// phi_x and psi_y as columns over the product basis |x,y> -> x*n + y. No
// support checks; rows of p and q must be stochastic for W to be unitary.
inline Operator szegedy_phi(const RealMatrix& p, const std::optional<RealMatrix>& theta) {
  const Eigen::Index m = p.rows(), n = p.cols();
  Operator a = Operator::Zero(m * n, m);
  for (Eigen::Index x = 0; x < m; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      const double phase = theta ? (*theta)(x, y) : 0.0;
      a(x * n + y, x) = std::sqrt(p(x, y)) * std::polar(1.0, phase);
    }
  }
  return a;
}

inline Operator szegedy_psi(const RealMatrix& q,
                            const std::optional<RealMatrix>& theta_prime) {
  const Eigen::Index n = q.rows(), m = q.cols();
  Operator b = Operator::Zero(m * n, n);
  for (Eigen::Index y = 0; y < n; ++y) {
    for (Eigen::Index x = 0; x < m; ++x) {
      const double phase = theta_prime ? (*theta_prime)(x, y) : 0.0;
      b(x * n + y, y) = std::sqrt(q(y, x)) * std::polar(1.0, phase);
    }
  }
  return b;
}

inline Operator szegedy_walk(const RealMatrix& p, const RealMatrix& q,
                             const std::optional<RealMatrix>& theta,
                             const std::optional<RealMatrix>& theta_prime) {
  const Operator a = szegedy_phi(p, theta);
  const Operator b = szegedy_psi(q, theta_prime);
  const Eigen::Index dim = a.rows();
  const Operator r0 = 2.0 * a * a.adjoint() - Operator::Identity(dim, dim);
  const Operator r1 = 2.0 * b * b.adjoint() - Operator::Identity(dim, dim);
  return r1 * r0;
}

}  // namespace detail

/// Throws ValidationError when P, Q are not right-stochastic with supports
/// matching the bipartite edges, or phase matrices have the wrong shape.
inline void validate_szegedy_instance(const SzegedyInstance& inst) {
  const auto m = static_cast<Eigen::Index>(inst.m());
  const auto n = static_cast<Eigen::Index>(inst.n());
  if (inst.p.rows() != m || inst.p.cols() != n) {
    throw ValidationError("P must be " + std::to_string(m) + "x" + std::to_string(n));
  }
  if (inst.q.rows() != n || inst.q.cols() != m) {
    throw ValidationError("Q must be " + std::to_string(n) + "x" + std::to_string(m));
  }
  for (const auto* phases : {&inst.theta, &inst.theta_prime}) {
    if (*phases && ((*phases)->rows() != m || (*phases)->cols() != n)) {
      throw ValidationError("phase matrices must be " + std::to_string(m) + "x" +
                            std::to_string(n));
    }
  }
  detail::check_stochastic(inst.p, "P");
  detail::check_stochastic(inst.q, "Q");
  for (Eigen::Index x = 0; x < m; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      const bool edge = inst.bipartite.has_edge(static_cast<Vertex>(x), static_cast<Vertex>(y));
      if ((inst.p(x, y) > 0.0) != edge || (inst.q(y, x) > 0.0) != edge) {
        throw ValidationError("support of P/Q disagrees with the bipartite edges at (" +
                              std::to_string(x) + "," + std::to_string(y) + ")");
      }
    }
  }
}

/// W = R_1 R_0 on the full m*n product space.
inline Operator szegedy_operator(const SzegedyInstance& inst) {
  validate_szegedy_instance(inst);
  return detail::szegedy_walk(inst.p, inst.q, inst.theta, inst.theta_prime);
}

/// W|x,y> from the overlaps C_{y'x} = <psi_y'|phi_x> (phases included):
///   4 sqrt(p_xy) e^{-i th_xy} sum_y' C_{y'x} |psi_y'>
///     - 2 sqrt(q_yx) e^{-i th'_xy} |psi_y> - 2 sqrt(p_xy) e^{-i th_xy} |phi_x>
///     + |x,y>.
/// W fixes non-edge basis states, which are rejected here.
inline ComplexVector szegedy_expand(const SzegedyInstance& inst, Vertex x, Vertex y) {
  validate_szegedy_instance(inst);
  if (x >= inst.m() || y >= inst.n() || !inst.bipartite.has_edge(x, y)) {
    throw InvalidArgument("(" + std::to_string(x) + "," + std::to_string(y) +
                          ") is not an edge; W acts trivially on it");
  }
  const Operator phi = detail::szegedy_phi(inst.p, inst.theta);
  const Operator psi = detail::szegedy_psi(inst.q, inst.theta_prime);
  const auto xi = static_cast<Eigen::Index>(x);
  const auto yi = static_cast<Eigen::Index>(y);
  const Complex a = std::sqrt(inst.p(xi, yi)) * std::polar(1.0, -inst.phase(x, y));
  const Complex b = std::sqrt(inst.q(yi, xi)) * std::polar(1.0, -inst.phase_prime(x, y));

  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(inst.dimension()));
  out(static_cast<Eigen::Index>(inst.index(x, y))) = 1.0;
  for (Eigen::Index yp = 0; yp < psi.cols(); ++yp) {
    const Complex c = psi.col(yp).dot(phi.col(xi));  // <psi_y'|phi_x>
    out += 4.0 * a * c * psi.col(yp);
  }
  out -= 2.0 * b * psi.col(yi);
  out -= 2.0 * a * phi.col(xi);
  return out;
}

struct StaggeredFromSzegedy {
  Graph line_graph;
  Tessellation alpha;  // one polygon per x
  Tessellation beta;   // one polygon per y
  EdgeBijection bijection;  // (x, y) -> line-graph vertex
};

/// Staggered walk on L(Gamma): alpha_x = sum_y sqrt(p_xy) e^{i th_xy} |f(x,y)>,
/// beta_y = sum_x sqrt(q_yx) e^{i th'_xy} |f(x,y)>, with f lexicographic in
/// (x, y).
inline StaggeredFromSzegedy szegedy_to_staggered(const SzegedyInstance& inst) {
  validate_szegedy_instance(inst);
  if (!is_connected(inst.bipartite)) {
    throw InvalidArgument("szegedy_to_staggered: bipartite graph is disconnected");
  }
  StaggeredFromSzegedy out;
  out.bijection = EdgeBijection(inst.bipartite.edges());
  out.line_graph = line_graph(inst.bipartite.as_graph()).graph;

  std::vector<std::vector<Vertex>> alpha_vs(inst.m()), beta_vs(inst.n());
  std::vector<std::vector<Complex>> alpha_as(inst.m()), beta_as(inst.n());
  for (std::size_t k = 0; k < out.bijection.size(); ++k) {
    const auto [x, y] = out.bijection.edge_of(k);
    const auto xi = static_cast<Eigen::Index>(x);
    const auto yi = static_cast<Eigen::Index>(y);
    alpha_vs[x].push_back(k);
    alpha_as[x].push_back(std::sqrt(inst.p(xi, yi)) * std::polar(1.0, inst.phase(x, y)));
    beta_vs[y].push_back(k);
    beta_as[y].push_back(std::sqrt(inst.q(yi, xi)) * std::polar(1.0, inst.phase_prime(x, y)));
  }
  for (std::size_t x = 0; x < inst.m(); ++x) {
    out.alpha.polygons.emplace_back(std::move(alpha_vs[x]), std::move(alpha_as[x]));
  }
  for (std::size_t y = 0; y < inst.n(); ++y) {
    out.beta.polygons.emplace_back(std::move(beta_vs[y]), std::move(beta_as[y]));
  }
  return out;
}

/// Two polygons (one per tessellation) share two or more vertices, so no
/// (k, k') labeling of the vertices exists.
struct ConversionObstruction {
  std::size_t alpha_polygon = 0;
  std::size_t beta_polygon = 0;
  std::vector<Vertex> shared;
};

struct SzegedyFromStaggered {
  SzegedyInstance instance;
  // Bipartite edge (k, k') <-> staggered vertex.
  EdgeBijection bijection;
};

using StaggeredToSzegedyResult = std::variant<SzegedyFromStaggered, ConversionObstruction>;

/// Recasts a two-tessellation staggered walk as an extended Szegedy walk when
/// every alpha/beta polygon intersection has at most one vertex. Vertex v in
/// alpha_k ∩ beta_k' becomes edge (k, k') with p_kk' = |a|^2, theta = arg a,
/// q_k'k = |b|^2, theta' = arg b.
inline StaggeredToSzegedyResult staggered_to_szegedy(const Graph& g,
                                                     const Tessellation& alpha,
                                                     const Tessellation& beta) {
  if (alpha.partial || beta.partial) {
    throw InvalidArgument("staggered_to_szegedy requires full tessellations");
  }
  const auto report = validate_tessellation_family(g, {alpha, beta});
  if (!report.valid()) {
    throw ValidationError("invalid tessellation family: " + report.violations.front());
  }
  const auto table = polygon_intersections(alpha, beta);
  if (table.max_cardinality >= 2) {
    return ConversionObstruction{table.argmax_first, table.argmax_second,
                                 table.cells[table.argmax_first][table.argmax_second]};
  }

  const std::size_t n = g.vertex_count();
  const auto m_count = static_cast<Eigen::Index>(alpha.size());
  const auto n_count = static_cast<Eigen::Index>(beta.size());
  std::vector<Edge> labels(n);
  std::vector<bool> labeled(n, false);
  RealMatrix p = RealMatrix::Zero(m_count, n_count);
  RealMatrix q = RealMatrix::Zero(n_count, m_count);
  RealMatrix theta = RealMatrix::Zero(m_count, n_count);
  RealMatrix theta_prime = RealMatrix::Zero(m_count, n_count);
  bool has_phase = false;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    for (std::size_t l = 0; l < beta.size(); ++l) {
      const auto& cell = table.cells[k][l];
      if (cell.empty()) continue;
      const Vertex v = cell.front();
      labels[v] = {k, l};
      labeled[v] = true;
      const Complex a = alpha.polygons[k].amplitude(v);
      const Complex b = beta.polygons[l].amplitude(v);
      const auto ki = static_cast<Eigen::Index>(k);
      const auto li = static_cast<Eigen::Index>(l);
      p(ki, li) = std::norm(a);
      q(li, ki) = std::norm(b);
      theta(ki, li) = std::arg(a);
      theta_prime(ki, li) = std::arg(b);
      has_phase = has_phase || theta(ki, li) != 0.0 || theta_prime(ki, li) != 0.0;
    }
  }
  if (std::find(labeled.begin(), labeled.end(), false) != labeled.end()) {
    throw ValidationError("some vertex lies outside the polygon intersections");
  }
  std::vector<Edge> edges = labels;
  SzegedyFromStaggered out{
      SzegedyInstance{BipartiteGraph(alpha.size(), beta.size(), edges), std::move(p),
                      std::move(q),
                      has_phase ? std::optional<RealMatrix>(std::move(theta)) : std::nullopt,
                      has_phase ? std::optional<RealMatrix>(std::move(theta_prime))
                                : std::nullopt},
      EdgeBijection(labels)};
  return out;
}

/// Bipartite double cover with arcs: X -> X' arcs come from P, X' -> X arcs
/// from Q. Undirected edges appear in both lists.
struct DirectedBipartiteGraph {
  std::size_t x_count = 0;
  std::size_t y_count = 0;
  std::vector<Edge> x_to_y;  // (x, y')
  std::vector<Edge> y_to_x;  // (y', x)
};

/// Szegedy's search construction on Gamma(X, X', E') with marked vertices as
/// sinks, together with its generalized staggered equivalent on the line
/// graph of the undirected double cover.
struct SzegedySearch {
  std::vector<Vertex> marked;
  DirectedBipartiteGraph digraph;
  RealMatrix p_prime;  // n x n, marked rows are unit rows onto the copy
  RealMatrix q_prime;  // equals p_prime
  // Staggered side: L(Gamma(X, X', E')) with polygons for non-marked x, y.
  Graph line_graph;
  EdgeBijection bijection;  // (x, y') -> line-graph vertex
  Tessellation alpha;
  Tessellation beta;
  StateVector initial;  // in the line-graph space
  // ||sum sqrt(p_xy)|f(x,y)>|| / sqrt(n); 1 for row-stochastic P.
  double nominal_norm = 1.0;

  std::size_t n() const { return static_cast<std::size_t>(p_prime.rows()); }

  /// W' on the n*n product space.
  Operator szegedy_walk() const {
    return detail::szegedy_walk(p_prime, q_prime, std::nullopt, std::nullopt);
  }

  /// The initial condition transported to the product space.
  ComplexVector szegedy_initial() const {
    ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(n() * n()));
    for (std::size_t k = 0; k < bijection.size(); ++k) {
      const auto [x, y] = bijection.edge_of(k);
      out(static_cast<Eigen::Index>(x * n() + y)) = initial[k];
    }
    return out;
  }

  Operator staggered_walk() const {
    return evolution_operator({alpha, beta}, line_graph.vertex_count());
  }
};

inline SzegedySearch szegedy_search_instance(const Graph& g, const RealMatrix& p,
                                             const std::vector<Vertex>& marked) {
  const std::size_t n = g.vertex_count();
  const auto dim = static_cast<Eigen::Index>(n);
  if (p.rows() != dim || p.cols() != dim) {
    throw InvalidArgument("szegedy_search_instance: P must be " + std::to_string(n) +
                          "x" + std::to_string(n));
  }
  detail::check_stochastic(p, "P");
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = 0; j < n; ++j) {
      if ((p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0) !=
          g.has_edge(i, j)) {
        throw InvalidArgument("support of P differs from the graph at (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  SzegedySearch out;
  out.marked = normalize_marked(marked, n);
  if (out.marked.empty()) throw InvalidArgument("szegedy_search_instance: no marked vertex");
  if (out.marked.size() >= n) {
    throw InvalidArgument("szegedy_search_instance: every vertex is marked");
  }
  auto is_marked = [&](Vertex v) {
    return std::binary_search(out.marked.begin(), out.marked.end(), v);
  };

  out.digraph.x_count = n;
  out.digraph.y_count = n;
  out.p_prime = RealMatrix::Zero(dim, dim);
  std::vector<Edge> cover_edges;  // (x, y') of the undirected double cover
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y : g.neighbors(x)) {
      cover_edges.emplace_back(x, y);
      if (!is_marked(x)) out.digraph.x_to_y.emplace_back(x, y);
      if (!is_marked(y)) out.digraph.y_to_x.emplace_back(y, x);
    }
  }
  for (Vertex x : out.marked) {
    out.digraph.x_to_y.emplace_back(x, x);
    out.digraph.y_to_x.emplace_back(x, x);
  }
  std::sort(out.digraph.x_to_y.begin(), out.digraph.x_to_y.end());
  std::sort(out.digraph.y_to_x.begin(), out.digraph.y_to_x.end());

  for (Vertex x = 0; x < n; ++x) {
    const auto xi = static_cast<Eigen::Index>(x);
    if (is_marked(x)) {
      out.p_prime(xi, xi) = 1.0;
    } else {
      out.p_prime.row(xi) = p.row(xi);
    }
  }
  out.q_prime = out.p_prime;

  std::sort(cover_edges.begin(), cover_edges.end());
  out.bijection = EdgeBijection(cover_edges);
  std::vector<Edge> double_cover;
  for (const auto& [x, y] : cover_edges) double_cover.emplace_back(x, n + y);
  out.line_graph = sqw::line_graph(Graph(2 * n, double_cover)).graph;

  std::vector<std::vector<Vertex>> alpha_vs(n), beta_vs(n);
  std::vector<std::vector<Complex>> alpha_as(n), beta_as(n);
  ComplexVector psi0 = ComplexVector::Zero(static_cast<Eigen::Index>(cover_edges.size()));
  for (std::size_t k = 0; k < cover_edges.size(); ++k) {
    const auto [x, y] = cover_edges[k];
    const double pxy = p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
    const double qyx = p(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x));
    psi0(static_cast<Eigen::Index>(k)) = std::sqrt(pxy);
    if (!is_marked(x)) {
      alpha_vs[x].push_back(k);
      alpha_as[x].emplace_back(std::sqrt(pxy), 0.0);
    }
    if (!is_marked(y)) {
      beta_vs[y].push_back(k);
      beta_as[y].emplace_back(std::sqrt(qyx), 0.0);
    }
  }
  for (Vertex v = 0; v < n; ++v) {
    if (!alpha_vs[v].empty()) out.alpha.polygons.emplace_back(alpha_vs[v], alpha_as[v]);
    if (!beta_vs[v].empty()) out.beta.polygons.emplace_back(beta_vs[v], beta_as[v]);
  }
  out.alpha.partial = true;
  out.beta.partial = true;
  out.nominal_norm = psi0.norm() / std::sqrt(static_cast<double>(n));
  out.initial = StateVector(std::move(psi0));
  return out;
}

struct PolygonMeasurement {
  // probabilities[k] = <psi|Pi_k|psi>, Pi_k projecting onto polygon k's vertices.
  std::vector<double> probabilities;
  // Mass on vertices in no polygon (the missing polygons of the search).
  double remainder = 0.0;
};

inline PolygonMeasurement polygon_observable_measure(const StateVector& state,
                                                     const Tessellation& alpha) {
  const std::size_t n = state.size();
  require_disjoint(alpha, n);
  PolygonMeasurement out;
  std::vector<bool> covered(n, false);
  double total = 0.0;
  for (const auto& poly : alpha.polygons) {
    double mass = 0.0;
    for (Vertex v : poly.vertices()) {
      mass += std::norm(state[v]);
      covered[v] = true;
    }
    out.probabilities.push_back(mass);
    total += mass;
  }
  for (Vertex v = 0; v < n; ++v) {
    if (!covered[v]) out.remainder += std::norm(state[v]);
  }
  total += out.remainder;
  if (std::abs(total - 1.0) > tol::kConstruct) {
    throw NumericError("polygon measurement does not sum to 1");
  }
  return out;
}

}  // namespace sqw
