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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sqw/graph.hpp"
#include "sqw/tessellation.hpp"
#include "sqw/types.hpp"

namespace sqw {

/// Sorted, deduplicated copy of a marked set; throws if any vertex >= n.
inline std::vector<Vertex> normalize_marked(std::vector<Vertex> marked, std::size_t n) {
  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
  if (!marked.empty() && marked.back() >= n) {
    throw InvalidArgument("marked vertex " + std::to_string(marked.back()) +
                          " out of range for " + std::to_string(n) + " vertices");
  }
  return marked;
}

/// 2 sum_k |poly_k><poly_k| - I. Uncovered vertices of a partial tessellation
/// get eigenvalue -1.
inline Operator reflection_operator(const Tessellation& t, std::size_t n) {
  require_disjoint(t, n);
  const auto dim = static_cast<Eigen::Index>(n);
  Operator u = -Operator::Identity(dim, dim);
  for (const auto& poly : t.polygons) {
    const auto& vs = poly.vertices();
    const auto& as = poly.amplitudes();
    for (std::size_t i = 0; i < vs.size(); ++i) {
      for (std::size_t j = 0; j < vs.size(); ++j) {
        u(static_cast<Eigen::Index>(vs[i]), static_cast<Eigen::Index>(vs[j])) +=
            2.0 * as[i] * std::conj(as[j]);
      }
    }
  }
  return u;
}

/// U = U_{last} ... U_1 U_0, with the first tessellation applied first.
inline Operator evolution_operator(std::span<const Tessellation> tessellations,
                                   std::size_t n) {
  if (tessellations.size() < 2) {
    throw InvalidArgument("evolution_operator needs at least two tessellations");
  }
  Operator u = reflection_operator(tessellations.front(), n);
  for (std::size_t i = 1; i < tessellations.size(); ++i) {
    u = reflection_operator(tessellations[i], n) * u;
  }
  return u;
}

inline Operator evolution_operator(std::initializer_list<Tessellation> tessellations,
                                   std::size_t n) {
  return evolution_operator(
      std::span<const Tessellation>(tessellations.begin(), tessellations.size()), n);
}

/// U|k> assembled term by term from polygon amplitudes and the overlap matrix
/// D_{k'k''} = <alpha_k'|beta_k''>, without forming U:
///   4 sum D*_{k'k''} a*_{k'k} |beta_k''> - 2 sum b*_{k''k} |beta_k''>
///     - 2 sum a*_{k'k} |alpha_k'> + |k>.
inline ComplexVector expand_basis_state(const Tessellation& alpha,
                                        const Tessellation& beta, Vertex k,
                                        std::size_t n) {
  if (alpha.partial || beta.partial) {
    throw InvalidArgument("expand_basis_state requires full tessellations");
  }
  if (k >= n) throw InvalidArgument("basis vertex out of range");
  require_disjoint(alpha, n);
  require_disjoint(beta, n);

  ComplexVector out = ComplexVector::Zero(static_cast<Eigen::Index>(n));
  out(static_cast<Eigen::Index>(k)) += 1.0;
  for (const auto& a : alpha.polygons) {
    const Complex ak = std::conj(a.amplitude(k));
    if (ak == Complex(0.0, 0.0)) continue;
    out -= 2.0 * ak * a.to_vector(n);
    for (const auto& b : beta.polygons) {
      const Complex d = a.inner(b);
      if (d == Complex(0.0, 0.0)) continue;
      out += 4.0 * std::conj(d) * ak * b.to_vector(n);
    }
  }
  for (const auto& b : beta.polygons) {
    const Complex bk = std::conj(b.amplitude(k));
    if (bk != Complex(0.0, 0.0)) out -= 2.0 * bk * b.to_vector(n);
  }
  return out;
}

struct ReflectionClassification {
  bool is_orthogonal_reflection = false;
  // Recovered +1 eigenvectors, one per support block, phase-fixed so that the
  // first amplitude is real and positive.
  std::vector<Polygon> recovered_polygons;
  std::optional<std::string> failure_reason;
};

/// Decides whether u is an orthogonal reflection in the vertex basis: unitary,
/// Hermitian, and its +1 eigenspace has an orthonormal basis with pairwise
/// disjoint supports whose union is every vertex.
///
/// The +1 eigenspace projector P is basis independent. Such a basis exists iff
/// the connected components of the nonzero pattern of P each carry a rank-one
/// block and no vertex has P_vv = 0; the component blocks then are the
/// polygons.
inline ReflectionClassification classify_orthogonal_reflection(
    const Operator& u, double tolerance = tol::kVerify) {
  ReflectionClassification result;
  auto fail = [&](std::string reason) {
    result.is_orthogonal_reflection = false;
    result.recovered_polygons.clear();
    result.failure_reason = std::move(reason);
    return result;
  };
  if (u.rows() != u.cols() || u.rows() == 0) return fail("operator is not square");
  if (!is_unitary(u, tolerance)) return fail("operator is not unitary");
  if (!is_hermitian(u, tolerance)) return fail("operator is not Hermitian");

  const Eigen::Index n = u.rows();
  const Operator herm = 0.5 * (u + u.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> solver(herm);
  if (solver.info() != Eigen::Success) return fail("eigensolver failed");

  std::vector<Eigen::Index> plus_one;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (std::abs(lambda - 1.0) <= tol::kEigenCluster) {
      plus_one.push_back(i);
    } else if (std::abs(lambda + 1.0) > tol::kEigenCluster) {
      return fail("eigenvalue " + std::to_string(lambda) + " is not +-1");
    }
  }
  if (plus_one.empty()) return fail("no +1 eigenvector");

  Operator basis(n, static_cast<Eigen::Index>(plus_one.size()));
  for (std::size_t c = 0; c < plus_one.size(); ++c) {
    basis.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(plus_one[c]);
  }
  const Operator projector = basis * basis.adjoint();

  const double zero = std::sqrt(tol::kEigenCluster);
  std::vector<int> component(static_cast<std::size_t>(n), -1);
  int components = 0;
  for (Eigen::Index start = 0; start < n; ++start) {
    if (component[static_cast<std::size_t>(start)] != -1) continue;
    std::vector<Eigen::Index> stack{start};
    component[static_cast<std::size_t>(start)] = components;
    while (!stack.empty()) {
      const Eigen::Index v = stack.back();
      stack.pop_back();
      for (Eigen::Index w = 0; w < n; ++w) {
        if (component[static_cast<std::size_t>(w)] == -1 &&
            std::abs(projector(v, w)) > zero) {
          component[static_cast<std::size_t>(w)] = components;
          stack.push_back(w);
        }
      }
    }
    ++components;
  }

  std::vector<Polygon> polygons;
  for (int c = 0; c < components; ++c) {
    std::vector<Vertex> members;
    double trace = 0.0;
    Eigen::Index pivot = -1;
    for (Eigen::Index v = 0; v < n; ++v) {
      if (component[static_cast<std::size_t>(v)] != c) continue;
      members.push_back(static_cast<Vertex>(v));
      const double diag = projector(v, v).real();
      trace += diag;
      if (pivot == -1 || diag > projector(pivot, pivot).real()) pivot = v;
    }
    const double rank = std::round(trace);
    if (rank == 0.0 || projector(pivot, pivot).real() <= zero) {
      return fail("vertex " + std::to_string(members.front()) +
                  " has no weight in the +1 eigenspace");
    }
    if (rank > 1.0 || std::abs(trace - rank) > 1e-6) {
      return fail("+1 eigenvectors cannot be chosen with disjoint supports near vertex " +
                  std::to_string(members.front()));
    }
    // Rank-one block: P = v v^dagger, so column pivot / sqrt(P_pp) is v up to
    // phase. Fix the phase on the smallest member.
    std::vector<Complex> amps;
    for (Vertex v : members) {
      amps.push_back(projector(static_cast<Eigen::Index>(v), pivot) /
                     std::sqrt(projector(pivot, pivot).real()));
    }
    const Complex phase = amps.front() / std::abs(amps.front());
    for (auto& a : amps) a /= phase;
    polygons.emplace_back(std::move(members), std::move(amps));
  }

  result.is_orthogonal_reflection = true;
  result.recovered_polygons = std::move(polygons);
  return result;
}

/// R_M = 2 sum_{m in M} |m><m| - I.
inline Operator marked_reflection(const std::vector<Vertex>& marked, std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(n);
  Operator r = -Operator::Identity(dim, dim);
  for (Vertex m : normalize_marked(marked, n)) r(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) = 1.0;
  return r;
}

/// beta'_k = R_M beta_k: amplitudes on marked vertices keep their sign, all
/// others flip. Polygons disjoint from M are therefore negated globally.
inline Tessellation modified_beta(const Tessellation& beta,
                                  const std::vector<Vertex>& marked) {
  std::vector<Vertex> sorted = marked;
  std::sort(sorted.begin(), sorted.end());
  Tessellation out;
  out.partial = beta.partial;
  for (const auto& poly : beta.polygons) {
    std::vector<Complex> amps = poly.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
      if (!std::binary_search(sorted.begin(), sorted.end(), poly.vertices()[i])) {
        amps[i] = -amps[i];
      }
    }
    out.polygons.emplace_back(poly.vertices(), std::move(amps));
  }
  return out;
}

/// U_M = R_M U_1 R_M U_0. The same operator is rebuilt as U'_1 U_0 from the
/// sign-modified second tessellation; NumericError if the forms disagree
/// beyond 1e-12.
inline Operator search_operator(const Tessellation& alpha, const Tessellation& beta,
                                const std::vector<Vertex>& marked, std::size_t n) {
  const auto m = normalize_marked(marked, n);
  const Operator u0 = reflection_operator(alpha, n);
  const Operator u1 = reflection_operator(beta, n);
  const Operator rm = marked_reflection(m, n);
  const Operator interlaced = rm * u1 * rm * u0;
  const Operator two_reflection = reflection_operator(modified_beta(beta, m), n) * u0;
  const double gap = max_abs_diff(interlaced, two_reflection);
  if (gap > tol::kConstruct) {
    throw NumericError("search operator forms disagree by " + std::to_string(gap));
  }
  return interlaced;
}

inline Operator search_operator(std::span<const Tessellation> tessellations,
                                const std::vector<Vertex>& marked, std::size_t n) {
  if (tessellations.size() != 2) {
    throw InvalidArgument(
        "search operator is defined for exactly two tessellations; for more, "
        "diagonalize the evolution operator directly");
  }
  return search_operator(tessellations[0], tessellations[1], marked, n);
}

struct GroverInstance {
  Graph graph;
  Tessellation alpha;  // singletons over non-marked vertices (partial)
  Tessellation beta;   // one uniform polygon over every vertex
};

/// Grover's algorithm as a generalized staggered walk on K_n.
inline GroverInstance grover_instance(std::size_t n, const std::vector<Vertex>& marked) {
  const auto m = normalize_marked(marked, n);
  if (m.empty()) throw InvalidArgument("grover_instance: marked set is empty");
  if (m.size() >= n) throw InvalidArgument("grover_instance: every vertex is marked");
  GroverInstance inst;
  inst.graph = complete_graph(n);
  std::vector<std::vector<Vertex>> singletons;
  for (Vertex v = 0; v < n; ++v) {
    if (!std::binary_search(m.begin(), m.end(), v)) singletons.push_back({v});
  }
  inst.alpha = uniform_tessellation(inst.graph, singletons);
  std::vector<Vertex> all(n);
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  inst.beta = uniform_tessellation(inst.graph, {all});
  return inst;
}

}  // namespace sqw
