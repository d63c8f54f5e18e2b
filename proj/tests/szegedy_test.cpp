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

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace sqw {
namespace {

using testing::Rng;

Operator identity(std::size_t n) {
  return Operator::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

SzegedyInstance star_instance() {
  RealMatrix p(4, 3), q(3, 4);
  const double t = 1.0 / 3.0;
  p << t, t, t, 1, 0, 0, 0, 1, 0, 0, 0, 1;
  q << 0.5, 0.5, 0, 0, 0.5, 0, 0.5, 0, 0.5, 0, 0, 0.5;
  return SzegedyInstance::from_matrices(p, q);
}

// max |W(f^-1 i, f^-1 j) - U(i, j)| over line-graph vertices, plus the mass W
// sends from edge states onto non-edge states.
double relabel_gap(const Operator& w, const Operator& u, const EdgeBijection& f,
                   std::size_t n_cols) {
  double gap = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const auto [xj, yj] = f.edge_of(j);
    const auto col = static_cast<Eigen::Index>(xj * n_cols + yj);
    double on_edges = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto [xi, yi] = f.edge_of(i);
      const Complex wij = w(static_cast<Eigen::Index>(xi * n_cols + yi), col);
      gap = std::max(gap, std::abs(wij - u(static_cast<Eigen::Index>(i),
                                           static_cast<Eigen::Index>(j))));
      on_edges += std::norm(wij);
    }
    gap = std::max(gap, std::abs(1.0 - on_edges));
  }
  return gap;
}

TEST(szegedy_instance, validation_errors) {
  auto inst = star_instance();
  EXPECT_NO_THROW(validate_szegedy_instance(inst));
  auto bad_sum = inst;
  bad_sum.p(1, 0) = 0.9;
  EXPECT_THROW(validate_szegedy_instance(bad_sum), ValidationError);
  auto bad_support = inst;
  bad_support.q(0, 1) = 0.0;
  bad_support.q(0, 0) = 1.0;
  EXPECT_THROW(validate_szegedy_instance(bad_support), ValidationError);
  auto bad_shape = inst;
  bad_shape.theta = RealMatrix::Zero(2, 2);
  EXPECT_THROW(validate_szegedy_instance(bad_shape), ValidationError);
  auto negative = inst;
  negative.p(0, 0) = -0.1;
  negative.p(0, 1) = 2.0 / 3.0 + 0.1;
  EXPECT_THROW(validate_szegedy_instance(negative), ValidationError);
}

TEST(szegedy_operator, single_edge_is_identity) {
  RealMatrix one(1, 1);
  one << 1.0;
  const auto inst = SzegedyInstance::from_matrices(one, one);
  const Operator w = szegedy_operator(inst);
  ASSERT_EQ(w.rows(), 1);
  EXPECT_NEAR(std::abs(w(0, 0) - Complex(1.0)), 0.0, 1e-15);
}

TEST(szegedy_operator, two_edges_square_to_identity) {
  RealMatrix p(2, 1), q(1, 2);
  p << 1, 1;
  q << 0.3, 0.7;
  const auto path = SzegedyInstance::from_matrices(p, q);
  const Operator w = szegedy_operator(path);
  EXPECT_LE(max_abs_diff(w * w, identity(2)), 1e-12);

  RealMatrix p2(1, 2), q2(2, 1);
  p2 << 0.25, 0.75;
  q2 << 1, 1;
  RealMatrix th(1, 2);
  th << 0.4, -1.1;
  const auto phased = SzegedyInstance::from_matrices(p2, q2, th, th);
  const Operator w2 = szegedy_operator(phased);
  EXPECT_LE(max_abs_diff(w2 * w2, identity(2)), 1e-12);
}

TEST(szegedy_operator, unitary_with_phases) {
  Rng rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = testing::random_szegedy(rng, testing::uniform_int(rng, 1, 5),
                                              testing::uniform_int(rng, 1, 5), trial % 2 == 0);
    EXPECT_TRUE(is_unitary(szegedy_operator(inst), 1e-10));
  }
}

TEST(szegedy_expand, single_edge_returns_itself) {
  RealMatrix one(1, 1);
  one << 1.0;
  const auto col = szegedy_expand(SzegedyInstance::from_matrices(one, one), 0, 0);
  EXPECT_NEAR(std::abs(col(0) - Complex(1.0)), 0.0, 1e-15);
}

TEST(szegedy_expand, two_edge_path) {
  RealMatrix p(2, 1), q(1, 2);
  p << 1, 1;
  q << 0.3, 0.7;
  const auto inst = SzegedyInstance::from_matrices(p, q);
  const Operator w = szegedy_operator(inst);
  for (Vertex x = 0; x < 2; ++x) {
    const ComplexVector col = szegedy_expand(inst, x, 0);
    EXPECT_LE((col - w.col(static_cast<Eigen::Index>(inst.index(x, 0)))).norm(), 1e-10);
    EXPECT_LE((w * col - identity(2).col(static_cast<Eigen::Index>(x))).norm(), 1e-10);
  }
}

TEST(szegedy_expand, random_instances_match_columns) {
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = testing::random_szegedy(rng, 3, 3, trial % 2 == 1);
    const Operator w = szegedy_operator(inst);
    for (const auto& [x, y] : inst.bipartite.edges()) {
      const ComplexVector col = szegedy_expand(inst, x, y);
      ASSERT_LE((col - w.col(static_cast<Eigen::Index>(inst.index(x, y)))).cwiseAbs().maxCoeff(),
                1e-10);
    }
  }
}

TEST(szegedy_expand, rejects_non_edge) {
  EXPECT_THROW(szegedy_expand(star_instance(), 1, 1), InvalidArgument);
  EXPECT_THROW(szegedy_expand(star_instance(), 4, 0), InvalidArgument);
}

TEST(szegedy_to_staggered, star_gives_listed_vectors) {
  const auto conv = szegedy_to_staggered(star_instance());
  EXPECT_EQ(conv.line_graph, Graph(6, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 4}, {2, 5}}));
  ASSERT_EQ(conv.alpha.size(), 4u);
  ASSERT_EQ(conv.beta.size(), 3u);
  const double r3 = 1 / std::sqrt(3.0), r2 = 1 / std::sqrt(2.0);
  EXPECT_EQ(conv.alpha.polygons[0].vertices(), (std::vector<Vertex>{0, 1, 2}));
  for (auto a : conv.alpha.polygons[0].amplitudes()) EXPECT_NEAR(std::abs(a - r3), 0.0, 1e-15);
  for (std::size_t k = 1; k < 4; ++k) {
    EXPECT_EQ(conv.alpha.polygons[k].vertices(), (std::vector<Vertex>{k + 2}));
  }
  const std::vector<std::vector<Vertex>> beta_sets = {{0, 3}, {1, 4}, {2, 5}};
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(conv.beta.polygons[k].vertices(), beta_sets[k]);
    for (auto a : conv.beta.polygons[k].amplitudes()) EXPECT_NEAR(std::abs(a - r2), 0.0, 1e-15);
  }
  const Operator u = evolution_operator({conv.alpha, conv.beta}, 6);
  EXPECT_LE(relabel_gap(szegedy_operator(star_instance()), u, conv.bijection, 3), 1e-10);
}

TEST(szegedy_to_staggered, single_edge) {
  RealMatrix one(1, 1);
  one << 1.0;
  const auto conv = szegedy_to_staggered(SzegedyInstance::from_matrices(one, one));
  EXPECT_EQ(conv.line_graph.vertex_count(), 1u);
  const Operator u = evolution_operator({conv.alpha, conv.beta}, 1);
  EXPECT_NEAR(std::abs(u(0, 0) - Complex(1.0)), 0.0, 1e-15);
}

TEST(szegedy_to_staggered, rejects_disconnected) {
  RealMatrix id = RealMatrix::Identity(2, 2);
  EXPECT_THROW(szegedy_to_staggered(SzegedyInstance::from_matrices(id, id)), InvalidArgument);
}

TEST(szegedy_to_staggered, random_relabel_equivalence) {
  Rng rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = testing::uniform_int(rng, 1, 5), n = testing::uniform_int(rng, 1, 5);
    const auto inst = testing::random_szegedy(rng, m, n, trial % 2 == 0);
    const auto conv = szegedy_to_staggered(inst);
    const Operator u = evolution_operator({conv.alpha, conv.beta}, conv.line_graph.vertex_count());
    EXPECT_TRUE(validate_tessellation_family(conv.line_graph, {conv.alpha, conv.beta}).valid());
    ASSERT_LE(relabel_gap(szegedy_operator(inst), u, conv.bijection, n), 1e-10);
  }
}

TEST(staggered_to_szegedy, star_line_graph_recovers_chain) {
  const Graph g(6, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 4}, {2, 5}});
  const auto a = uniform_tessellation(g, {{0, 1, 2}, {3}, {4}, {5}});
  const auto b = uniform_tessellation(g, {{0, 3}, {1, 4}, {2, 5}});
  const auto result = staggered_to_szegedy(g, a, b);
  ASSERT_TRUE(std::holds_alternative<SzegedyFromStaggered>(result));
  const auto& conv = std::get<SzegedyFromStaggered>(result);
  const auto expected = star_instance();
  EXPECT_EQ(conv.instance.bipartite, expected.bipartite);
  EXPECT_LE((conv.instance.p - expected.p).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((conv.instance.q - expected.q).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_FALSE(conv.instance.theta.has_value());
  const std::vector<Edge> labels = {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {2, 1}, {3, 2}};
  EXPECT_EQ(conv.bijection.edges(), labels);
}

TEST(staggered_to_szegedy, two_vertex_intersections_obstruct) {
  const auto nl = testing::non_line_graph();
  const auto r1 = staggered_to_szegedy(nl.graph, nl.alpha(), nl.beta());
  ASSERT_TRUE(std::holds_alternative<ConversionObstruction>(r1));
  const auto& o1 = std::get<ConversionObstruction>(r1);
  EXPECT_EQ(o1.alpha_polygon, 0u);
  EXPECT_EQ(o1.beta_polygon, 0u);
  EXPECT_EQ(o1.shared, (std::vector<Vertex>{0, 1}));

  const auto tv = testing::two_vertex(1.0);
  const auto r2 = staggered_to_szegedy(tv.graph, tv.alpha(), tv.beta());
  ASSERT_TRUE(std::holds_alternative<ConversionObstruction>(r2));
  EXPECT_EQ(std::get<ConversionObstruction>(r2).shared, (std::vector<Vertex>{0, 1}));
}

TEST(staggered_to_szegedy, rejects_partial) {
  const auto g = grover_instance(4, {0});
  EXPECT_THROW(staggered_to_szegedy(g.graph, g.alpha, g.beta), InvalidArgument);
}

TEST(staggered_to_szegedy, phased_round_trip) {
  Rng rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = testing::random_singleton_instance(
        rng, testing::uniform_int(rng, 1, 5), testing::uniform_int(rng, 1, 5), trial % 3 != 0);
    const std::size_t n = inst.n();
    const auto result = staggered_to_szegedy(inst.graph, inst.alpha(), inst.beta());
    ASSERT_TRUE(std::holds_alternative<SzegedyFromStaggered>(result));
    const auto& conv = std::get<SzegedyFromStaggered>(result);
    // Szegedy W on edge states reproduces U under f'.
    const Operator u = evolution_operator(inst.tessellations, n);
    EXPECT_LE(relabel_gap(szegedy_operator(conv.instance), u, conv.bijection, conv.instance.n()),
              1e-10);
    // And back again.
    const auto back = szegedy_to_staggered(conv.instance);
    const Operator u2 = evolution_operator({back.alpha, back.beta}, n);
    double gap = 0.0;
    for (Vertex i = 0; i < n; ++i) {
      for (Vertex j = 0; j < n; ++j) {
        const auto bi = back.bijection.index_of(conv.bijection.edge_of(i));
        const auto bj = back.bijection.index_of(conv.bijection.edge_of(j));
        gap = std::max(gap, std::abs(u2(static_cast<Eigen::Index>(bi), static_cast<Eigen::Index>(bj)) -
                                     u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
      }
    }
    ASSERT_LE(gap, 1e-10);
  }
}

TEST(staggered_to_szegedy, obstruction_iff_large_intersection) {
  Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    testing::StaggeredInstance inst;
    switch (trial % 3) {
      case 0: inst = testing::random_instance(rng, testing::uniform_int(rng, 2, 12), 2); break;
      case 1: inst = testing::random_obstructed_instance(rng, testing::uniform_int(rng, 2, 12), true); break;
      default:
        inst = testing::random_singleton_instance(rng, testing::uniform_int(rng, 1, 4),
                                                  testing::uniform_int(rng, 1, 4), true);
    }
    const auto table = polygon_intersections(inst.alpha(), inst.beta());
    const auto result = staggered_to_szegedy(inst.graph, inst.alpha(), inst.beta());
    ASSERT_EQ(std::holds_alternative<ConversionObstruction>(result), table.max_cardinality >= 2);
  }
}

TEST(szegedy_search, two_vertex_sink) {
  const Graph k2 = build_graph(2, {{0, 1}});
  RealMatrix p(2, 2);
  p << 0, 1, 1, 0;
  const auto s = szegedy_search_instance(k2, p, {0});
  const std::vector<Edge> x_to_y = {{0, 0}, {1, 0}};
  const std::vector<Edge> y_to_x = {{0, 0}, {1, 0}};
  EXPECT_EQ(s.digraph.x_to_y, x_to_y);
  EXPECT_EQ(s.digraph.y_to_x, y_to_x);
  RealMatrix expected(2, 2);
  expected << 1, 0, 1, 0;
  EXPECT_EQ(s.p_prime, expected);
  EXPECT_EQ(s.q_prime, s.p_prime);
  EXPECT_TRUE(s.alpha.partial);
  EXPECT_TRUE(s.beta.partial);
  EXPECT_NEAR(s.nominal_norm, 1.0, 1e-15);
}

TEST(szegedy_search, preconditions) {
  const Graph k2 = build_graph(2, {{0, 1}});
  RealMatrix p(2, 2);
  p << 0, 1, 1, 0;
  EXPECT_THROW(szegedy_search_instance(k2, p, {}), InvalidArgument);
  EXPECT_THROW(szegedy_search_instance(k2, p, {0, 1}), InvalidArgument);
  RealMatrix wrong(2, 2);
  wrong << 0.5, 0.5, 1, 0;
  EXPECT_THROW(szegedy_search_instance(k2, wrong, {0}), InvalidArgument);
}

TEST(szegedy_search, ten_cycle_statistics_match) {
  const Graph g = cycle_graph(10);
  RealMatrix p = RealMatrix::Zero(10, 10);
  for (Eigen::Index i = 0; i < 10; ++i) {
    p(i, (i + 1) % 10) = 0.5;
    p(i, (i + 9) % 10) = 0.5;
  }
  const auto s = szegedy_search_instance(g, p, {0});
  for (Eigen::Index x = 0; x < 10; ++x) {
    EXPECT_NEAR(s.p_prime.row(x).sum(), 1.0, 1e-12);
    if (x == 0) {
      EXPECT_EQ(s.p_prime(0, 0), 1.0);
    } else {
      EXPECT_EQ(s.p_prime.row(x), p.row(x));
    }
  }
  const std::size_t dim = s.line_graph.vertex_count();
  EXPECT_EQ(dim, 20u);
  EXPECT_TRUE(validate_tessellation_family(s.line_graph, {s.alpha, s.beta}).valid());
  const Operator u = s.staggered_walk();
  const Operator w = s.szegedy_walk();
  EXPECT_LE(relabel_gap(w, u, s.bijection, 10), 1e-10);

  const auto stag = evolve(u, s.initial, 30);
  ComplexVector z = s.szegedy_initial();
  for (std::size_t t = 0; t <= 30; ++t) {
    for (std::size_t k = 0; k < dim; ++k) {
      const auto [x, y] = s.bijection.edge_of(k);
      ASSERT_NEAR(std::norm(stag[t][k]), std::norm(z(static_cast<Eigen::Index>(x * 10 + y))),
                  1e-10);
    }
    z = w * z;
  }
  // Polygon statistics agree as well, including the mass left on missing
  // polygons.
  const auto meas = polygon_observable_measure(stag[5], s.alpha);
  double szegedy_marked = 0.0;
  ComplexVector z5 = s.szegedy_initial();
  for (int t = 0; t < 5; ++t) z5 = w * z5;
  for (Eigen::Index y = 0; y < 10; ++y) szegedy_marked += std::norm(z5(y));
  EXPECT_NEAR(meas.remainder, szegedy_marked, 1e-10);
}

TEST(polygon_measure, examples) {
  const auto singles = uniform_tessellation(Graph(4, {}), {{0}, {1}, {2}, {3}});
  const auto m = polygon_observable_measure(uniform_state(4), singles);
  for (double p : m.probabilities) EXPECT_NEAR(p, 0.25, 1e-15);
  EXPECT_NEAR(m.remainder, 0.0, 1e-15);

  const auto g = grover_instance(4, {0});
  const auto lost = polygon_observable_measure(StateVector::basis(4, 0), g.alpha);
  EXPECT_NEAR(lost.remainder, 1.0, 1e-15);

  const Operator u = evolution_operator({g.alpha, g.beta}, 4);
  const auto states = evolve(u, uniform_state(4), 1);
  const auto after = polygon_observable_measure(states[1], g.alpha);
  EXPECT_GE(after.remainder, 0.9);
  EXPECT_NEAR(after.remainder, testing::grover_probability(4, 1, 1), 1e-12);

  EXPECT_THROW(polygon_observable_measure(uniform_state(3), singles), InvalidArgument);
}

}  // namespace
}  // namespace sqw
