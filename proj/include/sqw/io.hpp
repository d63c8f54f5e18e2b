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

// JSON schemas ("schema": "sqw/1") and CSV emitters.
//
// Bundle document:
//   {
//     "schema": "sqw/1",
//     "graph": {"n": int, "edges": [[i, j], ...], "labels": [string]?},
//     "tessellations": [
//       {"polygons": [{"vertices": [int], "amplitudes": [[re, im]]?}],
//        "partial": bool}, ...],
//     "szegedy": {"x": int, "y": int, "P": [[..]], "Q": [[..]],
//                 "theta": [[..]]?, "theta_prime": [[..]]?},
//     "options": {"marked": [int], "steps": int, "t_max": int, "tol": float,
//                 "initial": "uniform" | {"vertex": int} |
//                            {"amplitudes": [[re, im]]}}
//   }
// Every section is optional; commands check for the ones they need. The first
// tessellation listed is applied first. Omitted amplitudes mean uniform. Zero
// amplitudes are dropped on load and the tessellation becomes partial.

#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sqw/dynamics.hpp"
#include "sqw/graph.hpp"
#include "sqw/spectral.hpp"
#include "sqw/szegedy.hpp"
#include "sqw/tessellation.hpp"
#include "sqw/types.hpp"

namespace sqw::io {

using json = nlohmann::json;

inline constexpr const char* kSchema = "sqw/1";

struct InitialState {
  // Exactly one of these is meaningful; neither means uniform.
  std::optional<Vertex> vertex;
  std::optional<std::vector<Complex>> amplitudes;

  friend bool operator==(const InitialState&, const InitialState&) = default;
};

struct Options {
  std::vector<Vertex> marked;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> t_max;
  std::optional<double> tol;
  InitialState initial;

  friend bool operator==(const Options&, const Options&) = default;
};

struct Bundle {
  std::optional<Graph> graph;
  std::vector<std::string> labels;
  std::vector<Tessellation> tessellations;
  std::optional<SzegedyInstance> szegedy;
  Options options;
};

// --- primitives -----------------------------------------------------------

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidArgument("complex value must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json matrix_to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline RealMatrix matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols,
                                   const char* name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
    throw InvalidArgument(std::string(name) + " must have " + std::to_string(rows) + " rows");
  }
  RealMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InvalidArgument(std::string(name) + " row " + std::to_string(r) + " must have " +
                            std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

// --- graph ----------------------------------------------------------------

inline json graph_to_json(const Graph& g, const std::vector<std::string>& labels = {}) {
  json edges = json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
  json out = {{"n", g.vertex_count()}, {"edges", edges}};
  if (!labels.empty()) out["labels"] = labels;
  return out;
}

inline Graph graph_from_json(const json& j, std::vector<std::string>* labels = nullptr) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
    throw InvalidArgument("graph needs \"n\" and \"edges\"");
  }
  const auto n = j.at("n").get<std::size_t>();
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw InvalidArgument("edge must be [i, j]");
    edges.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>());
  }
  if (j.contains("labels")) {
    auto names = j.at("labels").get<std::vector<std::string>>();
    if (names.size() != n) throw InvalidArgument("labels must have one entry per vertex");
    if (labels) *labels = std::move(names);
  }
  return Graph(n, edges);
}

inline json bipartite_to_json(const BipartiteGraph& g) {
  json edges = json::array();
  for (const auto& [x, y] : g.edges()) edges.push_back({x, y});
  return {{"x", g.x_count()}, {"y", g.y_count()}, {"edges", edges}};
}

inline BipartiteGraph bipartite_from_json(const json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) edges.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>());
  return BipartiteGraph(j.at("x").get<std::size_t>(), j.at("y").get<std::size_t>(), edges);
}

inline json bijection_to_json(const EdgeBijection& f) {
  json out = json::array();
  for (const auto& [a, b] : f.edges()) out.push_back({a, b});
  return out;
}

// --- tessellations --------------------------------------------------------

inline json tessellation_to_json(const Tessellation& t) {
  json polygons = json::array();
  for (const auto& p : t.polygons) {
    json amps = json::array();
    for (const auto& a : p.amplitudes()) amps.push_back(complex_to_json(a));
    polygons.push_back({{"vertices", p.vertices()}, {"amplitudes", amps}});
  }
  return {{"polygons", polygons}, {"partial", t.partial}};
}

/// n is the host vertex count, used to decide whether dropping zero
/// amplitudes leaves vertices uncovered.
inline Tessellation tessellation_from_json(const json& j, std::size_t n) {
  if (!j.is_object() || !j.contains("polygons")) {
    throw InvalidArgument("tessellation needs \"polygons\"");
  }
  Tessellation t;
  t.partial = j.value("partial", false);
  bool dropped = false;
  for (const auto& pj : j.at("polygons")) {
    auto vertices = pj.at("vertices").get<std::vector<Vertex>>();
    if (!pj.contains("amplitudes")) {
      t.polygons.push_back(Polygon::uniform(std::move(vertices)));
      continue;
    }
    const auto& aj = pj.at("amplitudes");
    if (!aj.is_array() || aj.size() != vertices.size()) {
      throw InvalidArgument("polygon needs one amplitude per vertex");
    }
    std::vector<Vertex> kept;
    std::vector<Complex> amps;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const Complex a = complex_from_json(aj[i]);
      if (a == Complex(0.0, 0.0)) {
        dropped = true;
        continue;
      }
      kept.push_back(vertices[i]);
      amps.push_back(a);
    }
    if (!kept.empty()) t.polygons.emplace_back(std::move(kept), std::move(amps));
  }
  if (dropped && t.covered().size() < n) t.partial = true;
  return t;
}

// --- Szegedy --------------------------------------------------------------

inline json szegedy_to_json(const SzegedyInstance& inst) {
  json out = {{"x", inst.m()}, {"y", inst.n()}, {"P", matrix_to_json(inst.p)},
              {"Q", matrix_to_json(inst.q)}};
  if (inst.theta) out["theta"] = matrix_to_json(*inst.theta);
  if (inst.theta_prime) out["theta_prime"] = matrix_to_json(*inst.theta_prime);
  return out;
}

inline SzegedyInstance szegedy_from_json(const json& j) {
  const auto m = j.at("x").get<Eigen::Index>();
  const auto n = j.at("y").get<Eigen::Index>();
  std::optional<RealMatrix> theta, theta_prime;
  if (j.contains("theta")) theta = matrix_from_json(j.at("theta"), m, n, "theta");
  if (j.contains("theta_prime")) {
    theta_prime = matrix_from_json(j.at("theta_prime"), m, n, "theta_prime");
  }
  return SzegedyInstance::from_matrices(matrix_from_json(j.at("P"), m, n, "P"),
                                        matrix_from_json(j.at("Q"), n, m, "Q"),
                                        std::move(theta), std::move(theta_prime));
}

// --- bundle ---------------------------------------------------------------

inline json options_to_json(const Options& o) {
  json out = json::object();
  if (!o.marked.empty()) out["marked"] = o.marked;
  if (o.steps) out["steps"] = *o.steps;
  if (o.t_max) out["t_max"] = *o.t_max;
  if (o.tol) out["tol"] = *o.tol;
  if (o.initial.vertex) {
    out["initial"] = {{"vertex", *o.initial.vertex}};
  } else if (o.initial.amplitudes) {
    json amps = json::array();
    for (const auto& a : *o.initial.amplitudes) amps.push_back(complex_to_json(a));
    out["initial"] = {{"amplitudes", amps}};
  }
  return out;
}

inline Options options_from_json(const json& j) {
  Options o;
  if (j.contains("marked")) o.marked = j.at("marked").get<std::vector<Vertex>>();
  if (j.contains("steps")) o.steps = j.at("steps").get<std::size_t>();
  if (j.contains("t_max")) o.t_max = j.at("t_max").get<std::size_t>();
  if (j.contains("tol")) o.tol = j.at("tol").get<double>();
  if (j.contains("initial")) {
    const auto& init = j.at("initial");
    if (init.is_string()) {
      if (init.get<std::string>() != "uniform") {
        throw InvalidArgument("initial must be \"uniform\", {\"vertex\"} or {\"amplitudes\"}");
      }
    } else if (init.contains("vertex")) {
      o.initial.vertex = init.at("vertex").get<Vertex>();
    } else if (init.contains("amplitudes")) {
      std::vector<Complex> amps;
      for (const auto& a : init.at("amplitudes")) amps.push_back(complex_from_json(a));
      o.initial.amplitudes = std::move(amps);
    } else {
      throw InvalidArgument("unrecognized initial state");
    }
  }
  return o;
}

inline json bundle_to_json(const Bundle& b) {
  json out = {{"schema", kSchema}};
  if (b.graph) out["graph"] = graph_to_json(*b.graph, b.labels);
  if (!b.tessellations.empty()) {
    json ts = json::array();
    for (const auto& t : b.tessellations) ts.push_back(tessellation_to_json(t));
    out["tessellations"] = ts;
  }
  if (b.szegedy) out["szegedy"] = szegedy_to_json(*b.szegedy);
  const json opts = options_to_json(b.options);
  if (!opts.empty()) out["options"] = opts;
  return out;
}

inline Bundle bundle_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("bundle must be a JSON object");
  if (!j.contains("schema") || j.at("schema") != kSchema) {
    throw InvalidArgument(std::string("bundle must declare \"schema\": \"") + kSchema + "\"");
  }
  Bundle b;
  if (j.contains("graph")) b.graph = graph_from_json(j.at("graph"), &b.labels);
  if (j.contains("tessellations")) {
    if (!b.graph) throw InvalidArgument("tessellations need a graph");
    for (const auto& t : j.at("tessellations")) {
      b.tessellations.push_back(tessellation_from_json(t, b.graph->vertex_count()));
    }
  }
  if (j.contains("szegedy")) b.szegedy = szegedy_from_json(j.at("szegedy"));
  if (j.contains("options")) b.options = options_from_json(j.at("options"));
  return b;
}

/// Parses text; nlohmann parse and type errors become InvalidArgument.
inline Bundle parse_bundle(const std::string& text) {
  try {
    return bundle_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed bundle: ") + e.what());
  }
}

inline bool operator==(const Bundle& a, const Bundle& b) {
  auto same_szegedy = [](const std::optional<SzegedyInstance>& x,
                         const std::optional<SzegedyInstance>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->bipartite == y->bipartite && x->p == y->p && x->q == y->q &&
           x->theta == y->theta && x->theta_prime == y->theta_prime;
  };
  return a.graph == b.graph && a.labels == b.labels && a.tessellations == b.tessellations &&
         same_szegedy(a.szegedy, b.szegedy) && a.options == b.options;
}

// --- CSV ------------------------------------------------------------------

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

/// Row-major, one quoted "re,im" cell per entry.
inline void write_operator_csv(std::ostream& out, const Operator& u) {
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      if (c) out << ',';
      out << '"' << format_double(u(r, c).real()) << ',' << format_double(u(r, c).imag())
          << '"';
    }
    out << '\n';
  }
}

inline void write_spectrum_csv(std::ostream& out, const SpectralDecomposition& dec) {
  out << "re,im,class,theta\n";
  for (const auto& p : dec.pairs) {
    out << format_double(p.value.real()) << ',' << format_double(p.value.imag()) << ','
        << to_string(p.kind) << ',' << (p.angle ? format_double(*p.angle) : "") << '\n';
  }
  for (std::size_t i = 0; i < dec.residual_subspace_dim; ++i) {
    out << format_double(1.0) << ',' << format_double(0.0) << ','
        << to_string(SpectralClass::kResidual) << ",\n";
  }
}

inline json hitting_time_to_json(const HittingTimeResult& r) {
  json out = {{"T", r.T ? json(*r.T) : json(nullptr)},
              {"threshold", r.threshold},
              {"converged", r.converged},
              {"trace", r.trace}};
  return out;
}

}  // namespace sqw::io
