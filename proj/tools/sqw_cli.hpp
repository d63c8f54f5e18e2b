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

// Command-line front end. `run` is separate from main() so tests can drive it.
//
//   sqw validate     BUNDLE [-o FILE]
//   sqw operator     BUNDLE [--marked LIST] [-o FILE]
//   sqw evolve       BUNDLE [--steps N] [--marked LIST] [-o FILE]
//   sqw search       BUNDLE [--steps N] [--marked LIST] [-o FILE]
//   sqw hitting-time BUNDLE [--t-max N] [--marked LIST] [--trajectory FILE] [-o FILE]
//   sqw spectrum     BUNDLE [--marked LIST] [--tol X] [-o FILE]
//   sqw convert      BUNDLE --to szegedy|staggered [-o FILE]
//   sqw line-graph   BUNDLE [-o FILE]
//
// Exit codes: 0 ok, 2 malformed input, 3 validation failure, 4 conversion
// obstruction, 5 numeric failure.

#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sqw/sqw.hpp"

namespace sqw::cli {

enum ExitCode : int {
  kOk = 0,
  kMalformed = 2,
  kValidation = 3,
  kObstruction = 4,
  kNumeric = 5,
};

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  std::string to;
  std::string trajectory;
  std::optional<std::vector<Vertex>> marked;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> t_max;
  std::optional<double> tol;
};

namespace detail {

using io::json;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class ObstructionError : public Error {
 public:
  explicit ObstructionError(json payload)
      : Error("conversion obstruction"), payload_(std::move(payload)) {}
  const json& payload() const { return payload_; }

 private:
  json payload_;
};

struct Context {
  RunConfig config;
  io::Bundle bundle;

  std::vector<Vertex> marked() const {
    return config.marked ? *config.marked : bundle.options.marked;
  }
  std::optional<std::size_t> steps() const {
    return config.steps ? config.steps : bundle.options.steps;
  }
  std::optional<std::size_t> t_max() const {
    return config.t_max ? config.t_max : bundle.options.t_max;
  }
  std::optional<double> tol() const { return config.tol ? config.tol : bundle.options.tol; }

  const Graph& graph() const {
    if (!bundle.graph) throw InvalidArgument("bundle has no graph");
    return *bundle.graph;
  }
  std::size_t n() const { return graph().vertex_count(); }

  const std::vector<Tessellation>& tessellations() const {
    if (bundle.tessellations.size() < 2) {
      throw InvalidArgument("bundle needs at least two tessellations");
    }
    return bundle.tessellations;
  }

  void require_valid_family() const {
    const auto report = validate_tessellation_family(graph(), tessellations());
    if (!report.valid()) {
      throw ValidationError("invalid tessellation family: " + report.violations.front());
    }
  }

  StateVector initial_state() const {
    const auto& init = bundle.options.initial;
    if (init.vertex) return StateVector::basis(n(), *init.vertex);
    if (init.amplitudes) {
      if (init.amplitudes->size() != n()) {
        throw InvalidArgument("initial amplitudes need one entry per vertex");
      }
      ComplexVector v(static_cast<Eigen::Index>(n()));
      for (std::size_t k = 0; k < n(); ++k) v(static_cast<Eigen::Index>(k)) = (*init.amplitudes)[k];
      return StateVector(std::move(v));
    }
    return uniform_state(n());
  }

  // Vertices left out by partial tessellations.
  std::vector<Vertex> implicit_marked() const {
    return marked_vertices(graph(), tessellations());
  }

  // Marked set for reporting: implicit when the family is partial.
  std::vector<Vertex> effective_marked() const {
    const auto implicit = implicit_marked();
    const auto explicit_marked = normalize_marked(marked(), n());
    if (implicit.empty()) return explicit_marked;
    if (!explicit_marked.empty() && explicit_marked != implicit) {
      throw InvalidArgument("marked vertices are already implied by the partial tessellations");
    }
    return implicit;
  }

  // U for partial families or when nothing is marked, U_M otherwise.
  Operator walk_operator() const {
    require_valid_family();
    const auto m = normalize_marked(marked(), n());
    if (m.empty() || !implicit_marked().empty()) {
      effective_marked();
      return evolution_operator(tessellations(), n());
    }
    return search_operator(tessellations(), m, n());
  }
};

inline json report_to_json(const TessellationReport& r) {
  json out = {{"schema", io::kSchema}, {"valid", r.valid()}, {"violations", r.violations}};
  json uncovered = json::array();
  for (const auto& [a, b] : r.uncovered_edges) uncovered.push_back({a, b});
  out["uncovered_edges"] = uncovered;
  json shared = json::array();
  for (const auto& s : r.multi_vertex_intersections) {
    shared.push_back({{"tessellations", {s.first_tessellation, s.second_tessellation}},
                      {"polygons", {s.first_polygon, s.second_polygon}},
                      {"shared", s.shared}});
  }
  out["multi_vertex_intersections"] = shared;
  out["marked"] = r.marked;
  return out;
}

inline void write_distribution_rows(std::ostream& out, const std::vector<StateVector>& states,
                                    const std::vector<Vertex>& marked) {
  const std::size_t n = states.front().size();
  out << 't';
  if (!marked.empty()) out << ",p_marked";
  for (std::size_t k = 0; k < n; ++k) out << ",p_" << k;
  out << '\n';
  for (std::size_t t = 0; t < states.size(); ++t) {
    const auto p = vertex_distribution(states[t]);
    out << t;
    if (!marked.empty()) {
      double pm = 0.0;
      for (Vertex v : marked) pm += p[v];
      out << ',' << io::format_double(pm);
    }
    for (double x : p) out << ',' << io::format_double(x);
    out << '\n';
  }
}

inline int cmd_validate(const Context& ctx, std::ostream& out) {
  json doc = {{"schema", io::kSchema}};
  bool ok = true;
  if (ctx.bundle.graph && !ctx.bundle.tessellations.empty()) {
    if (ctx.bundle.tessellations.size() < 2) {
      throw InvalidArgument("bundle needs at least two tessellations");
    }
    const auto report = validate_tessellation_family(ctx.graph(), ctx.bundle.tessellations);
    doc = report_to_json(report);
    ok = report.valid();
  }
  if (ctx.bundle.szegedy) {
    std::vector<std::string> violations;
    try {
      validate_szegedy_instance(*ctx.bundle.szegedy);
    } catch (const ValidationError& e) {
      violations.push_back(e.what());
    }
    doc["szegedy"] = {{"valid", violations.empty()}, {"violations", violations}};
    ok = ok && violations.empty();
  }
  if (!ctx.bundle.graph && !ctx.bundle.szegedy) {
    throw InvalidArgument("bundle has neither tessellations nor a Szegedy instance");
  }
  doc["valid"] = ok;
  out << doc.dump(2) << '\n';
  return ok ? kOk : kValidation;
}

inline int cmd_operator(const Context& ctx, std::ostream& out) {
  io::write_operator_csv(out, ctx.walk_operator());
  return kOk;
}

inline int cmd_evolve(const Context& ctx, std::ostream& out) {
  const auto states = evolve(ctx.walk_operator(), ctx.initial_state(), ctx.steps().value_or(10));
  write_distribution_rows(out, states, {});
  return kOk;
}

inline int cmd_search(const Context& ctx, std::ostream& out) {
  const auto m = ctx.effective_marked();
  if (m.empty()) throw InvalidArgument("search needs marked vertices");
  const std::size_t steps = ctx.steps().value_or(ctx.n());
  const auto states = evolve(ctx.walk_operator(), ctx.initial_state(), steps);
  write_distribution_rows(out, states, m);
  return kOk;
}

inline int cmd_hitting_time(const Context& ctx, std::ostream& out) {
  const auto m = ctx.effective_marked();
  if (m.empty()) throw InvalidArgument("hitting-time needs marked vertices");
  const Operator u_m = ctx.walk_operator();
  const StateVector psi0 = ctx.initial_state();
  const auto result =
      hitting_time(u_m, psi0, m.size(), ctx.n(), ctx.t_max().value_or(default_t_max(ctx.n())));
  json doc = io::hitting_time_to_json(result);
  doc["schema"] = io::kSchema;
  doc["N"] = ctx.n();
  doc["marked"] = m;
  out << doc.dump(2) << '\n';

  if (!ctx.config.trajectory.empty()) {
    std::ofstream traj(ctx.config.trajectory);
    if (!traj) throw InvalidArgument("cannot write " + ctx.config.trajectory);
    const auto states = evolve(u_m, psi0, result.trace.size() - 1);
    traj << "t,F";
    for (std::size_t k = 0; k < ctx.n(); ++k) traj << ",p_" << k;
    traj << '\n';
    for (std::size_t t = 0; t < states.size(); ++t) {
      traj << t << ',' << io::format_double(result.trace[t]);
      for (double x : vertex_distribution(states[t])) traj << ',' << io::format_double(x);
      traj << '\n';
    }
  }
  return kOk;
}

inline int cmd_spectrum(const Context& ctx, std::ostream& out) {
  ctx.require_valid_family();
  const auto m = ctx.implicit_marked().empty() ? ctx.marked() : std::vector<Vertex>{};
  const auto dec = spectral_decomposition(ctx.tessellations(), m, ctx.n(),
                                          ctx.tol().value_or(tol::kSingular));
  const Operator u_m = ctx.walk_operator();
  const auto report = verify_eigensystem(u_m, dec, 1e-8);
  if (!report.ok()) throw NumericError("eigensystem check failed: " + report.failures.front());
  io::write_spectrum_csv(out, dec);
  return kOk;
}

inline int cmd_convert(const Context& ctx, std::ostream& out) {
  if (ctx.config.to == "szegedy") {
    const auto& ts = ctx.tessellations();
    if (ts.size() != 2) throw InvalidArgument("convert needs exactly two tessellations");
    const auto result = staggered_to_szegedy(ctx.graph(), ts[0], ts[1]);
    if (const auto* obs = std::get_if<ConversionObstruction>(&result)) {
      throw ObstructionError({{"error", "conversion_obstruction"},
                              {"alpha_polygon", obs->alpha_polygon},
                              {"beta_polygon", obs->beta_polygon},
                              {"shared", obs->shared}});
    }
    const auto& conv = std::get<SzegedyFromStaggered>(result);
    json doc = {{"schema", io::kSchema}, {"szegedy", io::szegedy_to_json(conv.instance)}};
    doc["bijection"] = io::bijection_to_json(conv.bijection);
    out << doc.dump(2) << '\n';
    return kOk;
  }
  if (ctx.config.to == "staggered") {
    if (!ctx.bundle.szegedy) throw InvalidArgument("bundle has no Szegedy instance");
    const auto conv = szegedy_to_staggered(*ctx.bundle.szegedy);
    io::Bundle b;
    b.graph = conv.line_graph;
    b.tessellations = {conv.alpha, conv.beta};
    json doc = io::bundle_to_json(b);
    doc["bijection"] = io::bijection_to_json(conv.bijection);
    out << doc.dump(2) << '\n';
    return kOk;
  }
  throw InvalidArgument("--to must be szegedy or staggered");
}

inline int cmd_line_graph(const Context& ctx, std::ostream& out) {
  const auto lg = line_graph(ctx.graph());
  json doc = {{"schema", io::kSchema}, {"graph", io::graph_to_json(lg.graph)}};
  doc["bijection"] = io::bijection_to_json(lg.bijection);
  out << doc.dump(2) << '\n';
  return kOk;
}

inline int dispatch(const Context& ctx, std::ostream& out) {
  const auto& c = ctx.config.command;
  if (c == "validate") return cmd_validate(ctx, out);
  if (c == "operator") return cmd_operator(ctx, out);
  if (c == "evolve") return cmd_evolve(ctx, out);
  if (c == "search") return cmd_search(ctx, out);
  if (c == "hitting-time") return cmd_hitting_time(ctx, out);
  if (c == "spectrum") return cmd_spectrum(ctx, out);
  if (c == "convert") return cmd_convert(ctx, out);
  if (c == "line-graph") return cmd_line_graph(ctx, out);
  throw InvalidArgument("unknown command " + c);
}

}  // namespace detail

/// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"Staggered quantum walk simulator"};
  app.require_subcommand(1);
  std::string marked_text;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"validate", "Check a tessellation family or Szegedy instance"},
      {"operator", "Write the evolution operator as CSV"},
      {"evolve", "Write vertex probabilities over time as CSV"},
      {"search", "Evolve under the search operator and report marked probability"},
      {"hitting-time", "Quantum hitting time as JSON"},
      {"spectrum", "Eigenvalues of the (search) operator as CSV"},
      {"convert", "Convert between staggered and Szegedy forms"},
      {"line-graph", "Line graph of the bundle graph"},
  };
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("bundle", config.input, "Input bundle (JSON)")->required();
    sub->add_option("-o,--output", config.output, "Output file (default stdout)");
    const std::string name = s.name;
    if (name == "operator" || name == "evolve" || name == "search" || name == "hitting-time" ||
        name == "spectrum") {
      sub->add_option("--marked", marked_text, "Comma-separated marked vertices");
    }
    if (name == "evolve" || name == "search") {
      sub->add_option("--steps", config.steps, "Number of steps");
    }
    if (name == "hitting-time") {
      sub->add_option("--t-max", config.t_max, "Largest T to try (default 10 N^2)");
      sub->add_option("--trajectory", config.trajectory, "Also write t, F(t), p_k as CSV");
    }
    if (name == "spectrum") {
      sub->add_option("--tol", config.tol, "Singular value classification tolerance")
          ->check(CLI::PositiveNumber);
    }
    if (name == "convert") {
      sub->add_option("--to", config.to, "Target form")
          ->required()
          ->check(CLI::IsMember({"szegedy", "staggered"}));
    }
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  }
  for (const auto* sub : app.get_subcommands()) config.command = sub->get_name();

  try {
    if (!marked_text.empty()) {
      std::vector<Vertex> marked;
      std::stringstream ss(marked_text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long long v = -1;
        try {
          v = std::stoll(item, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != item.size() || v < 0) throw InvalidArgument("bad --marked entry: " + item);
        marked.push_back(static_cast<Vertex>(v));
      }
      config.marked = std::move(marked);
    }
    detail::Context ctx{config, io::parse_bundle(detail::read_file(config.input))};
    int code;
    if (config.output.empty()) {
      code = detail::dispatch(ctx, out);
    } else {
      std::ostringstream buf;
      code = detail::dispatch(ctx, buf);
      std::ofstream file(config.output, std::ios::binary);
      if (!file) throw InvalidArgument("cannot write " + config.output);
      file << buf.str();
    }
    return code;
  } catch (const detail::ObstructionError& e) {
    err << e.payload().dump() << '\n';
    return kObstruction;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const ValidationError& e) {
    err << "validation failed: " << e.what() << '\n';
    return kValidation;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kMalformed;
  }
}

}  // namespace sqw::cli
