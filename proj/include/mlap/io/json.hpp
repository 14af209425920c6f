#ifndef MLAP_IO_JSON_HPP
#define MLAP_IO_JSON_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../error.hpp"
#include "../graph.hpp"
#include "../tree/profile.hpp"
#include "../vertex_function.hpp"
#include "csv.hpp"

namespace mlap::io {

using json = nlohmann::json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw format_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

namespace detail {

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw format_error(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline std::uint64_t as_index(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw format_error(where + " must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

inline double as_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw format_error(where + " must be a number");
  return j.get<double>();
}

/// Edge weight: decimal string, plain number, or {"log": value}.
inline edge parse_edge(const json& e, std::size_t i) {
  const std::string where = "edge " + std::to_string(i);
  if (!e.is_array() || e.size() != 3) throw format_error(where + " must be [u, v, w]");
  const vertex_id u = as_index(e[0], where + " endpoint");
  const vertex_id v = as_index(e[1], where + " endpoint");
  const json& w = e[2];
  if (w.is_object()) {
    if (w.size() != 1 || !w.contains("log")) throw format_error(where + ": weight object must be {\"log\": value}");
    return edge::from_log(u, v, as_number(w.at("log"), where + " log weight"));
  }
  double x;
  if (w.is_string()) {
    const std::string s = w.get<std::string>();
    std::size_t used = 0;
    try {
      x = std::stod(s, &used);
    } catch (const std::exception&) {
      throw format_error(where + ": weight '" + s + "' is not a decimal number");
    }
    if (used != s.size()) throw format_error(where + ": weight '" + s + "' is not a decimal number");
  } else {
    x = as_number(w, where + " weight");
  }
  if (!(x > 0.0) || !std::isfinite(x)) throw format_error(where + ": weight must be positive and finite");
  return edge::linear(u, v, x);
}

}  // namespace detail

struct graph_file {
  weighted_graph graph;
  std::optional<std::vector<vertex_id>> boundary;
};

inline graph_file graph_from_json(const json& j) {
  const std::string where = "graph";
  const auto n = detail::as_index(detail::field(j, "vertex_count", where), "vertex_count");
  const auto r = detail::as_index(detail::field(j, "root", where), "root");
  const json& es = detail::field(j, "edges", where);
  if (!es.is_array()) throw format_error("edges must be an array");
  std::vector<edge> edges;
  for (std::size_t i = 0; i < es.size(); ++i) edges.push_back(detail::parse_edge(es[i], i));
  graph_file out{weighted_graph(n, r, std::move(edges)), std::nullopt};
  if (j.contains("boundary")) {
    const json& b = j.at("boundary");
    if (!b.is_array()) throw format_error("boundary must be an array of vertex ids");
    std::vector<vertex_id> ids;
    for (const auto& x : b) {
      ids.push_back(detail::as_index(x, "boundary vertex"));
      out.graph.check_vertex(ids.back());
    }
    out.boundary = std::move(ids);
  }
  return out;
}

inline json graph_to_json(const weighted_graph& g, const std::optional<std::vector<vertex_id>>& boundary = {}) {
  json edges = json::array();
  for (const auto& e : g.edges_from_adjacency()) {
    if (std::isnormal(e.weight) && std::isfinite(e.weight))
      edges.push_back({e.u, e.v, format_double(e.weight)});
    else
      edges.push_back({e.u, e.v, json{{"log", e.log_weight}}});
  }
  json j{{"vertex_count", g.vertex_count()}, {"root", g.root()}, {"edges", edges}};
  if (boundary) j["boundary"] = *boundary;
  return j;
}

/// {"values": [...]} or {"log_values": [...]}.
inline vertex_function function_from_json(const json& j) {
  if (!j.is_object()) throw format_error("function must be a JSON object");
  const bool lin = j.contains("values"), lg = j.contains("log_values");
  if (lin == lg) throw format_error("function needs exactly one of 'values' or 'log_values'");
  const json& a = j.at(lin ? "values" : "log_values");
  if (!a.is_array()) throw format_error("function values must be an array");
  std::vector<double> v;
  for (std::size_t i = 0; i < a.size(); ++i) v.push_back(detail::as_number(a[i], "value " + std::to_string(i)));
  return lin ? vertex_function::linear(std::move(v)) : vertex_function::from_log(std::move(v));
}

inline json function_to_json(const vertex_function& u) {
  return json{{u.is_log() ? "log_values" : "values", u.raw()}};
}

inline json constants_to_json(const tree_constants& k) {
  json j = json::object();
  if (k.n0) j["n0"] = *k.n0;
  if (k.delta) j["delta"] = *k.delta;
  if (k.epsilon) j["epsilon"] = *k.epsilon;
  if (k.lambda) j["lambda"] = *k.lambda;
  if (k.a) j["a"] = *k.a;
  return j;
}

inline tree_constants constants_from_json(const json& j) {
  if (!j.is_object()) throw format_error("constants must be an object");
  tree_constants k;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "n0") {
      if (!it->is_number_integer()) throw format_error("n0 must be an integer");
      k.n0 = it->get<int>();
    } else if (key == "delta") {
      k.delta = detail::as_number(*it, key);
    } else if (key == "epsilon") {
      k.epsilon = detail::as_number(*it, key);
    } else if (key == "lambda") {
      k.lambda = detail::as_number(*it, key);
    } else if (key == "a") {
      k.a = detail::as_number(*it, key);
    } else {
      throw format_error("unknown constant '" + key + "'");
    }
  }
  return k;
}

inline json profile_to_json(const radial_profile& prof, bool with_sequences = true) {
  json j{{"case", std::string(to_string(prof.c))},
         {"N", prof.N},
         {"params", {{"m", prof.pr.m}, {"p", prof.pr.p}, {"q", prof.pr.q}}},
         {"constants", constants_to_json(prof.k)},
         {"depth", prof.hi}};
  if (with_sequences) {
    j["lo"] = prof.lo;
    j["log_mu"] = prof.mu_log;
    j["log_u"] = prof.u_log;
  }
  return j;
}

/// Sequences, when present, are taken as stored; otherwise regenerated from the constants.
inline radial_profile profile_from_json(const json& j) {
  const std::string where = "profile";
  const json& c = detail::field(j, "case", where);
  if (!c.is_string()) throw format_error("case must be a string");
  const json& N = detail::field(j, "N", where);
  if (!N.is_number_integer()) throw format_error("N must be an integer");
  const json& p = detail::field(j, "params", where);
  param_triple pr(detail::as_number(detail::field(p, "m", "params"), "m"),
                  detail::as_number(detail::field(p, "p", "params"), "p"),
                  detail::as_number(detail::field(p, "q", "params"), "q"));
  const json& d = detail::field(j, "depth", where);
  if (!d.is_number_integer()) throw format_error("depth must be an integer");
  auto prof = profile_from_constants(parse_tree_case(c.get<std::string>()), pr, N.get<int>(),
                                     constants_from_json(detail::field(j, "constants", where)), d.get<std::int64_t>());
  const bool has_mu = j.contains("log_mu"), has_u = j.contains("log_u");
  if (has_mu != has_u) throw format_error("profile needs both log_mu and log_u, or neither");
  if (has_mu) {
    auto read = [&](const char* key) {
      const json& a = j.at(key);
      if (!a.is_array() || a.size() != prof.mu_log.size())
        throw format_error(std::string(key) + " must hold " + std::to_string(prof.mu_log.size()) + " numbers");
      std::vector<double> v;
      for (const auto& x : a) {
        v.push_back(detail::as_number(x, key));
        if (!std::isfinite(v.back())) throw format_error(std::string(key) + " entries must be finite");
      }
      return v;
    };
    if (j.contains("lo") && (!j.at("lo").is_number_integer() || j.at("lo").get<std::int64_t>() != prof.lo))
      throw format_error("lo does not match the case");
    prof.mu_log = read("log_mu");
    prof.u_log = read("log_u");
  }
  return prof;
}

}  // namespace mlap::io

#endif  // MLAP_IO_JSON_HPP
