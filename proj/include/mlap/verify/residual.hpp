#ifndef MLAP_VERIFY_RESIDUAL_HPP
#define MLAP_VERIFY_RESIDUAL_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "../error.hpp"
#include "../graph.hpp"
#include "../numeric.hpp"
#include "../operators.hpp"
#include "../params.hpp"
#include "../vertex_function.hpp"

namespace mlap {

struct residual_entry {
  std::int64_t vertex;
  residual_value r;
};

/// Outcome of a residual sweep. Vertices are reported through the caller's labels
/// (vertex ids for explicit graphs, levels for radial trees).
struct residual_report {
  std::size_t checked_vertices = 0;
  std::vector<residual_entry> violations;
  std::vector<residual_entry> entries;  // every checked vertex, in label order
  double max_normalized = -inf;         // max of residual / scale
  std::int64_t worst_vertex = 0;  // meaningful when checked_vertices > 0
  double worst_value = 0.0;
  tolerance tol;
  std::vector<std::int64_t> boundary_excluded;

  bool ok() const { return violations.empty(); }
};

/// Residual sweep over `interior`; every other vertex is listed as excluded.
template <graph_like G>
residual_report verify_supersolution(
    const G& g, const vertex_function& u, const param_triple& pr, const std::vector<vertex_id>& interior,
    tolerance tol = {},
    const std::function<std::int64_t(vertex_id)>& label = [](vertex_id x) { return static_cast<std::int64_t>(x); }) {
  u.require_domain(g);
  std::vector<char> inside(g.vertex_count(), 0);
  for (vertex_id x : interior) {
    if (x >= g.vertex_count()) throw domain_error("interior vertex " + std::to_string(x) + " is out of range");
    inside[x] = 1;
  }
  std::vector<std::int64_t> bad;
  for (vertex_id x = 0; x < g.vertex_count(); ++x) {
    if (!inside[x]) continue;
    auto positive = [&](vertex_id y) { return u.is_log() || u.raw()[y] > 0.0; };
    if (!positive(x)) bad.push_back(label(x));
    for (const auto& nb : g.neighbors(x))
      if (!positive(nb.target)) bad.push_back(label(nb.target));
  }
  if (!bad.empty()) {
    std::sort(bad.begin(), bad.end());
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
    std::string list;
    for (std::size_t i = 0; i < bad.size() && i < 20; ++i) list += (i ? "," : "") + std::to_string(bad[i]);
    throw domain_error("u must be positive on the closed neighborhood of the interior; offending vertices: " + list);
  }
  residual_report rep;
  rep.tol = tol;
  for (vertex_id x = 0; x < g.vertex_count(); ++x) {
    if (!inside[x]) {
      rep.boundary_excluded.push_back(label(x));
      continue;
    }
    residual_entry e{label(x), residual(g, u, pr, x)};
    ++rep.checked_vertices;
    const double norm = e.r.infinite ? inf : e.r.normalized;
    if (rep.checked_vertices == 1 || norm > rep.max_normalized) {
      rep.max_normalized = norm;
      rep.worst_vertex = e.vertex;
      rep.worst_value = e.r.value();
    }
    if (!e.r.passes(tol)) rep.violations.push_back(e);
    rep.entries.push_back(e);
  }
  auto by_label = [](const residual_entry& a, const residual_entry& b) { return a.vertex < b.vertex; };
  std::sort(rep.entries.begin(), rep.entries.end(), by_label);
  std::sort(rep.violations.begin(), rep.violations.end(), by_label);
  std::sort(rep.boundary_excluded.begin(), rep.boundary_excluded.end());
  return rep;
}

}  // namespace mlap

#endif  // MLAP_VERIFY_RESIDUAL_HPP
