#ifndef MLAP_DISTANCE_HPP
#define MLAP_DISTANCE_HPP

#include <cmath>
#include <cstdint>
#include <queue>
#include <string>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "numeric.hpp"

namespace mlap {

/// Breadth-first hop distance from o; -1 for unreachable vertices.
template <graph_like G>
std::vector<std::int64_t> hop_distances(const G& g, vertex_id o) {
  if (o >= g.vertex_count()) throw domain_error("center " + std::to_string(o) + " is out of range");
  std::vector<std::int64_t> d(g.vertex_count(), -1);
  std::queue<vertex_id> todo;
  d[o] = 0;
  todo.push(o);
  while (!todo.empty()) {
    vertex_id x = todo.front();
    todo.pop();
    for (const auto& nb : g.neighbors(x))
      if (d[nb.target] < 0) {
        d[nb.target] = d[x] + 1;
        todo.push(nb.target);
      }
  }
  return d;
}

/// B(o, n) in increasing vertex order.
template <graph_like G>
std::vector<vertex_id> ball(const G& g, vertex_id o, std::int64_t n) {
  if (n < 0) throw parameter_error("ball radius must be >= 0");
  auto d = hop_distances(g, o);
  std::vector<vertex_id> out;
  for (vertex_id x = 0; x < d.size(); ++x)
    if (d[x] >= 0 && d[x] <= n) out.push_back(x);
  return out;
}

struct volume_row {
  std::int64_t n;
  double V;  // may be inf when only the log is representable
  double W;
  double log_V;
  double log_W;
};

/// V_o(n) and W_o(n) for n = 0..n_max from one traversal.
template <graph_like G>
std::vector<volume_row> volume_profile(const G& g, vertex_id o, std::int64_t n_max) {
  if (n_max < 0) throw parameter_error("n_max must be >= 0");
  auto d = hop_distances(g, o);
  const std::size_t levels = static_cast<std::size_t>(n_max) + 1;
  std::vector<double> v_lin(levels, 0.0), w_lin(levels, 0.0);
  std::vector<log_sum> v_log(levels), w_log(levels);
  for (vertex_id x = 0; x < g.vertex_count(); ++x) {
    if (d[x] < 0 || d[x] > n_max) continue;
    const auto lvl = static_cast<std::size_t>(d[x]);
    const double lm = g.log_multiplicity(x);
    const double mult = std::exp(lm);
    for (const auto& nb : g.neighbors(x)) {
      const double lc = std::log(nb.count);
      v_lin[lvl] += mult * nb.count * nb.weight;
      v_log[lvl].add(lm + lc + nb.log_weight);
      if (d[nb.target] > d[x]) {
        w_lin[lvl] += mult * nb.count * nb.weight;
        w_log[lvl].add(lm + lc + nb.log_weight);
      }
    }
  }
  std::vector<volume_row> rows;
  double V = 0.0, W = 0.0;
  log_sum lV, lW;
  for (std::size_t k = 0; k < levels; ++k) {
    V += v_lin[k];
    W += w_lin[k];
    if (!v_log[k].empty()) lV.add(v_log[k].value());
    if (!w_log[k].empty()) lW.add(w_log[k].value());
    rows.push_back({static_cast<std::int64_t>(k), V, W, lV.value(), lW.value()});
  }
  return rows;
}

template <graph_like G>
double volume_V(const G& g, vertex_id o, std::int64_t n) {
  return volume_profile(g, o, n).back().V;
}

template <graph_like G>
double volume_W(const G& g, vertex_id o, std::int64_t n) {
  return volume_profile(g, o, n).back().W;
}

}  // namespace mlap

#endif  // MLAP_DISTANCE_HPP
