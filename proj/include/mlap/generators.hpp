#ifndef MLAP_GENERATORS_HPP
#define MLAP_GENERATORS_HPP

#include <cstddef>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace mlap {

/// Chain of complete graphs K_2, K_3, ..., K_last with unit weights, each clique sharing
/// one vertex with the next. The root is the vertex of K_2 not shared with K_3.
inline weighted_graph clique_chain(int last) {
  if (last < 3) throw parameter_error("clique chain needs at least K_2 and K_3");
  std::vector<edge> edges{edge::linear(0, 1, 1.0)};
  vertex_id joint = 1;
  vertex_id next = 2;
  for (int k = 3; k <= last; ++k) {
    std::vector<vertex_id> members{joint};
    for (int j = 1; j < k; ++j) members.push_back(next++);
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        edges.push_back(edge::linear(members[a], members[b], 1.0));
    joint = members.back();
  }
  return weighted_graph(next, 0, std::move(edges));
}

/// Homogeneous tree T_N truncated at `depth`, unit weights, breadth-first numbering.
inline weighted_graph unit_tree(int N, int depth, std::size_t max_vertices = 1'000'000) {
  if (N < 2) throw parameter_error("tree degree must be >= 2");
  if (depth < 1) throw parameter_error("tree depth must be >= 1");
  std::vector<edge> edges;
  std::vector<vertex_id> level{0};
  vertex_id next = 1;
  for (int n = 0; n < depth; ++n) {
    std::vector<vertex_id> children;
    for (vertex_id x : level) {
      const int fan = n == 0 ? N : N - 1;
      for (int c = 0; c < fan; ++c) {
        if (next >= max_vertices) throw size_guard_error("tree exceeds the vertex budget");
        edges.push_back(edge::linear(x, next, 1.0));
        children.push_back(next++);
      }
    }
    level = std::move(children);
  }
  return weighted_graph(next, 0, std::move(edges));
}

/// Star with a center (vertex 0) and `spokes` leaves of weight w.
inline weighted_graph star(int spokes, double w = 1.0) {
  if (spokes < 1) throw parameter_error("star needs at least one spoke");
  std::vector<edge> edges;
  for (int i = 1; i <= spokes; ++i) edges.push_back(edge::linear(0, static_cast<vertex_id>(i), w));
  return weighted_graph(static_cast<std::size_t>(spokes) + 1, 0, std::move(edges));
}

}  // namespace mlap

#endif  // MLAP_GENERATORS_HPP
