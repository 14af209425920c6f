#ifndef MLAP_GRAPH_HPP
#define MLAP_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "numeric.hpp"

namespace mlap {

using vertex_id = std::size_t;

/// One adjacency entry. `count` > 1 only in quotient graphs, where it stands for
/// that many identical parallel edges of the underlying graph.
struct neighbor {
  vertex_id target;
  double weight;      // linear weight; may be 0 or inf when only the log is representable
  double log_weight;  // ln of the single-edge weight
  double count = 1.0;
};

/// Undirected edge as supplied by the caller.
struct edge {
  vertex_id u;
  vertex_id v;
  double log_weight;
  double weight;

  static edge linear(vertex_id u, vertex_id v, double w) { return {u, v, std::log(w), w}; }
  static edge from_log(vertex_id u, vertex_id v, double lw) { return {u, v, lw, std::exp(lw)}; }

  friend bool operator==(const edge&, const edge&) = default;
};

/// Anything the operators can run on: an explicit graph or a radial quotient.
template <class G>
concept graph_like = requires(const G& g, vertex_id x) {
  { g.vertex_count() } -> std::convertible_to<std::size_t>;
  { g.root() } -> std::convertible_to<vertex_id>;
  { g.neighbors(x) } -> std::convertible_to<std::span<const neighbor>>;
  { g.log_multiplicity(x) } -> std::convertible_to<double>;
};

/// Immutable, symmetric, positively weighted, connected simple graph with a root.
class weighted_graph {
 public:
  weighted_graph(std::size_t vertex_count, vertex_id root, std::vector<edge> edges)
      : n_(vertex_count), root_(root), edges_(std::move(edges)) {
    if (n_ < 2) throw domain_error("graph needs at least two vertices");
    if (root_ >= n_) throw domain_error("root " + std::to_string(root_) + " is not a vertex");
    std::vector<std::size_t> degree(n_, 0);
    for (const auto& e : edges_) {
      if (e.u >= n_ || e.v >= n_)
        throw domain_error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                           ") references a missing vertex");
      if (e.u == e.v) throw domain_error("self-loop at vertex " + std::to_string(e.u));
      if (!std::isfinite(e.log_weight) || !(e.weight >= 0.0))
        throw domain_error("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                           ") has a non-positive or non-finite weight");
      ++degree[e.u];
      ++degree[e.v];
    }
    offsets_.assign(n_ + 1, 0);
    for (std::size_t x = 0; x < n_; ++x) offsets_[x + 1] = offsets_[x] + degree[x];
    adjacency_.resize(offsets_[n_]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
      adjacency_[fill[e.u]++] = {e.v, e.weight, e.log_weight, 1.0};
      adjacency_[fill[e.v]++] = {e.u, e.weight, e.log_weight, 1.0};
    }
    for (std::size_t x = 0; x < n_; ++x) {
      auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[x]);
      auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[x + 1]);
      std::sort(first, last, [](const neighbor& a, const neighbor& b) { return a.target < b.target; });
      auto dup = std::adjacent_find(first, last, [](const neighbor& a, const neighbor& b) {
        return a.target == b.target;
      });
      if (dup != last)
        throw domain_error("duplicate edge between " + std::to_string(x) + " and " +
                           std::to_string(dup->target));
    }
    check_connected();
  }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  vertex_id root() const noexcept { return root_; }
  double log_multiplicity(vertex_id) const noexcept { return 0.0; }

  std::span<const neighbor> neighbors(vertex_id x) const {
    check_vertex(x);
    return {adjacency_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
  }

  std::size_t degree(vertex_id x) const { return neighbors(x).size(); }

  /// The edge list as supplied.
  const std::vector<edge>& edges() const noexcept { return edges_; }

  /// Edge list rebuilt from the adjacency cache, each pair once with u < v, sorted.
  std::vector<edge> edges_from_adjacency() const {
    std::vector<edge> out;
    for (vertex_id x = 0; x < n_; ++x)
      for (const auto& nb : neighbors(x))
        if (x < nb.target) out.push_back({x, nb.target, nb.log_weight, nb.weight});
    return out;
  }

  void check_vertex(vertex_id x) const {
    if (x >= n_) throw domain_error("vertex " + std::to_string(x) + " is out of range");
  }

 private:
  void check_connected() const {
    std::vector<char> seen(n_, 0);
    std::queue<vertex_id> todo;
    todo.push(root_);
    seen[root_] = 1;
    std::size_t reached = 1;
    while (!todo.empty()) {
      vertex_id x = todo.front();
      todo.pop();
      for (const auto& nb : neighbors(x))
        if (!seen[nb.target]) {
          seen[nb.target] = 1;
          ++reached;
          todo.push(nb.target);
        }
    }
    if (reached != n_)
      throw domain_error("graph is not connected: " + std::to_string(n_ - reached) +
                         " vertices unreachable from the root");
  }

  std::size_t n_;
  vertex_id root_;
  std::vector<edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<neighbor> adjacency_;
};


}  // namespace mlap

#endif  // MLAP_GRAPH_HPP
