#ifndef MLAP_VERIFY_DESCENT_HPP
#define MLAP_VERIFY_DESCENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "../error.hpp"
#include "../graph.hpp"
#include "../operators.hpp"
#include "../vertex_function.hpp"

namespace mlap {

struct descent_step {
  vertex_id vertex;
  double u;
  double laplacian;
  double gradient;
};

struct descent_report {
  std::vector<descent_step> steps;
  bool truncated = false;             // stopped on a vertex whose neighborhood is cut off
  bool strictly_decreasing = true;
  bool nonincreasing = true;
  bool laplacian_negative = true;     // Delta_m u < 0 at every recorded step
  std::vector<double> increments;     // u(x_n) - u(x_(n+1))
};

/// Follows x_(n+1) = argmin_(y ~ x_n) u(y), ties to the smallest id, for at most `steps`
/// moves. With an interior set the walk stops on the first vertex outside it.
template <graph_like G>
descent_report descent_sequence(const G& g, const vertex_function& u, double m, vertex_id x0, int steps,
                                std::optional<std::vector<vertex_id>> interior = {}) {
  u.require_domain(g);
  if (steps < 0) throw parameter_error("steps must be >= 0");
  if (x0 >= g.vertex_count()) throw domain_error("start vertex is out of range");
  for (vertex_id x = 0; x < g.vertex_count(); ++x)
    if (!u.is_log() && !(u.raw()[x] > 0.0)) throw domain_error("u must be positive");
  std::vector<char> inside(g.vertex_count(), interior ? 0 : 1);
  if (interior)
    for (vertex_id x : *interior) inside.at(x) = 1;
  if (!inside[x0]) throw precondition_error("start vertex is not interior");
  if (gradient_norm(g, u, x0) == 0.0) throw precondition_error("|grad u| vanishes at the start vertex");
  descent_report rep;
  vertex_id x = x0;
  for (int n = 0;; ++n) {
    rep.steps.push_back({x, u.value(x), m_laplacian(g, u, m, x), gradient_norm(g, u, x)});
    if (!(rep.steps.back().laplacian < 0.0)) rep.laplacian_negative = false;
    if (n == steps) break;
    vertex_id best = x;
    bool first = true;
    for (const auto& nb : g.neighbors(x)) {
      const double lr = u.is_log() ? u.raw()[nb.target] : u.value(nb.target);
      const double lb = u.is_log() ? u.raw()[best] : u.value(best);
      if (first || lr < lb || (lr == lb && nb.target < best)) {
        best = nb.target;
        first = false;
      }
    }
    const double inc = u.value(x) - u.value(best);
    rep.increments.push_back(inc);
    if (!(inc > 0.0)) rep.strictly_decreasing = false;
    if (inc < 0.0) rep.nonincreasing = false;
    x = best;
    if (!inside[x]) {
      rep.steps.push_back({x, u.value(x), m_laplacian(g, u, m, x), gradient_norm(g, u, x)});
      rep.truncated = true;
      break;
    }
  }
  return rep;
}

}  // namespace mlap

#endif  // MLAP_VERIFY_DESCENT_HPP
