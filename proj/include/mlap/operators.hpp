#ifndef MLAP_OPERATORS_HPP
#define MLAP_OPERATORS_HPP

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"
#include "graph.hpp"
#include "numeric.hpp"
#include "params.hpp"
#include "vertex_function.hpp"

namespace mlap {

namespace detail {

/// Calls f(nb, r) for every neighbor of x, where r = count * weight / scale, and returns
/// ln(scale). Linear weights are used unscaled when they are all representable.
template <graph_like G, class F>
double visit_relative_weights(const G& g, vertex_id x, F&& f) {
  auto nbs = g.neighbors(x);
  if (nbs.empty()) throw domain_error("vertex " + std::to_string(x) + " has no neighbors");
  bool linear = true;
  for (const auto& nb : nbs)
    if (!std::isnormal(nb.weight) || !std::isfinite(nb.weight * nb.count)) linear = false;
  if (linear) {
    for (const auto& nb : nbs) f(nb, nb.count * nb.weight);
    return 0.0;
  }
  double top = -inf;
  for (const auto& nb : nbs) top = std::max(top, nb.log_weight + std::log(nb.count));
  for (const auto& nb : nbs) f(nb, std::exp(nb.log_weight + std::log(nb.count) - top));
  return top;
}

struct local_sums {
  double flux = 0.0;   // sum r * |d|^(m-2) d
  double quad = 0.0;   // sum r * d^2
  double total = 0.0;  // sum r
};

/// Differences u(y) - u(x), scaled by u(x) when `relative` (then ln u(x) is the scale).
template <graph_like G>
local_sums collect(const G& g, const vertex_function& u, double m, vertex_id x, bool relative,
                   double& log_u_scale) {
  u.require_domain(g);
  local_sums s;
  log_u_scale = 0.0;
  const bool use_log = u.is_log();
  const auto& raw = u.raw();
  const double ux = raw.at(x);
  if (relative || use_log) log_u_scale = u.log_value(x);
  visit_relative_weights(g, x, [&](const neighbor& nb, double r) {
    double d;
    if (use_log)
      d = std::expm1(raw[nb.target] - ux);
    else if (relative)
      d = (raw[nb.target] - ux) / ux;
    else
      d = raw[nb.target] - ux;
    s.total += r;
    s.quad += r * d * d;
    s.flux += r * signed_pow(d, m - 1.0);
  });
  return s;
}

inline void check_m(double m) {
  if (!(m > 1.0)) throw parameter_error("m must exceed 1 (got " + std::to_string(m) + ")");
}

}  // namespace detail

/// ln mu(x).
template <graph_like G>
double log_vertex_measure(const G& g, vertex_id x) {
  double total = 0.0;
  double ls = detail::visit_relative_weights(g, x, [&](const neighbor&, double r) { total += r; });
  return ls + std::log(total);
}

/// mu(x) = sum of incident edge weights.
template <graph_like G>
double vertex_measure(const G& g, vertex_id x) {
  double total = 0.0;
  double ls = detail::visit_relative_weights(g, x, [&](const neighbor&, double r) { total += r; });
  return ls == 0.0 ? total : std::exp(ls + std::log(total));
}

/// Discrete m-Laplacian at x.
template <graph_like G>
double m_laplacian(const G& g, const vertex_function& u, double m, vertex_id x) {
  detail::check_m(m);
  double ls;
  auto s = detail::collect(g, u, m, x, false, ls);
  return std::exp((m - 1.0) * ls) * (s.flux / s.total);
}

/// Gamma(f, h)(x).
template <graph_like G>
double gradient_form(const G& g, const vertex_function& f, const vertex_function& h, vertex_id x) {
  f.require_domain(g);
  h.require_domain(g);
  const double fx = f.value(x), hx = h.value(x);
  double sum = 0.0, total = 0.0;
  double ls = detail::visit_relative_weights(g, x, [&](const neighbor& nb, double r) {
    total += r;
    sum += r * (f.value(nb.target) - fx) * (h.value(nb.target) - hx);
  });
  (void)ls;
  return sum / (2.0 * total);
}

/// |grad u|(x) = sqrt(Gamma(u, u)(x)).
template <graph_like G>
double gradient_norm(const G& g, const vertex_function& u, vertex_id x) {
  double ls;
  auto s = detail::collect(g, u, 2.0, x, false, ls);
  return std::exp(ls) * std::sqrt(s.quad / (2.0 * s.total));
}

/// ln |grad u|(x) for positive u (-inf when the gradient vanishes).
template <graph_like G>
double log_gradient_norm(const G& g, const vertex_function& u, vertex_id x) {
  double lu;
  auto s = detail::collect(g, u, 2.0, x, true, lu);
  return s.quad == 0.0 ? -inf : lu + 0.5 * std::log(s.quad / (2.0 * s.total));
}

/// Smallest p0 >= 1 with mu_xy / mu(x) >= 1/p0 on every ordered adjacent pair.
template <graph_like G>
double p0_constant(const G& g) {
  double best = 1.0;
  for (vertex_id x = 0; x < g.vertex_count(); ++x) {
    double total = 0.0;
    double ls = detail::visit_relative_weights(g, x, [&](const neighbor&, double r) { total += r; });
    for (const auto& nb : g.neighbors(x)) {
      double single = ls == 0.0 ? nb.weight : std::exp(nb.log_weight - ls);
      best = std::max(best, total / single);
    }
  }
  return best;
}

/// Value of Delta_m u + u^p |grad u|^q kept as normalized * exp(log_scale), where
/// exp(log_scale) = max(|Delta_m u|, u^p |grad u|^q).
struct residual_value {
  double normalized = 0.0;
  double log_scale = -inf;
  bool infinite = false;    // zero gradient with q < 0
  double log_laplacian = -inf;  // ln |Delta_m u|
  int laplacian_sign = 0;
  double log_source = -inf;     // ln (u^p |grad u|^q)

  double value() const {
    if (infinite) return inf;
    return log_scale == -inf ? 0.0 : normalized * std::exp(log_scale);
  }

  /// residual <= tol.abs + tol.rel * scale
  bool passes(const tolerance& tol) const {
    if (infinite) return false;
    if (log_scale == -inf) return 0.0 <= tol.abs;
    if (normalized <= tol.rel) return true;
    return tol.abs > 0.0 && normalized <= tol.rel + tol.abs * std::exp(-log_scale);
  }
};

/// Builds a residual from ln u(x) and the normalized local quantities
/// D = Delta_m u / u^(m-1) and Gq = |grad u|^2 / u^2.
inline residual_value assemble_residual(const param_triple& pr, double lu, double D, double Gq) {
  residual_value r;
  if (D != 0.0) {
    r.log_laplacian = (pr.m - 1.0) * lu + std::log(std::fabs(D));
    r.laplacian_sign = D > 0.0 ? 1 : -1;
  }
  if (pr.q == 0.0) {
    r.log_source = pr.p * lu;
  } else if (Gq == 0.0) {
    if (pr.q < 0.0) {
      r.infinite = true;
      r.normalized = inf;
      r.log_scale = inf;
      return r;
    }
  } else {
    r.log_source = pr.p * lu + pr.q * (lu + 0.5 * std::log(Gq));
  }
  r.log_scale = std::max(r.log_laplacian, r.log_source);
  if (r.log_scale == -inf) return r;
  r.normalized = r.laplacian_sign * exp_or_zero(r.log_laplacian - r.log_scale) +
                 exp_or_zero(r.log_source - r.log_scale);
  return r;
}

/// Delta_m u(x) + u(x)^p |grad u(x)|^q.
template <graph_like G>
residual_value residual(const G& g, const vertex_function& u, const param_triple& pr, vertex_id x) {
  double lu;
  auto s = detail::collect(g, u, pr.m, x, true, lu);
  return assemble_residual(pr, lu, s.flux / s.total, s.quad / (2.0 * s.total));
}

}  // namespace mlap

#endif  // MLAP_OPERATORS_HPP
