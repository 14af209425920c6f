#ifndef MLAP_VERIFY_CACCIOPPOLI_HPP
#define MLAP_VERIFY_CACCIOPPOLI_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "../error.hpp"
#include "../graph.hpp"
#include "../numeric.hpp"
#include "../operators.hpp"
#include "../params.hpp"
#include "../vertex_function.hpp"
#include "harnack.hpp"

namespace mlap {

struct caccioppoli_constant {
  double e;           // ((m-1)p + t(q-m+1)) / (p+q-t)
  double log_c_t;     // ln C_t
  double log_c_p1_t;  // ln C_{p1,t}
  double exponent;    // (mp + q + t(q-m)) / (p+q-m+1)
  double log_value;   // ln of the full constant
};

/// Explicit constant (C_{p1,t})^((p+q-t)/k) (2s)^e' t^(-(p(m-1)+t(q-m+1))/k), k = p+q-m+1.
inline caccioppoli_constant caccioppoli_constant_for(const param_triple& pr, double t, double s, double p1) {
  const double m = pr.m, p = pr.p, q = pr.q;
  const double kappa = p + q - m + 1.0;
  if (kappa == 0.0) throw singular_error("p + q - m + 1 = 0");
  if (p + q - t == 0.0) throw singular_error("p + q - t = 0");
  if (!(t > 0.0) || !(s > 0.0)) throw parameter_error("t and s must be positive");
  caccioppoli_constant c{};
  c.e = ((m - 1.0) * p + t * (q - m + 1.0)) / (p + q - t);
  if (!(c.e > 0.0)) throw parameter_error("the constant C_t = 2^(-1-e) e is not positive (e = " + std::to_string(c.e) + ")");
  c.log_c_t = -(1.0 + c.e) * std::log(2.0) + std::log(c.e);
  c.log_c_p1_t = (c.e + 1.0) * (0.5 * std::log(2.0 * p1) + std::log1p(std::pow(p1, t))) +
                 c.e * (t + 1.0) * std::log(p1) + c.log_c_t;
  c.exponent = (m * p + q + t * (q - m)) / kappa;
  c.log_value = (p + q - t) / kappa * c.log_c_p1_t + c.exponent * std::log(2.0 * s) -
                (p * (m - 1.0) + t * (q - m + 1.0)) / kappa * std::log(t);
  return c;
}

struct caccioppoli_result {
  double log_lhs;
  double log_rhs;
  double lhs;  // may overflow to inf; the logs decide
  double rhs;
  caccioppoli_constant constant;
  double p0;
  double p1;
  bool ok;
};

/// Both sides of the Caccioppoli-type estimate for the cutoff phi over omega (all vertices when
/// omega is empty). Sums are weighted by vertex multiplicities.
template <graph_like G>
caccioppoli_result caccioppoli_sides(const G& g, const vertex_function& u, const param_triple& pr, double t, double s,
                                     const vertex_function& phi, std::optional<std::vector<vertex_id>> omega = {},
                                     std::optional<double> p0 = {}) {
  u.require_domain(g);
  phi.require_domain(g);
  auto ex = exponents(pr, t, s);
  if (!ex.valid)
    throw parameter_error("(t, s) = (" + std::to_string(t) + ", " + std::to_string(s) + ") violates the exponent conditions");
  for (vertex_id x = 0; x < g.vertex_count(); ++x) {
    const double v = phi.value(x);
    if (!(v >= 0.0 && v <= 1.0)) throw domain_error("cutoff must lie in [0,1]");
    if (!u.is_log() && !(u.raw()[x] > 0.0)) throw domain_error("u must be positive");
  }
  std::vector<char> in(g.vertex_count(), omega ? 0 : 1);
  if (omega)
    for (vertex_id x : *omega) {
      if (x >= g.vertex_count()) throw domain_error("omega vertex " + std::to_string(x) + " is out of range");
      in[x] = 1;
    }
  caccioppoli_result r{};
  r.p0 = p0 ? *p0 : p0_constant(g);
  r.p1 = harnack_p1(pr.m, r.p0);
  auto h = harnack_check(g, u, pr.m, r.p0);
  if (!h.ok)
    throw precondition_error("u violates the Harnack ratio bound p1 = " + std::to_string(r.p1) + " on edge (" +
                             std::to_string(h.violations.front().x) + "," + std::to_string(h.violations.front().y) + ")");
  std::string bad;
  for (vertex_id x = 0; x < g.vertex_count(); ++x) {
    if (!in[x]) continue;
    for (const auto& nb : g.neighbors(x)) {
      if (in[nb.target]) continue;
      if (phi.value(nb.target) != 0.0)
        bad += " support(" + std::to_string(x) + "," + std::to_string(nb.target) + ")";
      if (detail::log_ratio(u, x, nb.target) < 0.0)
        bad += " (" + std::to_string(x) + "," + std::to_string(nb.target) + ")";
    }
  }
  if (!bad.empty())
    throw precondition_error("boundary condition of omega fails (u must not decrease outward, phi must vanish outside):" + bad);
  r.constant = caccioppoli_constant_for(pr, t, s, r.p1);
  log_sum lhs, sum;
  for (vertex_id x = 0; x < g.vertex_count(); ++x) {
    if (!in[x]) continue;
    const double lm = g.log_multiplicity(x);
    const double fx = phi.value(x);
    if (fx > 0.0) {
      const double lg = log_gradient_norm(g, u, x);
      if (lg == -inf && pr.q < 0.0) {
        lhs.add(inf);
      } else if (lg != -inf || pr.q == 0.0) {
        const double lq = pr.q == 0.0 ? 0.0 : pr.q * lg;
        lhs.add(lm + log_vertex_measure(g, x) + (pr.p - t) * u.log_value(x) + lq + s * std::log(fx));
      }
    }
    for (const auto& nb : g.neighbors(x)) {
      if (!in[nb.target]) continue;
      const double d = std::fabs(phi.value(nb.target) - fx);
      if (d == 0.0) continue;
      sum.add(lm + std::log(nb.count) + nb.log_weight + r.constant.exponent * std::log(d));
    }
  }
  r.log_lhs = lhs.value();
  r.log_rhs = sum.empty() ? -inf : r.constant.log_value + sum.value();
  r.lhs = exp_or_zero(r.log_lhs);
  r.rhs = exp_or_zero(r.log_rhs);
  r.ok = r.log_lhs == -inf || r.log_lhs <= r.log_rhs;
  return r;
}

}  // namespace mlap

#endif  // MLAP_VERIFY_CACCIOPPOLI_HPP
