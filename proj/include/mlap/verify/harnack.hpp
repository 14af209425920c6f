#ifndef MLAP_VERIFY_HARNACK_HPP
#define MLAP_VERIFY_HARNACK_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "../error.hpp"
#include "../graph.hpp"
#include "../numeric.hpp"
#include "../operators.hpp"
#include "../vertex_function.hpp"

namespace mlap {

/// p1 = 1 + p0^(1/(m-1)).
inline double harnack_p1(double m, double p0) {
  if (!(m > 1.0)) throw parameter_error("m must exceed 1");
  if (!(p0 >= 1.0)) throw parameter_error("p0 must be >= 1");
  return 1.0 + std::pow(p0, 1.0 / (m - 1.0));
}

struct harnack_violation {
  vertex_id x;
  vertex_id y;
  double ratio;  // u(y) / u(x), > p1
};

struct harnack_report {
  bool ok = true;
  double p1 = 0.0;
  std::pair<vertex_id, vertex_id> worst_pair{0, 0};
  double worst_ratio = 1.0;  // max over ordered adjacent pairs of u(y) / u(x)
  std::vector<harnack_violation> violations;
};

namespace detail {

/// ln(u(y) / u(x)); +inf when only u(x) vanishes, 0 when both do.
inline double log_ratio(const vertex_function& u, vertex_id x, vertex_id y) {
  if (u.is_log()) return u.raw()[y] - u.raw()[x];
  const double ux = u.raw()[x], uy = u.raw()[y];
  if (ux > 0.0 && uy > 0.0) return std::log(uy) - std::log(ux);
  if (ux == 0.0 && uy == 0.0) return 0.0;
  return ux > 0.0 ? -inf : inf;
}

}  // namespace detail

/// Checks 1/p1 <= u(y)/u(x) <= p1 on every edge, with a relative slack of 1e-12.
template <graph_like G>
harnack_report harnack_check(const G& g, const vertex_function& u, double m, double p0) {
  u.require_domain(g);
  harnack_report rep;
  rep.p1 = harnack_p1(m, p0);
  const double limit = std::log(rep.p1) + 1e-12;
  double worst = 0.0;
  for (vertex_id x = 0; x < g.vertex_count(); ++x)
    for (const auto& nb : g.neighbors(x)) {
      const double lr = detail::log_ratio(u, x, nb.target);
      if (lr > worst) {
        worst = lr;
        rep.worst_pair = {x, nb.target};
      }
      if (lr > limit) rep.violations.push_back({x, nb.target, std::exp(lr)});
    }
  rep.worst_ratio = std::exp(worst);
  rep.ok = rep.violations.empty();
  return rep;
}

struct dichotomy_result {
  std::size_t zero_count = 0;
  bool satisfies_on_zero_set = false;  // Delta_m u <= 0 at every zero of u
  bool identically_zero = false;
  bool holds = true;                   // a zero plus the inequality forces u == 0
};

/// For a nonnegative candidate u: if u vanishes somewhere and Delta_m u <= 0 on its zero set
/// (the source term being nonnegative there), u must vanish identically.
template <graph_like G>
dichotomy_result harnack_dichotomy(const G& g, const vertex_function& u, double m) {
  u.require_domain(g);
  dichotomy_result r;
  if (u.is_log()) return r;
  for (double v : u.raw())
    if (v < 0.0) throw domain_error("dichotomy candidates must be nonnegative");
  r.satisfies_on_zero_set = true;
  r.identically_zero = true;
  for (vertex_id x = 0; x < g.vertex_count(); ++x) {
    if (u.raw()[x] != 0.0) {
      r.identically_zero = false;
      continue;
    }
    ++r.zero_count;
    if (m_laplacian(g, u, m, x) > 0.0) r.satisfies_on_zero_set = false;
  }
  if (r.zero_count == 0) r.satisfies_on_zero_set = false;
  r.holds = !(r.zero_count > 0 && r.satisfies_on_zero_set && !r.identically_zero);
  return r;
}

}  // namespace mlap

#endif  // MLAP_VERIFY_HARNACK_HPP
