#ifndef MLAP_VERIFY_CUTOFF_HPP
#define MLAP_VERIFY_CUTOFF_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "../distance.hpp"
#include "../error.hpp"
#include "../graph.hpp"
#include "../vertex_function.hpp"

namespace mlap {

enum class cutoff_kind { h, phi };

/// h_n(d) = 1 for d <= n, 2 - d/n for n < d < 2n, 0 for d >= 2n.
inline double h_value(double n, std::int64_t d) {
  if (d <= n) return 1.0;
  if (d >= 2.0 * n) return 0.0;
  return 2.0 - static_cast<double>(d) / n;
}

/// phi_i(d) = (1/i) sum_{k=i-1}^{2i-2} h_{2^k}(d).
inline double phi_value(int i, std::int64_t d) {
  double s = 0.0;
  for (int k = i - 1; k <= 2 * i - 2; ++k) s += h_value(std::ldexp(1.0, k), d);
  return s / i;
}

struct cutoff_function {
  cutoff_kind kind;
  int index;  // n for h_n, i for phi_i
  vertex_function values;
};

template <graph_like G>
cutoff_function make_cutoff(const G& g, vertex_id o, cutoff_kind kind, int index) {
  if (index < 1) throw parameter_error("cutoff index must be >= 1");
  if (kind == cutoff_kind::phi && index > 30) throw parameter_error("phi_i needs i <= 30");
  auto d = hop_distances(g, o);
  std::vector<double> v(d.size());
  for (std::size_t x = 0; x < d.size(); ++x) {
    if (d[x] < 0) throw domain_error("vertex " + std::to_string(x) + " is unreachable from the center");
    v[x] = kind == cutoff_kind::h ? h_value(index, d[x]) : phi_value(index, d[x]);
  }
  return {kind, index, vertex_function::linear(std::move(v))};
}

struct cutoff_gradient_row {
  int k;                 // annulus B(o,2^k) \ B(o,2^(k-1))
  double max_gradient;   // max |phi(y) - phi(x)| over x in the annulus, y ~ x
  double bound;          // C / (i 2^k)
  bool ok;
};

struct cutoff_gradient_report {
  bool ok = true;
  double constant = 2.0;
  std::vector<cutoff_gradient_row> rows;
  double outside_max = 0.0;  // largest difference from vertices outside every annulus checked
};

/// Measures the finite differences of phi_i on each annulus i-1 <= k <= 2i and compares
/// them with C / (i 2^k).
template <graph_like G>
cutoff_gradient_report cutoff_gradient_check(const G& g, vertex_id o, const cutoff_function& phi, double C = 2.0) {
  if (phi.kind != cutoff_kind::phi) throw parameter_error("gradient bound applies to phi_i");
  phi.values.require_domain(g);
  const int i = phi.index;
  auto d = hop_distances(g, o);
  cutoff_gradient_report rep;
  rep.constant = C;
  std::vector<double> worst(static_cast<std::size_t>(2 * i + 1), 0.0);
  for (vertex_id x = 0; x < g.vertex_count(); ++x) {
    double local = 0.0;
    for (const auto& nb : g.neighbors(x))
      local = std::max(local, std::fabs(phi.values.value(nb.target) - phi.values.value(x)));
    int k = 0;
    while (k < 62 && (std::int64_t{1} << k) < d[x]) ++k;
    if (d[x] > 0 && k >= i - 1 && k <= 2 * i)
      worst[static_cast<std::size_t>(k)] = std::max(worst[static_cast<std::size_t>(k)], local);
    else
      rep.outside_max = std::max(rep.outside_max, local);
  }
  for (int k = i - 1; k <= 2 * i; ++k) {
    const double bound = C / (i * std::ldexp(1.0, k));
    const double w = worst[static_cast<std::size_t>(k)];
    const bool ok = w <= bound * (1.0 + 1e-12);
    rep.rows.push_back({k, w, bound, ok});
    rep.ok = rep.ok && ok;
  }
  rep.ok = rep.ok && rep.outside_max == 0.0;
  return rep;
}

}  // namespace mlap

#endif  // MLAP_VERIFY_CUTOFF_HPP
