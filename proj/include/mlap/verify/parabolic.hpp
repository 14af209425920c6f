#ifndef MLAP_VERIFY_PARABOLIC_HPP
#define MLAP_VERIFY_PARABOLIC_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "../distance.hpp"
#include "../error.hpp"
#include "../graph.hpp"
#include "../numeric.hpp"

namespace mlap {

struct parabolic_row {
  std::int64_t r0;
  std::int64_t r1;
  double log_dW;   // ln(W(r1) - W(r0))
  double term;     // ((r1 - r0)^m / (W(r1) - W(r0)))^(1/(m-1))
  double partial;  // running sum
};

struct parabolic_report {
  std::vector<parabolic_row> rows;
  std::vector<std::string> warnings;
};

/// Partial sums of sum_i ((r_(i+1) - r_i)^m / (W(r_(i+1)) - W(r_i)))^(1/(m-1)).
template <graph_like G>
parabolic_report parabolicity_series(const G& g, vertex_id o, const std::vector<std::int64_t>& radii, double m) {
  if (!(m > 1.0)) throw parameter_error("m must exceed 1");
  if (radii.size() < 2) throw parameter_error("at least two radii are needed");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 0) throw parameter_error("radii must be nonnegative");
    if (i && radii[i] <= radii[i - 1]) throw parameter_error("radii must be strictly increasing");
  }
  auto vol = volume_profile(g, o, radii.back());
  parabolic_report rep;
  double partial = 0.0;
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    const auto& a = vol[static_cast<std::size_t>(radii[i])];
    const auto& b = vol[static_cast<std::size_t>(radii[i + 1])];
    double ld;
    if (std::isfinite(b.W) && b.W - a.W > 0.0)
      ld = std::log(b.W - a.W);
    else if (b.log_W > a.log_W)
      ld = b.log_W + std::log1p(-std::exp(a.log_W - b.log_W));
    else
      ld = -inf;
    if (ld == -inf) {
      rep.warnings.push_back("W does not grow between radii " + std::to_string(radii[i]) + " and " +
                             std::to_string(radii[i + 1]) + "; term skipped");
      continue;
    }
    const double dr = static_cast<double>(radii[i + 1] - radii[i]);
    const double term = std::exp((m * std::log(dr) - ld) / (m - 1.0));
    partial += term;
    rep.rows.push_back({radii[i], radii[i + 1], ld, term, partial});
  }
  return rep;
}

}  // namespace mlap

#endif  // MLAP_VERIFY_PARABOLIC_HPP
