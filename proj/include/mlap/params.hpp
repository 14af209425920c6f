#ifndef MLAP_PARAMS_HPP
#define MLAP_PARAMS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "error.hpp"
#include "numeric.hpp"

namespace mlap {

/// Exponent triple (m, p, q) of the inequality; m > 1.
struct param_triple {
  double m;
  double p;
  double q;

  param_triple(double m_, double p_, double q_) : m(m_), p(p_), q(q_) {
    if (!std::isfinite(m) || !std::isfinite(p) || !std::isfinite(q))
      throw parameter_error("m, p, q must be finite");
    if (!(m > 1.0)) throw parameter_error("m must exceed 1 (got " + std::to_string(m) + ")");
  }

  /// p + q - (m - 1); zero on the critical line.
  double critical_gap() const { return (p + q) - (m - 1.0); }
};

enum class g_region { G1, G2, G3, G4, G5_1, G5_2, G6 };
enum class k_region { K1, K2, K3, K4, on_critical_line };

inline std::string_view to_string(g_region r) {
  switch (r) {
    case g_region::G1: return "G1";
    case g_region::G2: return "G2";
    case g_region::G3: return "G3";
    case g_region::G4: return "G4";
    case g_region::G5_1: return "G5_1";
    case g_region::G5_2: return "G5_2";
    case g_region::G6: return "G6";
  }
  return "?";
}

inline std::string_view to_string(k_region r) {
  switch (r) {
    case k_region::K1: return "K1";
    case k_region::K2: return "K2";
    case k_region::K3: return "K3";
    case k_region::K4: return "K4";
    case k_region::on_critical_line: return "on_critical_line";
  }
  return "?";
}

inline constexpr std::array<g_region, 7> all_g_regions{g_region::G1, g_region::G2,   g_region::G3,
                                                       g_region::G4, g_region::G5_1, g_region::G5_2,
                                                       g_region::G6};

/// Membership predicate for one G-region, written directly from the set definitions.
inline bool in_region(const param_triple& x, g_region r) {
  const double c = x.m - 1.0;
  const double gap = x.critical_gap();
  switch (r) {
    case g_region::G1: return x.p >= 0.0 && gap > 0.0 && x.q < x.m;
    case g_region::G2: return x.q >= x.m;
    case g_region::G3: return x.p < 0.0 && x.q > c && x.q < x.m;
    case g_region::G4: return x.p < 0.0 && x.q == c;
    case g_region::G5_1: return gap == 0.0 && x.p >= 0.0 && x.q > 0.0;
    case g_region::G5_2: return gap == 0.0 && x.q < 0.0;
    case g_region::G6: return (gap < 0.0 && x.q < c) || (x.p == c && x.q == 0.0);
  }
  return false;
}

inline g_region classify_G(const param_triple& x) {
  std::optional<g_region> found;
  for (g_region r : all_g_regions) {
    if (!in_region(x, r)) continue;
    if (found)
      throw error("regions " + std::string(to_string(*found)) + " and " + std::string(to_string(r)) +
                  " overlap at the given (m,p,q)");
    found = r;
  }
  if (!found) throw error("no region contains the given (m,p,q)");
  return *found;
}

/// Open interval (lo, hi); hi may be +inf.
struct t_interval {
  double lo;
  double hi;
  bool contains(double t) const { return t > lo && t < hi; }
};

struct k_classification {
  k_region region;
  std::optional<t_interval> interval;
};

inline k_classification classify_K(const param_triple& x) {
  const double c = x.m - 1.0;
  const double gap = x.critical_gap();
  if (gap == 0.0) return {k_region::on_critical_line, std::nullopt};
  if (gap < 0.0 && x.q <= c) return {k_region::K1, t_interval{c, inf}};
  if (gap > 0.0 && x.q <= c) return {k_region::K2, t_interval{0.0, c}};
  const double edge = x.p * (1.0 - x.m) / (x.q - c);
  if (gap > 0.0) return {k_region::K3, t_interval{std::max(edge, 0.0), c}};
  return {k_region::K4, t_interval{c, edge}};
}

/// Exponents of the Caccioppoli-type estimate for a choice of (t, s).
struct exponent_set {
  double t;
  double s;
  double a;
  double b;
  double gamma;
  double rho;
  double a_rho;  // a * rho, the exponent on |grad phi|
  bool valid;
};

inline exponent_set exponents(const param_triple& x, double t, double s) {
  const double m = x.m, p = x.p, q = x.q;
  const double kappa = x.critical_gap();
  const double den_a = p + q - t;
  const double den_g = m - 1.0 - t;
  const double den_b = (m - 1.0) * p + t * (q - m + 1.0);
  if (kappa == 0.0) throw singular_error("p + q = m - 1: the estimate is undefined on the critical line");
  if (den_a == 0.0) throw singular_error("p + q = t makes a and rho singular");
  if (den_g == 0.0) throw singular_error("t = m - 1 makes gamma singular");
  if (den_b == 0.0) throw singular_error("(m-1)p + t(q-m+1) = 0 makes b singular");
  const double num = m * p + q + t * (q - m);
  exponent_set e{t, s, num / den_a, num / den_b, den_a / den_g, den_a / kappa, num / kappa, false};
  e.valid = t > 0.0 && e.a >= 1.0 && e.b > 1.0 && e.gamma > 1.0 && e.rho > 1.0 && s > e.a_rho;
  return e;
}

/// t (and for G4 also s) used in the non-existence argument for the region of x.
struct t_choice {
  double t;
  std::optional<double> s;
  std::string rule;
};

inline t_choice proof_t_schedule(const param_triple& x, int i, std::optional<double> l = std::nullopt) {
  if (i < 1) throw parameter_error("schedule index i must be >= 1");
  const double inv = 1.0 / i;
  const double m = x.m, p = x.p, q = x.q;
  const double gap = x.critical_gap();
  switch (classify_G(x)) {
    case g_region::G1: return {inv, std::nullopt, "I"};
    case g_region::G2:
      if (gap > 0.0) return {m - 1.0 - inv, std::nullopt, "II-1"};
      if (gap < 0.0) return {m - 1.0 + inv, std::nullopt, "II-3"};
      throw unsupported_error("case II-2 (p+q = m-1, q >= m) is argued by perturbation, no t-schedule");
    case g_region::G3: {
      const double edge = p * (1.0 - m) / (q - m + 1.0);
      if (gap > 0.0) return {edge + inv, std::nullopt, "III-1"};
      if (gap < 0.0) return {edge - inv, std::nullopt, "III-3"};
      throw unsupported_error("case III-2 (p+q = m-1 in G3) is argued by perturbation, no t-schedule");
    }
    case g_region::G4: {
      if (!l || !(*l > 1.0)) throw parameter_error("region G4 needs l > 1");
      return {*l * (m - 1.0) + inv, -*l * (m - 1.0) / p + m + inv, "IV"};
    }
    case g_region::G5_1:
    case g_region::G5_2:
      throw unsupported_error("critical-line regions use cutoffs h_n on sublevel sets, no t-schedule");
    case g_region::G6:
      throw unsupported_error("region G6 needs no volume condition, no t-schedule");
  }
  throw unsupported_error("unhandled region");
}

/// kappa_0 = 1 / (2 (2 p0)^((m-1)/2) e).
inline double kappa0(double m, double p0) {
  if (!(p0 >= 1.0)) throw parameter_error("p0 must be >= 1");
  return 1.0 / (2.0 * std::pow(2.0 * p0, (m - 1.0) / 2.0) * std::exp(1.0));
}

struct threshold_options {
  std::optional<double> alpha;  // G4
  std::optional<double> kappa;  // G5
  std::optional<double> p0;     // G5, bounds kappa by kappa0
};

/// Volume-growth threshold; nullopt means the region needs no volume condition.
struct threshold_value {
  std::optional<double> log_value;
  std::string formula;

  double value() const {
    if (!log_value) throw unsupported_error("no volume condition for this region");
    return std::exp(*log_value);
  }
};

inline bool needs_no_volume_condition(const param_triple& x) {
  g_region r = classify_G(x);
  return r == g_region::G6 || (r == g_region::G5_2 && x.m >= 3.0);
}

/// Threshold formula without evaluating it.
inline std::string threshold_formula(const param_triple& x) {
  switch (classify_G(x)) {
    case g_region::G1: return "n^((mp+q)/(p+q-m+1)) * (ln n)^((m-1)/(p+q-m+1))";
    case g_region::G2: return "n^m * (ln n)^(m-1)";
    case g_region::G3: return "n^(q/(q-m+1)) * (ln n)^((m-1)/(q-m+1))";
    case g_region::G4: return "n^alpha";
    case g_region::G5_1: return "exp(kappa*n), 0 < kappa < kappa0";
    case g_region::G5_2:
      return x.m >= 3.0 ? "none (no volume condition)" : "exp(kappa*n), 0 < kappa < kappa0";
    case g_region::G6: return "none (no volume condition)";
  }
  return "";
}

/// ln of the threshold at n (n >= 2).
inline threshold_value threshold_W(const param_triple& x, double n, const threshold_options& opt = {}) {
  if (!(n >= 2.0)) throw parameter_error("threshold needs n >= 2");
  const double m = x.m, p = x.p, q = x.q;
  const double ln = std::log(n), lln = std::log(std::log(n));
  threshold_value out{std::nullopt, threshold_formula(x)};
  if (needs_no_volume_condition(x)) return out;
  switch (classify_G(x)) {
    case g_region::G1: {
      const double k = x.critical_gap();
      out.log_value = (m * p + q) / k * ln + (m - 1.0) / k * lln;
      break;
    }
    case g_region::G2: out.log_value = m * ln + (m - 1.0) * lln; break;
    case g_region::G3: {
      const double k = q - m + 1.0;
      out.log_value = q / k * ln + (m - 1.0) / k * lln;
      break;
    }
    case g_region::G4:
      if (!opt.alpha || !(*opt.alpha > 0.0)) throw parameter_error("region G4 needs alpha > 0");
      out.log_value = *opt.alpha * ln;
      break;
    default: {
      if (!opt.kappa || !(*opt.kappa > 0.0)) throw parameter_error("critical-line regions need kappa > 0");
      if (opt.p0 && !(*opt.kappa < kappa0(m, *opt.p0)))
        throw parameter_error("kappa must lie below kappa0 = " + std::to_string(kappa0(m, *opt.p0)));
      out.log_value = *opt.kappa * n;
    }
  }
  return out;
}

}  // namespace mlap

#endif  // MLAP_PARAMS_HPP
