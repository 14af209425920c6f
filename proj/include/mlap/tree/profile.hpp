#ifndef MLAP_TREE_PROFILE_HPP
#define MLAP_TREE_PROFILE_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "../error.hpp"
#include "../graph.hpp"
#include "../numeric.hpp"
#include "../operators.hpp"
#include "../params.hpp"
#include "../vertex_function.hpp"
#include "../verify/residual.hpp"

namespace mlap {

enum class tree_case { I, II, III, IV, V1, V2 };

inline std::string_view to_string(tree_case c) {
  switch (c) {
    case tree_case::I: return "I";
    case tree_case::II: return "II";
    case tree_case::III: return "III";
    case tree_case::IV: return "IV";
    case tree_case::V1: return "V1";
    case tree_case::V2: return "V2";
  }
  return "?";
}

inline tree_case parse_tree_case(std::string_view s) {
  for (tree_case c : {tree_case::I, tree_case::II, tree_case::III, tree_case::IV, tree_case::V1, tree_case::V2})
    if (s == to_string(c)) return c;
  throw parameter_error("unknown tree case '" + std::string(s) + "' (expected I, II, III, IV, V1, V2)");
}

/// Region each construction lives in.
inline g_region region_of(tree_case c) {
  switch (c) {
    case tree_case::I: return g_region::G1;
    case tree_case::II: return g_region::G2;
    case tree_case::III: return g_region::G3;
    case tree_case::IV: return g_region::G4;
    case tree_case::V1: return g_region::G5_1;
    case tree_case::V2: return g_region::G5_2;
  }
  return g_region::G6;
}

/// Free constants of a construction; unused ones stay empty.
struct tree_constants {
  std::optional<int> n0;
  std::optional<double> delta;
  std::optional<double> epsilon;
  std::optional<double> lambda;
  std::optional<double> a;
};

/// Checks the case/region pair and the constants each case needs.
inline void check_case(tree_case c, const param_triple& pr, int N, const tree_constants& k) {
  if (N < 3) throw parameter_error("tree degree N must be >= 3");
  if (classify_G(pr) != region_of(c))
    throw parameter_error("(m,p,q) lies in " + std::string(to_string(classify_G(pr))) + ", case " +
                          std::string(to_string(c)) + " needs " + std::string(to_string(region_of(c))));
  if (c == tree_case::V2 && !(pr.m < 3.0))
    throw unsupported_error("case V2 needs m < 3 (the interval for a is empty otherwise)");
  auto need = [&](bool have, const char* what) {
    if (!have) throw parameter_error(std::string("case ") + std::string(to_string(c)) + " needs " + what);
  };
  switch (c) {
    case tree_case::I:
    case tree_case::III:
      need(k.n0.has_value(), "n0");
      need(k.delta.has_value() && *k.delta > 0.0, "delta > 0");
      need(k.epsilon.has_value() && *k.epsilon > 0.0, "epsilon > 0");
      break;
    case tree_case::II:
      need(k.n0.has_value(), "n0");
      need(k.epsilon.has_value() && *k.epsilon > 0.0, "epsilon > 0");
      break;
    case tree_case::IV:
      need(k.n0.has_value(), "n0");
      need(k.delta.has_value() && *k.delta > 0.0, "delta > 0");
      need(k.lambda.has_value() && *k.lambda > 0.0, "lambda > 0");
      break;
    case tree_case::V1:
      need(k.lambda.has_value() && *k.lambda > 0.0, "lambda > 0");
      need(k.a.has_value() && *k.a > 0.0, "a > 0");
      break;
    case tree_case::V2:
      need(k.lambda.has_value() && *k.lambda > 1.0, "lambda > 1");
      need(k.a.has_value() && *k.a > 0.5 && *k.a < 1.0 / (pr.m - 1.0), "a in (1/2, 1/(m-1))");
      break;
  }
  if (k.n0 && (c != tree_case::V1 && c != tree_case::V2) && *k.n0 < 2) throw parameter_error("n0 must be >= 2");
}

/// Exponents of the power-log constructions (cases I and III).
struct power_log_exponents {
  double weight_power;  // exponent of k in the weight
  double weight_log;    // exponent of ln k in the weight, without epsilon
  double sigma;
  double beta;
  double kappa;         // p+q-m+1 (case I) or q-m+1 (case III)
};

inline power_log_exponents case_exponents(tree_case c, const param_triple& pr) {
  const double m = pr.m, p = pr.p, q = pr.q;
  if (c == tree_case::I) {
    const double k = pr.critical_gap();
    return {(m - 1.0) * (p + 1.0) / k, (m - 1.0) / k, (m - q) / k, 1.0 / k, k};
  }
  if (c == tree_case::III) {
    const double k = q - m + 1.0;
    return {(m - 1.0) / k, (m - 1.0) / k, (m - q) / k, 1.0 / k, k};
  }
  throw parameter_error("power-log exponents exist only for cases I and III");
}

/// Default a for the exponential cases.
inline double default_a(tree_case c, const param_triple& pr) {
  if (c == tree_case::V1) return std::min(0.25, 1.0 / pr.m);
  if (c == tree_case::V2) return (0.5 + 1.0 / (pr.m - 1.0)) / 2.0;
  throw parameter_error("a is defined only for cases V1 and V2");
}

/// ln mu_n and ln u_n straight from the case formulas.
struct case_formulas {
  tree_case c;
  param_triple pr;
  int N;
  tree_constants k;

  double log_mu(std::int64_t n) const {
    const double ln1 = std::log(static_cast<double>(N - 1));
    const double nd = static_cast<double>(n);
    switch (c) {
      case tree_case::I:
      case tree_case::III: {
        auto e = case_exponents(c, pr);
        const double kk = nd + *k.n0;
        return e.weight_power * std::log(kk) + (e.weight_log + *k.epsilon) * std::log(std::log(kk)) - nd * ln1;
      }
      case tree_case::II: {
        const double kk = nd + *k.n0;
        return (pr.m - 1.0) * std::log(kk) + (pr.m - 1.0 + *k.epsilon) * std::log(std::log(kk)) - nd * ln1;
      }
      case tree_case::IV:
        return std::log(*k.lambda) + *k.lambda * (nd + *k.n0) - nd * ln1;
      case tree_case::V1:
        return std::log(*k.lambda) + *k.lambda * nd - nd * ln1;
      case tree_case::V2:
        if (n >= 0) return std::log(*k.lambda) + *k.lambda * nd - nd * ln1;
        return std::log(*k.lambda) + *k.lambda * nd + (nd + 1.0) * ln1;
    }
    return 0.0;
  }

  double log_u(std::int64_t n) const {
    const double nd = static_cast<double>(n);
    switch (c) {
      case tree_case::I: {
        auto e = case_exponents(c, pr);
        const double kk = nd + *k.n0;
        return std::log(*k.delta) - e.sigma * std::log(kk) - e.beta * std::log(std::log(kk));
      }
      case tree_case::II: {
        const double kk = nd + *k.n0;
        return std::log1p(std::exp(-*k.epsilon / 2.0 * std::log(std::log(kk))));
      }
      case tree_case::III: {
        auto e = case_exponents(c, pr);
        const double kk = nd + *k.n0;
        return std::log1p(*k.delta * std::exp(-e.sigma * std::log(kk) - e.beta * std::log(std::log(kk))));
      }
      case tree_case::IV:
        return std::log(*k.delta) + std::log1p(1.0 / (nd + *k.n0));
      case tree_case::V1:
        return -*k.a * *k.lambda * nd;
      case tree_case::V2:
        return -*k.a * (*k.lambda - 1.0) * nd;
    }
    return 0.0;
  }
};

/// Radial weights and solution of one construction, both in log form, over [lo, hi].
/// mu_log[n - lo] is ln mu_n, the weight of the edges between levels n and n+1.
struct radial_profile {
  tree_case c;
  int N;
  param_triple pr;
  tree_constants k;
  std::int64_t lo;
  std::int64_t hi;
  std::vector<double> mu_log;
  std::vector<double> u_log;

  std::int64_t depth() const { return hi; }
  bool in_range(std::int64_t n) const { return n >= lo && n <= hi; }
  double log_mu(std::int64_t n) const { return mu_log.at(static_cast<std::size_t>(n - lo)); }
  double log_u(std::int64_t n) const { return u_log.at(static_cast<std::size_t>(n - lo)); }
  bool two_sided() const { return c == tree_case::V2; }
};

/// Fills a profile from explicit constants (no selection).
inline radial_profile profile_from_constants(tree_case c, const param_triple& pr, int N, const tree_constants& k,
                                             std::int64_t depth) {
  check_case(c, pr, N, k);
  if (depth < 2) throw parameter_error("depth must be >= 2");
  radial_profile prof{c, N, pr, k, c == tree_case::V2 ? -depth : 0, depth, {}, {}};
  case_formulas f{c, pr, N, k};
  for (std::int64_t n = prof.lo; n <= prof.hi; ++n) {
    prof.mu_log.push_back(f.log_mu(n));
    prof.u_log.push_back(f.log_u(n));
    if (!std::isfinite(prof.mu_log.back()) || !std::isfinite(prof.u_log.back()))
      throw domain_error("profile value at level " + std::to_string(n) + " is not finite");
  }
  return prof;
}

/// Quotient of the truncated tree by levels: one vertex per level, edges carry the
/// single-edge weight and the number of parallel edges per vertex, multiplicities
/// record the level sizes. Satisfies graph_like.
class radial_tree {
 public:
  explicit radial_tree(const radial_profile& prof) : lo_(prof.lo), hi_(prof.hi) {
    const std::size_t n = static_cast<std::size_t>(hi_ - lo_ + 1);
    const double ln1 = std::log(static_cast<double>(prof.N - 1));
    offsets_.assign(n + 1, 0);
    log_mult_.assign(n, 0.0);
    auto lin = [](double l) { return std::exp(l); };
    for (std::int64_t lvl = lo_; lvl <= hi_; ++lvl) {
      const vertex_id x = index(lvl);
      std::vector<neighbor> nb;
      if (lvl > 0) {
        if (lvl > lo_) nb.push_back({index(lvl - 1), lin(prof.log_mu(lvl - 1)), prof.log_mu(lvl - 1), 1.0});
        if (lvl < hi_) nb.push_back({index(lvl + 1), lin(prof.log_mu(lvl)), prof.log_mu(lvl), double(prof.N - 1)});
        log_mult_[x] = std::log(static_cast<double>(prof.N)) * (prof.two_sided() ? 0.0 : 1.0) +
                       (static_cast<double>(lvl) - (prof.two_sided() ? 0.0 : 1.0)) * ln1;
      } else if (lvl == 0) {
        if (prof.two_sided()) {
          if (lo_ < 0) nb.push_back({index(-1), lin(prof.log_mu(-1)), prof.log_mu(-1), 1.0});
          if (hi_ > 0) nb.push_back({index(1), lin(prof.log_mu(0)), prof.log_mu(0), double(prof.N - 1)});
        } else if (hi_ > 0) {
          nb.push_back({index(1), lin(prof.log_mu(0)), prof.log_mu(0), double(prof.N)});
        }
      } else {
        if (lvl > lo_) nb.push_back({index(lvl - 1), lin(prof.log_mu(lvl - 1)), prof.log_mu(lvl - 1), double(prof.N - 1)});
        nb.push_back({index(lvl + 1), lin(prof.log_mu(lvl)), prof.log_mu(lvl), 1.0});
        log_mult_[x] = (static_cast<double>(-lvl) - 1.0) * ln1;
      }
      std::sort(nb.begin(), nb.end(), [](const neighbor& a, const neighbor& b) { return a.target < b.target; });
      offsets_[x + 1] = offsets_[x] + nb.size();
      adjacency_.insert(adjacency_.end(), nb.begin(), nb.end());
    }
  }

  std::size_t vertex_count() const noexcept { return offsets_.size() - 1; }
  vertex_id root() const noexcept { return index(0); }
  double log_multiplicity(vertex_id x) const { return log_mult_.at(x); }
  std::span<const neighbor> neighbors(vertex_id x) const {
    if (x >= vertex_count()) throw domain_error("level index " + std::to_string(x) + " is out of range");
    return {adjacency_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
  }

  std::int64_t lo() const noexcept { return lo_; }
  std::int64_t hi() const noexcept { return hi_; }
  vertex_id index(std::int64_t level) const { return static_cast<vertex_id>(level - lo_); }
  std::int64_t level(vertex_id x) const { return static_cast<std::int64_t>(x) + lo_; }
  bool is_boundary(vertex_id x) const {
    const auto l = level(x);
    return l == hi_ || (lo_ < 0 && l == lo_);
  }

  /// Every level whose full neighborhood is present.
  std::vector<vertex_id> interior() const {
    std::vector<vertex_id> out;
    for (vertex_id x = 0; x < vertex_count(); ++x)
      if (!is_boundary(x)) out.push_back(x);
    return out;
  }

 private:
  std::int64_t lo_;
  std::int64_t hi_;
  std::vector<std::size_t> offsets_;
  std::vector<double> log_mult_;
  std::vector<neighbor> adjacency_;
};

/// Level quotient of the unit-weight tree T_N truncated at `depth` (u is zero in log form).
inline radial_tree uniform_radial_tree(int N, std::int64_t depth) {
  if (N < 3) throw parameter_error("tree degree must be >= 3");
  if (depth < 1) throw parameter_error("depth must be >= 1");
  radial_profile prof{tree_case::I, N, param_triple(2.0, 1.0, 1.0), {}, 0, depth, {}, {}};
  prof.mu_log.assign(static_cast<std::size_t>(depth + 1), 0.0);
  prof.u_log.assign(static_cast<std::size_t>(depth + 1), 0.0);
  return radial_tree(prof);
}

/// u as a function on the quotient's vertices.
inline vertex_function radial_solution(const radial_profile& prof) { return vertex_function::from_log(prof.u_log); }

/// Residual of the inequality at level n (needs n+1, and n-1 on the negative branch, in range).
inline residual_value radial_residual(const radial_profile& prof, const radial_tree& t, std::int64_t n) {
  if (!prof.in_range(n) || t.is_boundary(t.index(n)))
    throw domain_error("level " + std::to_string(n) + " is not an interior level of the profile");
  return residual(t, radial_solution(prof), prof.pr, t.index(n));
}

inline residual_value radial_residual(const radial_profile& prof, std::int64_t n) {
  return radial_residual(prof, radial_tree(prof), n);
}

/// Residual sweep over all interior levels; report labels are levels.
inline residual_report verify_profile(const radial_profile& prof, tolerance tol = {}) {
  radial_tree t(prof);
  return verify_supersolution(t, radial_solution(prof), prof.pr, t.interior(), tol,
                              [&](vertex_id x) { return t.level(x); });
}

}  // namespace mlap

#endif  // MLAP_TREE_PROFILE_HPP
