#ifndef MLAP_TREE_CONSTRUCT_HPP
#define MLAP_TREE_CONSTRUCT_HPP

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../distance.hpp"
#include "../error.hpp"
#include "../graph.hpp"
#include "../params.hpp"
#include "../vertex_function.hpp"
#include "lambda.hpp"
#include "profile.hpp"

namespace mlap {

/// What the caller fixes; everything left empty is selected.
struct tree_request {
  tree_case c;
  param_triple pr;
  int N = 3;
  std::int64_t depth = 100;
  std::optional<double> epsilon;  // cases I, II, III
  std::optional<double> lambda;   // case IV (required), V (selected when empty)
  std::optional<double> a;        // V1, V2
  std::optional<int> n0;          // I to IV
  std::optional<double> delta;    // I, III, IV
};

struct selection_options {
  int window_factor = 100;   // n0 window is [n0+1, K n0]
  int n0_max = 5000;
  double lambda_step = 0.5;
  double lambda_max = 200.0;
  unsigned precision_bits = 0;  // 0: per-n default
  tolerance tol{};
};

struct selection_result {
  tree_constants k;
  double limit = std::numeric_limits<double>::quiet_NaN();  // Lambda limit L (I to IV)
  std::vector<std::string> trace;
};

namespace detail {

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

inline int lambda_index(tree_case c) {
  switch (c) {
    case tree_case::I: return 1;
    case tree_case::II: return 2;
    case tree_case::III: return 3;
    case tree_case::IV: return 4;
    default: return 0;
  }
}

/// Memoized high-precision Lambda values.
class lambda_table {
 public:
  lambda_table(int index, const param_triple& pr, double x, unsigned bits)
      : index_(index), pr_(pr), x_(x), bits_(bits) {}

  double operator()(std::int64_t n) {
    auto it = memo_.find(n);
    if (it != memo_.end()) return it->second;
    double v = lambda_eval(index_, pr_, x_, static_cast<double>(n), bits_);
    memo_.emplace(n, v);
    return v;
  }

 private:
  int index_;
  param_triple pr_;
  double x_;
  unsigned bits_;
  std::map<std::int64_t, double> memo_;
};

/// Level of the first failed residual, if any.
inline std::optional<std::int64_t> first_failure(const residual_report& rep) {
  if (rep.ok()) return std::nullopt;
  return rep.violations.front().vertex;
}

/// ln of the case-I / case-III shape f(k) = k^-sigma (ln k)^-beta.
inline double log_shape(const power_log_exponents& e, double k) {
  return -e.sigma * std::log(k) - e.beta * std::log(std::log(k));
}

/// delta from the root condition and the Lambda bound, per case.
inline double choose_delta(tree_case c, const param_triple& pr, int n0, double limit) {
  const double m = pr.m, p = pr.p, q = pr.q;
  if (c == tree_case::I || c == tree_case::III) {
    auto e = case_exponents(c, pr);
    const double lf0 = log_shape(e, n0);
    const double f0 = std::exp(lf0);
    const double df = f0 - std::exp(log_shape(e, n0 + 1.0));
    double l0;
    if (c == tree_case::I)
      l0 = (q / 2.0 * std::log(2.0) - p * lf0 + (m - 1.0 - q) * std::log(df)) / e.kappa;
    else
      l0 = q / (2.0 * e.kappa) * std::log(2.0) - p / e.kappa * std::log1p(f0) - std::log(df);
    const double l1 = std::log(limit / 2.0) / e.kappa;
    return std::exp(std::min(l0, l1));
  }
  if (c == tree_case::IV) {
    const double d0 = 1.0 / (1.0 / n0 + 1.0) * std::pow(2.0, (m - 1.0) / (2.0 * p));
    const double d1 = std::pow(limit / 2.0, 1.0 / p);
    return std::max(d0, d1);
  }
  throw parameter_error("delta is not a constant of this case");
}

}  // namespace detail

/// Chooses n0 and delta (cases I to IV) or lambda (cases V1, V2) so that every residual
/// over the requested depth is nonpositive.
inline selection_result select_constants(const tree_request& req, const selection_options& opt = {}) {
  selection_result out;
  const tree_case c = req.c;
  if (req.depth < 2) throw parameter_error("depth must be >= 2");
  if (opt.window_factor < 2) throw parameter_error("window factor must be >= 2");
  tree_constants probe;
  probe.n0 = 2;
  probe.delta = 1.0;
  probe.epsilon = req.epsilon;
  probe.lambda = req.lambda ? req.lambda : std::optional<double>(2.0);
  probe.a = (c == tree_case::V1 || c == tree_case::V2) ? std::optional<double>(req.a ? *req.a : default_a(c, req.pr))
                                                       : std::nullopt;
  check_case(c, req.pr, req.N, probe);

  auto verify = [&](const tree_constants& k) {
    return verify_profile(profile_from_constants(c, req.pr, req.N, k, req.depth), opt.tol);
  };

  if (c == tree_case::V1 || c == tree_case::V2) {
    const double a = *probe.a;
    double lam = req.lambda ? *req.lambda : (c == tree_case::V1 ? opt.lambda_step : 1.0 + opt.lambda_step);
    for (; lam <= opt.lambda_max; lam += opt.lambda_step) {
      bool closed_form = c == tree_case::V1
                             ? v1_root_rhs(req.pr, lam, a) >= 1.0 && v1_interior_rhs(req.pr, lam, a) >= 1.0
                             : v2_rhs(req.pr, lam, a) > 1.0;
      if (!closed_form) {
        out.trace.push_back("lambda=" + detail::fmt(lam) + ": case inequality fails");
      } else {
        tree_constants k{std::nullopt, std::nullopt, std::nullopt, lam, a};
        auto rep = verify(k);
        if (rep.ok()) {
          out.k = k;
          out.trace.push_back("lambda=" + detail::fmt(lam) + ": all " + std::to_string(rep.checked_vertices) +
                              " interior levels pass");
          return out;
        }
        out.trace.push_back("lambda=" + detail::fmt(lam) + ": residual positive at level " +
                            std::to_string(*detail::first_failure(rep)));
      }
      if (req.lambda) break;
    }
    throw constants_not_found("no lambda up to " + detail::fmt(opt.lambda_max) + " satisfies case " +
                                  std::string(to_string(c)),
                              out.trace);
  }

  const int idx = detail::lambda_index(c);
  const double x = c == tree_case::IV ? *req.lambda : *req.epsilon;
  out.limit = lambda_limit(idx, req.pr, x);
  const double threshold = c == tree_case::II ? 1.0 : out.limit / 2.0;
  detail::lambda_table lam(idx, req.pr, x, opt.precision_bits);
  const std::int64_t K = opt.window_factor;

  // case II has no delta; its root condition depends on n0 alone
  auto root_ok = [&](int n0) {
    if (c != tree_case::II) return true;
    tree_constants k{n0, std::nullopt, req.epsilon, std::nullopt, std::nullopt};
    auto prof = profile_from_constants(c, req.pr, req.N, k, 2);
    return radial_residual(prof, 0).passes(opt.tol);
  };

  auto window_start = [&](int start) -> int {
    int n0 = start;
    while (n0 <= opt.n0_max) {
      if (!root_ok(n0)) {
        out.trace.push_back("n0=" + std::to_string(n0) + ": root inequality fails");
        ++n0;
        continue;
      }
      std::optional<std::int64_t> bad;
      const std::int64_t first = std::max<std::int64_t>(n0 + 1, 3);
      for (std::int64_t n = first; n <= K * n0; ++n)
        if (!(lam(n) >= threshold)) {
          bad = n;
          break;
        }
      if (!bad) return n0;
      out.trace.push_back("n0=" + std::to_string(n0) + ": Lambda(" + std::to_string(*bad) + ") = " +
                          detail::fmt(lam(*bad)) + " < " + detail::fmt(threshold));
      n0 = static_cast<int>(std::max<std::int64_t>(*bad, n0 + 1));
    }
    throw constants_not_found("no n0 <= " + std::to_string(opt.n0_max) + " satisfies the Lambda window for case " +
                                  std::string(to_string(c)),
                              out.trace);
  };

  int start = req.n0 ? *req.n0 : 2;
  while (true) {
    const int n0 = req.n0 ? *req.n0 : window_start(start);
    tree_constants k{n0, std::nullopt, req.epsilon, req.lambda, std::nullopt};
    if (c != tree_case::II) k.delta = req.delta ? *req.delta : detail::choose_delta(c, req.pr, n0, out.limit);
    auto rep = verify(k);
    std::string desc = "n0=" + std::to_string(n0) + (k.delta ? ", delta=" + detail::fmt(*k.delta) : std::string());
    if (rep.ok()) {
      out.k = k;
      out.trace.push_back(desc + ": all " + std::to_string(rep.checked_vertices) + " interior levels pass");
      return out;
    }
    out.trace.push_back(desc + ": residual positive at level " + std::to_string(*detail::first_failure(rep)));
    if (req.n0 || n0 >= opt.n0_max)
      throw constants_not_found("constants for case " + std::string(to_string(c)) + " fail verification", out.trace);
    start = n0 + 1;
  }
}

/// Profile with constants selected (or taken from the request when given).
inline radial_profile make_profile(const tree_request& req, const selection_options& opt = {}) {
  auto sel = select_constants(req, opt);
  return profile_from_constants(req.c, req.pr, req.N, sel.k, req.depth);
}

/// Explicit tree materialized from a profile.
struct tree_graph {
  weighted_graph graph;
  std::vector<std::int64_t> level;  // signed level per vertex
  std::optional<vertex_id> distinguished;
  vertex_function u;
  std::vector<vertex_id> interior;
};

/// Builds the truncated tree with breadth-first numbering. For the two-sided case vertex 1
/// is the distinguished neighbor of the root and heads the negative branch.
inline tree_graph build_tree_graph(const radial_profile& prof, std::int64_t depth,
                                   std::size_t max_vertices = 1'000'000) {
  if (depth < 1) throw parameter_error("depth must be >= 1");
  if (depth > prof.hi || (prof.two_sided() && -depth < prof.lo))
    throw parameter_error("depth " + std::to_string(depth) + " exceeds the profile range");
  const std::size_t N = static_cast<std::size_t>(prof.N);
  // vertex count before allocating anything
  double predicted = 1.0, layer = prof.two_sided() ? double(N - 1) : double(N);
  for (std::int64_t n = 1; n <= depth; ++n) {
    predicted += layer;
    layer *= double(N - 1);
  }
  if (prof.two_sided()) {
    double neg = 1.0;
    for (std::int64_t n = 1; n <= depth; ++n) {
      predicted += neg;
      neg *= double(N - 1);
    }
  }
  if (predicted > double(max_vertices))
    throw size_guard_error("tree with " + detail::fmt(predicted) + " vertices exceeds the guard of " +
                           std::to_string(max_vertices));

  std::vector<edge> edges;
  std::vector<std::int64_t> level{0};
  std::deque<vertex_id> todo{0};
  auto add = [&](vertex_id parent, std::int64_t lvl, double lw) {
    const vertex_id v = level.size();
    level.push_back(lvl);
    edges.push_back(edge::from_log(parent, v, lw));
    todo.push_back(v);
  };
  std::optional<vertex_id> special;
  while (!todo.empty()) {
    const vertex_id x = todo.front();
    todo.pop_front();
    const std::int64_t l = level[x];
    if (x == 0) {
      if (prof.two_sided()) {
        special = 1;
        add(0, -1, prof.log_mu(-1));
        for (std::size_t c = 0; c + 1 < N; ++c) add(0, 1, prof.log_mu(0));
      } else {
        for (std::size_t c = 0; c < N; ++c) add(0, 1, prof.log_mu(0));
      }
    } else if (l > 0 && l < depth) {
      for (std::size_t c = 0; c + 1 < N; ++c) add(x, l + 1, prof.log_mu(l));
    } else if (l < 0 && -l < depth) {
      for (std::size_t c = 0; c + 1 < N; ++c) add(x, l - 1, prof.log_mu(l - 1));
    }
  }
  std::vector<double> lu;
  std::vector<vertex_id> interior;
  for (vertex_id v = 0; v < level.size(); ++v) {
    lu.push_back(prof.log_u(level[v]));
    if (std::llabs(level[v]) < depth) interior.push_back(v);
  }
  const std::size_t n = level.size();
  return {weighted_graph(n, 0, std::move(edges)), std::move(level), special, vertex_function::from_log(std::move(lu)),
          std::move(interior)};
}

struct volume_check_row {
  std::int64_t n;
  double log_W;
  double log_form;  // ln of the asymptotic form of W
  double ratio;     // W / form
};

/// ln of the asymptotic form W is claimed to follow (n >= 2).
inline double log_volume_form(const radial_profile& prof, double n) {
  const double m = prof.pr.m, p = prof.pr.p, q = prof.pr.q;
  const double ln = std::log(n), lln = std::log(std::log(n));
  switch (prof.c) {
    case tree_case::I: {
      const double k = prof.pr.critical_gap();
      return (m * p + q) / k * ln + ((m - 1.0) / k + *prof.k.epsilon) * lln;
    }
    case tree_case::II: return m * ln + (m - 1.0 + *prof.k.epsilon) * lln;
    case tree_case::III: {
      const double k = q - m + 1.0;
      return q / k * ln + ((m - 1.0) / k + *prof.k.epsilon) * lln;
    }
    default: return *prof.k.lambda * n;
  }
}

/// W_o(n) from the radial quotient next to the claimed asymptotic form, n = 2..n_max.
inline std::vector<volume_check_row> volume_growth_check(const radial_profile& prof, std::int64_t n_max) {
  if (n_max < 2) throw parameter_error("n_max must be >= 2");
  if (n_max > prof.hi) throw parameter_error("n_max exceeds the profile depth");
  radial_tree t(prof);
  auto rows = volume_profile(t, t.root(), n_max);
  std::vector<volume_check_row> out;
  for (const auto& r : rows) {
    if (r.n < 2) continue;
    const double lf = log_volume_form(prof, static_cast<double>(r.n));
    out.push_back({r.n, r.log_W, lf, std::exp(r.log_W - lf)});
  }
  return out;
}

}  // namespace mlap

#endif  // MLAP_TREE_CONSTRUCT_HPP
