#ifndef MLAP_TREE_LAMBDA_HPP
#define MLAP_TREE_LAMBDA_HPP

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include <boost/multiprecision/mpfr.hpp>

#include "../error.hpp"
#include "../numeric.hpp"
#include "../params.hpp"
#include "profile.hpp"

namespace mlap {

using big_float = boost::multiprecision::mpfr_float;

/// max(64, ceil(4 log2 n)) bits.
inline unsigned lambda_precision_bits(double n) {
  return std::max(64u, static_cast<unsigned>(std::ceil(4.0 * std::log2(std::max(n, 2.0)))));
}

/// Sets the working precision of big_float for the current scope.
class precision_scope {
 public:
  explicit precision_scope(unsigned bits) : saved_(big_float::default_precision()) {
    big_float::default_precision(static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1);
  }
  ~precision_scope() { big_float::default_precision(saved_); }
  precision_scope(const precision_scope&) = delete;
  precision_scope& operator=(const precision_scope&) = delete;

 private:
  unsigned saved_;
};

namespace detail {

/// -X / G^(q/2) for a radial function f with weight logs lw at level n, where
/// X is the normalized m-Laplacian and G the normalized squared gradient.
template <class R, class LogW, class F>
R radial_core(const R& n, double m, double q, LogW lw, F f) {
  using std::exp;
  using std::pow;
  const R one(1);
  const R f_prev = f(n - one), f_here = f(n), f_next = f(n + one);
  const R dp = f_here - f_next;
  const R dm = f_prev - f_here;
  const R rho = exp(lw(n - one) - lw(n));
  const R e = R(m - 1.0);
  const R X = (-pow(dp, e) + rho * pow(dm, e)) / (one + rho);
  const R G = (dp * dp + rho * dm * dm) / (R(2) * (one + rho));
  return -X / pow(G, R(q / 2.0));
}

}  // namespace detail

inline g_region lambda_region(int index) {
  switch (index) {
    case 1: return g_region::G1;
    case 2: return g_region::G2;
    case 3: return g_region::G3;
    case 4: return g_region::G4;
  }
  throw parameter_error("Lambda index must be 1, 2, 3 or 4");
}

inline void check_lambda_args(int index, const param_triple& pr, double x, double n) {
  g_region want = lambda_region(index);
  if (classify_G(pr) != want)
    throw parameter_error("Lambda_" + std::to_string(index) + " needs region " + std::string(to_string(want)) +
                          ", got " + std::string(to_string(classify_G(pr))));
  if (!(x > 0.0)) throw parameter_error(index == 4 ? "lambda must be > 0" : "epsilon must be > 0");
  if (index == 4 ? !(n >= 2.0) : !(n >= 3.0))
    throw parameter_error(index == 4 ? "Lambda_4 needs n >= 2"
                                     : "Lambda_" + std::to_string(index) + " needs n >= 3 (ln(n-1) must be positive)");
}

/// Lambda_index(n) in the arithmetic type R; x is epsilon (1..3) or lambda (4).
template <class R>
R lambda_value(int index, const param_triple& pr, double x, const R& n) {
  using std::log;
  using std::pow;
  const double m = pr.m, p = pr.p, q = pr.q;
  switch (index) {
    case 1:
    case 3: {
      auto e = case_exponents(index == 1 ? tree_case::I : tree_case::III, pr);
      auto lw = [&](const R& k) { return R(e.weight_power) * log(k) + R(e.weight_log + x) * log(log(k)); };
      auto f = [&](const R& k) { return pow(k, R(-e.sigma)) * pow(log(k), R(-e.beta)); };
      R core = detail::radial_core<R>(n, m, q, lw, f);
      return index == 1 ? core / pow(f(n), R(p)) : core;
    }
    case 2: {
      auto lw = [&](const R& k) { return R(m - 1.0) * log(k) + R(m - 1.0 + x) * log(log(k)); };
      auto g = [&](const R& k) { return pow(log(k), R(-x / 2.0)); };
      R core = detail::radial_core<R>(n, m, q, lw, g);
      return core / pow(g(n) + R(1), R(p));
    }
    case 4: {
      auto lw = [&](const R& k) { return R(x) * k; };
      auto f = [&](const R& k) { return R(1) / k; };
      R core = detail::radial_core<R>(n, m, q, lw, f);
      return core / pow(R(1) / n + R(1), R(p));
    }
  }
  throw parameter_error("Lambda index must be 1, 2, 3 or 4");
}

/// Lambda_index(n) in high precision (bits = 0 picks the default for n).
inline double lambda_eval(int index, const param_triple& pr, double x, double n, unsigned bits = 0) {
  check_lambda_args(index, pr, x, n);
  precision_scope scope(bits ? bits : lambda_precision_bits(n));
  big_float bn(n);
  return static_cast<double>(lambda_value<big_float>(index, pr, x, bn));
}

/// Closed-form limit of Lambda_index (+inf for index 2).
inline double lambda_limit(int index, const param_triple& pr, double x) {
  check_lambda_args(index, pr, x, 3.0);
  const double m = pr.m, q = pr.q;
  switch (index) {
    case 1: {
      auto e = case_exponents(tree_case::I, pr);
      return std::pow(2.0, q / 2.0 - 1.0) * std::pow(e.sigma, m - 1.0 - q) * x;
    }
    case 2: return inf;
    case 3: {
      auto e = case_exponents(tree_case::III, pr);
      return std::pow(2.0, (q - 2.0) / 2.0) * std::pow(e.sigma, m - 1.0 - q) * x;
    }
    case 4: return std::pow(2.0, (m - 1.0) / 2.0) * (1.0 - std::exp(-x)) / (1.0 + std::exp(-x));
  }
  return 0.0;
}

/// Right-hand side of the root condition of case V1: 2^(q/2) (1 - e^(-a lambda))^(m-1-q).
inline double v1_root_rhs(const param_triple& pr, double lambda, double a) {
  return std::pow(2.0, pr.q / 2.0) * std::pow(-std::expm1(-a * lambda), pr.m - 1.0 - pr.q);
}

/// Right-hand side of the interior condition of case V1.
inline double v1_interior_rhs(const param_triple& pr, double lambda, double a) {
  const double m = pr.m, q = pr.q;
  return v1_root_rhs(pr, lambda, a) *
         std::pow((1.0 + std::exp(-lambda)) / (1.0 + std::exp((2.0 * a - 1.0) * lambda)), q / 2.0) *
         ((1.0 - std::exp(((m - 1.0) * a - 1.0) * lambda)) / (1.0 + std::exp(-lambda)));
}

/// Right-hand side of the two-sided condition of case V2.
inline double v2_rhs(const param_triple& pr, double lambda, double a) {
  const double m = pr.m, q = pr.q;
  const double c = a * (lambda - 1.0);
  return std::pow(2.0, q / 2.0) * std::pow(-std::expm1(-c), m - 1.0 - q) *
         std::pow((1.0 + std::exp(-lambda)) / (1.0 + std::exp(2.0 * c - lambda)), q / 2.0) *
         ((1.0 - std::exp((m - 1.0) * c - lambda)) / (1.0 + std::exp(-lambda)));
}

}  // namespace mlap

#endif  // MLAP_TREE_LAMBDA_HPP
