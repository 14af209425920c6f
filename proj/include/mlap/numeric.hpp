#ifndef MLAP_NUMERIC_HPP
#define MLAP_NUMERIC_HPP

#include <cmath>
#include <limits>

namespace mlap {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// sign(d) * |d|^e, with 0 mapped to 0 for every e > 0.
inline double signed_pow(double d, double e) {
  if (d == 0.0) return 0.0;
  return d > 0.0 ? std::pow(d, e) : -std::pow(-d, e);
}

/// Streaming log-sum-exp: accumulates ln(sum_i exp(l_i)).
class log_sum {
 public:
  void add(double l) {
    if (l == -inf) return;
    if (l > max_) {
      sum_ = sum_ * std::exp(max_ - l) + 1.0;
      max_ = l;
    } else {
      sum_ += std::exp(l - max_);
    }
  }

  /// Adds ln(c) + l for a positive multiplicity c.
  void add(double l, double log_count) { add(l + log_count); }

  double value() const { return max_ == -inf ? -inf : max_ + std::log(sum_); }
  bool empty() const { return max_ == -inf; }

 private:
  double max_ = -inf;
  double sum_ = 0.0;
};

/// exp(l) without spurious NaN for l = -inf.
inline double exp_or_zero(double l) { return l == -inf ? 0.0 : std::exp(l); }

/// True when |a - b| <= rel * max(|a|, |b|) (exact equality also passes).
inline bool close_rel(double a, double b, double rel) {
  if (a == b) return true;
  return std::fabs(a - b) <= rel * std::fmax(std::fabs(a), std::fabs(b));
}

/// Residual-sign tolerance. A value r with magnitude scale S passes when r <= abs + rel * S.
struct tolerance {
  double abs = 0.0;
  double rel = 1e-9;
};

}  // namespace mlap

#endif  // MLAP_NUMERIC_HPP
