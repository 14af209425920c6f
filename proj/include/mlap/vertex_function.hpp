#ifndef MLAP_VERTEX_FUNCTION_HPP
#define MLAP_VERTEX_FUNCTION_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace mlap {

enum class representation { linear, log };

/// Real function on the vertex set, stored either as values or as ln(values).
class vertex_function {
 public:
  static vertex_function linear(std::vector<double> values) {
    for (std::size_t i = 0; i < values.size(); ++i)
      if (std::isnan(values[i])) throw domain_error("value at vertex " + std::to_string(i) + " is NaN");
    return vertex_function(representation::linear, std::move(values));
  }

  static vertex_function from_log(std::vector<double> log_values) {
    for (std::size_t i = 0; i < log_values.size(); ++i)
      if (!std::isfinite(log_values[i]))
        throw domain_error("log value at vertex " + std::to_string(i) + " is not finite");
    return vertex_function(representation::log, std::move(log_values));
  }

  static vertex_function constant(std::size_t n, double c) {
    return linear(std::vector<double>(n, c));
  }

  std::size_t size() const noexcept { return data_.size(); }
  representation repr() const noexcept { return repr_; }
  bool is_log() const noexcept { return repr_ == representation::log; }
  const std::vector<double>& raw() const noexcept { return data_; }

  double value(vertex_id x) const {
    check(x);
    return is_log() ? std::exp(data_[x]) : data_[x];
  }

  /// ln u(x); requires u(x) > 0.
  double log_value(vertex_id x) const {
    check(x);
    if (is_log()) return data_[x];
    if (!(data_[x] > 0.0))
      throw domain_error("u(" + std::to_string(x) + ") = " + std::to_string(data_[x]) + " is not positive");
    return std::log(data_[x]);
  }

  /// Throws unless the function is defined on exactly the vertices of g.
  template <graph_like G>
  void require_domain(const G& g) const {
    if (size() != g.vertex_count())
      throw domain_error("function has " + std::to_string(size()) + " values but the graph has " +
                         std::to_string(g.vertex_count()) + " vertices");
  }

 private:
  vertex_function(representation r, std::vector<double> d) : repr_(r), data_(std::move(d)) {}

  void check(vertex_id x) const {
    if (x >= data_.size()) throw domain_error("function is undefined at vertex " + std::to_string(x));
  }

  representation repr_;
  std::vector<double> data_;
};

}  // namespace mlap

#endif  // MLAP_VERTEX_FUNCTION_HPP
