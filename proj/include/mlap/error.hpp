#ifndef MLAP_ERROR_HPP
#define MLAP_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mlap {

/// Base class for all errors raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric parameter is outside the operation's admissible range (m <= 1, bad t/s, ...).
class parameter_error : public error {
 public:
  using error::error;
};

/// A formula would divide by zero for the supplied parameters.
class singular_error : public parameter_error {
 public:
  using parameter_error::parameter_error;
};

/// Vertex ids, function domains or function values are invalid.
class domain_error : public error {
 public:
  using error::error;
};

/// An input violates a documented precondition of the operation.
class precondition_error : public error {
 public:
  using error::error;
};

/// Requested combination is not handled (e.g. a region without a t-schedule).
class unsupported_error : public error {
 public:
  using error::error;
};

/// Explicit graph construction would exceed the configured vertex budget.
class size_guard_error : public error {
 public:
  using error::error;
};

/// Malformed graph / function / profile files.
class format_error : public error {
 public:
  using error::error;
};

/// The constant search ran out of candidates. `trace` keeps one line per attempt.
class constants_not_found : public error {
 public:
  constants_not_found(const std::string& what, std::vector<std::string> trace)
      : error(what), trace_(std::move(trace)) {}

  const std::vector<std::string>& trace() const noexcept { return trace_; }

 private:
  std::vector<std::string> trace_;
};

}  // namespace mlap

#endif  // MLAP_ERROR_HPP
