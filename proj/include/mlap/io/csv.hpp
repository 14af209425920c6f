#ifndef MLAP_IO_CSV_HPP
#define MLAP_IO_CSV_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "../error.hpp"

namespace mlap::io {

/// Shortest round-trip text for a double ("%.17g"; inf and nan spelled out).
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Header-first CSV with '.' decimals and '\n' line ends.
class csv_writer {
 public:
  csv_writer(std::ostream& os, std::vector<std::string> header) : os_(os), width_(header.size()) {
    if (header.empty()) throw format_error("CSV header is empty");
    write_row(header);
  }

  class row {
   public:
    explicit row(csv_writer& w) : w_(w) {}
    row(const row&) = delete;
    ~row() noexcept(false) {
      if (!done_) end();
    }

    template <class T>
    row& operator<<(const T& v) {
      if constexpr (std::is_floating_point_v<T>)
        cells_.push_back(format_double(static_cast<double>(v)));
      else if constexpr (std::is_same_v<T, bool>)
        cells_.push_back(v ? "1" : "0");
      else if constexpr (std::is_integral_v<T>)
        cells_.push_back(std::to_string(v));
      else
        cells_.push_back(std::string(v));
      return *this;
    }

    void end() {
      done_ = true;
      if (cells_.size() != w_.width_)
        throw format_error("CSV row has " + std::to_string(cells_.size()) + " cells, header has " +
                           std::to_string(w_.width_));
      w_.write_row(cells_);
    }

   private:
    csv_writer& w_;
    std::vector<std::string> cells_;
    bool done_ = false;
  };

  row next() { return row(*this); }

 private:
  static std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }

  void write_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << quote(cells[i]);
    os_ << '\n';
  }

  std::ostream& os_;
  std::size_t width_;
};

}  // namespace mlap::io

#endif  // MLAP_IO_CSV_HPP
