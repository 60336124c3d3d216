#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hetsim {

/// Deterministic CSV writer: doubles as %.17g so files round-trip and two
/// identical runs produce byte-identical output.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
  }

  CsvWriter& operator<<(double v) {
    sep();
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out_ << buf;
    return *this;
  }
  CsvWriter& operator<<(std::int64_t v) {
    sep();
    out_ << v;
    return *this;
  }
  CsvWriter& operator<<(int v) { return *this << static_cast<std::int64_t>(v); }
  CsvWriter& operator<<(std::uint64_t v) {
    sep();
    out_ << v;
    return *this;
  }
  CsvWriter& operator<<(std::string_view s) {
    sep();
    out_ << s;
    return *this;
  }

  void end_row() {
    out_ << "\n";
    at_row_start_ = true;
  }

 private:
  void sep() {
    if (!at_row_start_) out_ << ",";
    at_row_start_ = false;
  }
  std::ofstream out_;
  bool at_row_start_ = true;
};

}  // namespace hetsim
