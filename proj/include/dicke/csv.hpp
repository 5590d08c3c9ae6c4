#pragma once

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "dicke/model.hpp"

namespace dicke {

/// Formats a double with 17 significant digits (round-trip exact).
inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// CSV emitter: comma separators, header row, LF line endings.  Rows are
/// buffered per line so concurrent producers can hand over finished lines.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) {
    if (path.empty() || path == "-") {
      out_ = &std::cout;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error("OutputFileError", path);
      out_ = file_.get();
    }
  }

  void header(const std::vector<std::string>& cols) { line(cols); }

  void line(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) row += ',';
      row += cells[i];
    }
    row += '\n';
    *out_ << row;
  }

  void flush() { out_->flush(); }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_ = nullptr;
};

}  // namespace dicke
