#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "zenospin/error.hpp"

namespace zenospin {

/// Shortest decimal that round-trips to the same double; locale-independent.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) throw NumericalError("refusing to write a non-finite value to CSV");
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// Comma-separated table with a single header row and LF line endings.
class CsvTable {
 public:
  explicit CsvTable(const std::vector<std::string>& header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i > 0) text_ += ',';
      text_ += header[i];
    }
    text_ += '\n';
  }

  /// Appends one body row; the row is closed when the returned object dies.
  class Row {
   public:
    explicit Row(CsvTable& t) : table_(t), pending_(std::uncaught_exceptions()) {}
    Row(const Row&) = delete;
    Row& operator=(const Row&) = delete;
    ~Row() noexcept(false) {
      if (std::uncaught_exceptions() > pending_) return;  // a cell threw; table is abandoned
      if (cells_ != table_.columns_) throw InvalidArgument("CSV row has the wrong number of cells");
      table_.text_ += '\n';
      ++table_.rows_;
    }

    Row& operator<<(double v) { return cell(format_number(v)); }
    Row& operator<<(std::size_t v) { return cell(std::to_string(v)); }
    Row& operator<<(int v) { return cell(std::to_string(v)); }
    Row& operator<<(std::string_view v) { return cell(v); }
    Row& operator<<(const char* v) { return cell(v); }

   private:
    Row& cell(std::string_view v) {
      if (cells_++ > 0) table_.text_ += ',';
      table_.text_ += v;
      return *this;
    }

    CsvTable& table_;
    int pending_;
    std::size_t cells_ = 0;
  };

  Row add() { return Row(*this); }

  const std::string& text() const { return text_; }
  std::size_t rows() const { return rows_; }

 private:
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace zenospin
