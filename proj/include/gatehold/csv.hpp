#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gatehold::csv {

/// A parsed CSV table addressed by header name.
class Table {
 public:
  /// Parses comma-separated text with a header row. Blank lines are skipped;
  /// double-quoted fields may contain commas.
  static Table parse(std::istream& in);
  static Table read(const std::filesystem::path& path);

  [[nodiscard]] std::size_t rows() const { return cells_.size(); }
  [[nodiscard]] bool has_column(std::string_view name) const;
  /// Cell text; throws when the column is missing.
  [[nodiscard]] const std::string& at(std::size_t row, std::string_view column) const;
  /// 1-based line number of a data row in the source text.
  [[nodiscard]] std::size_t line_of(std::size_t row) const { return lines_[row]; }
  [[nodiscard]] const std::vector<std::string>& header() const { return header_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> cells_;
  std::vector<std::size_t> lines_;
};

std::vector<std::string> split_line(std::string_view line);
std::string trim(std::string_view s);
std::vector<std::string> split_list(std::string_view s, char sep = ';');

/// Quotes a field when it contains a comma or quote.
std::string escape(std::string_view field);

/// Shortest round-trip decimal form, so written values reload bit-exact.
std::string format_double(double v);

}  // namespace gatehold::csv
