#pragma once

// Internal CSV helpers shared by the measurement and fixture readers.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace alphaeff::detail {

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

struct CsvDocument {
  std::vector<std::string> comments; // text after '#', trimmed
  bool has_header = false;
  std::vector<CsvRow> rows;
};

/// Splits `text` into trimmed fields. Blank lines and lines starting with
/// '#' are skipped (comments are collected). The first data line must be the
/// `label,k,value,kind` header. Double-quoted fields may contain commas and
/// "" escapes.
CsvDocument read_csv(std::string_view text);

/// Quotes a field when it contains a comma, quote, or surrounding space.
std::string csv_field(std::string_view value);

int parse_int_field(const std::string &text, std::size_t line,
                    const char *what);
double parse_double_field(const std::string &text, std::size_t line,
                          const char *what);

} // namespace alphaeff::detail
