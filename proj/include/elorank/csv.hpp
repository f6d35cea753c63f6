// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace elorank {

struct CsvRecord {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields may contain commas, doubled quotes, and
/// newlines. Lines starting with '#' outside a record are skipped (artifact
/// provenance headers). Throws ValidationError with the line number on an
/// unterminated quote.
std::vector<CsvRecord> read_csv(std::istream& in, std::string_view source_name = "csv");

/// Quotes a field only when needed.
std::string csv_escape(std::string_view field);

/// Joins fields into one CSV line (no trailing newline).
std::string csv_line(const std::vector<std::string>& fields);

/// Shortest round-trip representation of a double ("%.17g" trimmed).
std::string format_double(double v);

/// Fixed-precision formatting for report tables.
std::string format_fixed(double v, int digits);

}  // namespace elorank
