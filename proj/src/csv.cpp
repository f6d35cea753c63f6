// SPDX-License-Identifier: Apache-2.0
#include "elorank/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "elorank/errors.hpp"

namespace elorank {

std::vector<CsvRecord> read_csv(std::istream& in, std::string_view source_name) {
  std::vector<CsvRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    CsvRecord rec;
    rec.line = line_no;
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    for (;;) {
      if (i == line.size()) {
        if (!quoted) break;
        // Quoted field spans a newline.
        field.push_back('\n');
        if (!std::getline(in, line)) {
          throw ValidationError(std::string(source_name) + ":" + std::to_string(rec.line) + ": unterminated quoted field");
        }
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        i = 0;
        continue;
      }
      const char c = line[i++];
      if (quoted) {
        if (c == '"') {
          if (i < line.size() && line[i] == '"') {
            field.push_back('"');
            ++i;
          } else {
            quoted = false;
          }
        } else {
          field.push_back(c);
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        rec.fields.push_back(std::move(field));
        field.clear();
      } else {
        field.push_back(c);
      }
    }
    rec.fields.push_back(std::move(field));
    records.push_back(std::move(rec));
  }
  return records;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_escape(fields[i]);
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int digits) {
  if (!std::isfinite(v)) return format_double(v);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace elorank
