// SPDX-License-Identifier: Apache-2.0
#include "elorank/report.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "elorank/csv.hpp"
#include "elorank/errors.hpp"

namespace elorank {
namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string source_error(std::string_view source, std::size_t line, const std::string& what) {
  return std::string(source) + ":" + std::to_string(line) + ": " + what;
}

double parse_number(const CsvRecord& rec, std::size_t col, std::string_view source) {
  const auto& s = rec.fields[col];
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(source_error(source, rec.line, "'" + s + "' is not a number"));
  }
  return v;
}

std::size_t parse_count(const CsvRecord& rec, std::size_t col, std::string_view source) {
  const double v = parse_number(rec, col, source);
  if (v < 0 || v != std::floor(v)) {
    throw ValidationError(source_error(source, rec.line, "'" + rec.fields[col] + "' is not a count"));
  }
  return static_cast<std::size_t>(v);
}

std::map<std::string, std::size_t> header_index(const CsvRecord& header, const std::vector<std::string>& required,
                                                std::string_view source) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.fields.size(); ++i) index[header.fields[i]] = i;
  for (const auto& name : required) {
    if (!index.count(name)) throw ValidationError(source_error(source, header.line, "missing column '" + name + "'"));
  }
  return index;
}

std::vector<CsvRecord> read_table(std::istream& in, std::string_view source) {
  auto records = read_csv(in, source);
  if (records.empty()) throw ValidationError(std::string(source) + ": empty file");
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].fields.size() != records[0].fields.size()) {
      throw ValidationError(source_error(source, records[i].line,
                                         "expected " + std::to_string(records[0].fields.size()) + " fields, found " +
                                             std::to_string(records[i].fields.size())));
    }
  }
  return records;
}

std::string svg_number(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string provenance_line(const Provenance& p) {
  return "# seed=" + std::to_string(p.seed) + " input_sha256=" + p.input_sha256;
}

void write_metrics_csv(std::ostream& out, const BootstrapResults& results, const Provenance& p) {
  out << provenance_line(p) << '\n';
  std::vector<std::string> header{"method", "completed", "failed", "redrawn"};
  for (const auto& m : kMetricNames) {
    header.push_back(m + "_mean");
    header.push_back(m + "_sd");
  }
  out << csv_line(header) << '\n';
  for (const auto& [method, r] : results) {
    std::vector<std::string> row{method, std::to_string(r.completed()), std::to_string(r.failed),
                                 std::to_string(r.redrawn)};
    for (const auto& m : kMetricNames) {
      row.push_back(format_double(r.summary.at(m).mean));
      row.push_back(format_double(r.summary.at(m).sd));
    }
    out << csv_line(row) << '\n';
  }
}

void write_repetitions_csv(std::ostream& out, const BootstrapResults& results, const Provenance& p) {
  out << provenance_line(p) << '\n';
  std::vector<std::string> header{"method", "repetition", "ok"};
  header.insert(header.end(), kMetricNames.begin(), kMetricNames.end());
  header.push_back("error");
  out << csv_line(header) << '\n';
  for (const auto& [method, r] : results) {
    for (const auto& rep : r.repetitions) {
      std::vector<std::string> row{method, std::to_string(rep.index), rep.ok ? "1" : "0"};
      for (const auto& m : kMetricNames) row.push_back(rep.ok ? format_double(metric_value(rep.report, m)) : "");
      row.push_back(rep.error);
      out << csv_line(row) << '\n';
    }
  }
}

void write_roc_csv(std::ostream& out, const BootstrapResults& results, const Provenance& p) {
  out << provenance_line(p) << '\n';
  out << csv_line({"method", "fpr", "tpr", "threshold"}) << '\n';
  for (const auto& [method, r] : results) {
    ScoreMap scores;
    LabelMap gold;
    for (const auto& rep : r.repetitions) {
      if (!rep.ok) continue;
      const std::string prefix = std::to_string(rep.index) + "/";
      for (const auto& [id, s] : rep.scores) scores[prefix + id] = s;
      for (const auto& [id, g] : rep.gold) gold[prefix + id] = g;
    }
    if (gold.empty()) continue;
    for (const auto& pt : roc_curve(scores, gold)) {
      out << csv_line({method, format_double(pt.fpr), format_double(pt.tpr), format_double(pt.threshold)}) << '\n';
    }
  }
}

std::vector<OmnibusRow> omnibus(const BootstrapResults& results) {
  if (results.size() < 2) throw ValidationError("omnibus tests need at least two methods");
  std::vector<OmnibusRow> rows;
  for (const auto& metric : kMetricNames) {
    std::vector<std::vector<double>> groups;
    for (const auto& [method, r] : results) groups.push_back(r.values(metric));
    OmnibusRow row{metric, {}, {}};
    row.kruskal = kruskal_wallis(groups);
    row.anova = one_way_anova(groups);
    rows.push_back(row);
  }
  return rows;
}

void write_omnibus_csv(std::ostream& out, const std::vector<OmnibusRow>& rows, const Provenance& p) {
  out << provenance_line(p) << '\n';
  out << csv_line({"metric", "kruskal_h", "kruskal_df", "kruskal_p", "anova_f", "anova_df_between", "anova_df_within",
                   "anova_p"})
      << '\n';
  for (const auto& r : rows) {
    out << csv_line({r.metric, format_double(r.kruskal.h), std::to_string(r.kruskal.df), format_double(r.kruskal.p),
                     format_double(r.anova.f), std::to_string(r.anova.df_between),
                     std::to_string(r.anova.df_within), format_double(r.anova.p)})
        << '\n';
  }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in, std::string_view source) {
  const auto records = read_table(in, source);
  std::vector<std::string> required{"method", "completed", "failed", "redrawn"};
  for (const auto& m : kMetricNames) {
    required.push_back(m + "_mean");
    required.push_back(m + "_sd");
  }
  const auto col = header_index(records[0], required, source);
  std::vector<MetricsRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    MetricsRow row;
    row.method = rec.fields[col.at("method")];
    row.completed = parse_count(rec, col.at("completed"), source);
    row.failed = parse_count(rec, col.at("failed"), source);
    row.redrawn = parse_count(rec, col.at("redrawn"), source);
    for (const auto& m : kMetricNames) {
      row.metrics[m] = {parse_number(rec, col.at(m + "_mean"), source), parse_number(rec, col.at(m + "_sd"), source)};
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<RocSeries> read_roc_csv(std::istream& in, std::string_view source) {
  const auto records = read_table(in, source);
  const auto col = header_index(records[0], {"method", "fpr", "tpr", "threshold"}, source);
  std::vector<RocSeries> series;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    const auto& method = rec.fields[col.at("method")];
    if (series.empty() || series.back().method != method) {
      for (const auto& s : series) {
        if (s.method == method) {
          throw ValidationError(source_error(source, rec.line, "rows of method '" + method + "' are not contiguous"));
        }
      }
      series.push_back({method, {}});
    }
    RocPoint pt{parse_number(rec, col.at("fpr"), source), parse_number(rec, col.at("tpr"), source),
                parse_number(rec, col.at("threshold"), source)};
    if (!(pt.fpr >= 0 && pt.fpr <= 1 && pt.tpr >= 0 && pt.tpr <= 1)) {
      throw ValidationError(source_error(source, rec.line, "fpr and tpr must lie in [0, 1]"));
    }
    auto& pts = series.back().points;
    if (!pts.empty() && (pt.fpr < pts.back().fpr || pt.tpr < pts.back().tpr)) {
      throw ValidationError(source_error(source, rec.line, "ROC points must be nondecreasing in fpr and tpr"));
    }
    pts.push_back(pt);
  }
  if (series.empty()) throw ValidationError(std::string(source) + ": no ROC points");
  return series;
}

std::string render_summary(const std::vector<MetricsRow>& metrics, const std::vector<RocSeries>& roc) {
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"method"};
  header.insert(header.end(), kMetricNames.begin(), kMetricNames.end());
  header.push_back("reps");
  table.push_back(header);
  for (const auto& row : metrics) {
    std::vector<std::string> cells{row.method};
    for (const auto& m : kMetricNames) {
      const auto& s = row.metrics.at(m);
      cells.push_back(format_fixed(s.mean, 2) + " (" + format_fixed(s.sd, 2) + ")");
    }
    std::string reps = std::to_string(row.completed);
    if (row.failed > 0) reps += " +" + std::to_string(row.failed) + " failed";
    cells.push_back(reps);
    table.push_back(cells);
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& r : table) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream os;
  if (!metrics.empty()) {
    for (const auto& r : table) {
      for (std::size_t c = 0; c < r.size(); ++c) {
        os << (c ? "  " : "") << r[c] << std::string(c + 1 < r.size() ? width[c] - r[c].size() : 0, ' ');
      }
      os << '\n';
    }
  }
  if (!roc.empty()) {
    if (!metrics.empty()) os << '\n';
    os << "ROC area (trapezoid)\n";
    for (const auto& s : roc) os << "  " << s.method << ": " << format_fixed(trapezoid_area(s.points), 4) << '\n';
  }
  return os.str();
}

std::string render_roc_svg(const std::vector<RocSeries>& roc, const std::string& comment) {
  constexpr double kSize = 400, kLeft = 50, kTop = 20;
  auto x = [&](double fpr) { return svg_number(kLeft + fpr * kSize); };
  auto y = [&](double tpr) { return svg_number(kTop + (1.0 - tpr) * kSize); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::string safe_comment = comment;
  for (std::size_t pos; (pos = safe_comment.find("--")) != std::string::npos;) safe_comment.replace(pos, 2, "- -");
  os << "<!-- " << safe_comment << " -->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kLeft + kSize + 200 << "\" height=\""
     << kTop + kSize + 50 << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"" << x(0) << "\" y=\"" << y(1) << "\" width=\"" << kSize << "\" height=\"" << kSize
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << x(0) << "\" y1=\"" << y(0) << "\" x2=\"" << x(1) << "\" y2=\"" << y(1)
     << "\" stroke=\"gray\" stroke-dasharray=\"4 4\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    os << "<text x=\"" << x(t) << "\" y=\"" << svg_number(kTop + kSize + 16) << "\" text-anchor=\"middle\">"
       << format_fixed(t, 2) << "</text>\n";
    os << "<text x=\"" << svg_number(kLeft - 6) << "\" y=\"" << y(t) << "\" text-anchor=\"end\">" << format_fixed(t, 2)
       << "</text>\n";
  }
  os << "<text x=\"" << x(0.5) << "\" y=\"" << svg_number(kTop + kSize + 36)
     << "\" text-anchor=\"middle\">False positive rate</text>\n";
  os << "<text transform=\"translate(14 " << y(0.5)
     << ") rotate(-90)\" text-anchor=\"middle\">True positive rate</text>\n";

  for (std::size_t i = 0; i < roc.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t j = 0; j < roc[i].points.size(); ++j) {
      os << (j ? " " : "") << x(roc[i].points[j].fpr) << ',' << y(roc[i].points[j].tpr);
    }
    os << "\"/>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
    os << "<text x=\"" << svg_number(kLeft + kSize + 12) << "\" y=\"" << svg_number(ly) << "\" fill=\"" << color
       << "\">" << xml_escape(roc[i].method) << " (AUC " << format_fixed(trapezoid_area(roc[i].points), 3)
       << ")</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace elorank
