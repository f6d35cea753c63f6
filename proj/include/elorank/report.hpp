// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "elorank/bootstrap.hpp"
#include "elorank/metrics.hpp"
#include "elorank/stats.hpp"

namespace elorank {

/// Written as a leading "# seed=... input_sha256=..." comment in CSV files.
struct Provenance {
  std::uint64_t seed = 0;
  std::string input_sha256;
};

std::string provenance_line(const Provenance& p);

using BootstrapResults = std::map<std::string, BootstrapResult>;

/// One row per method: method, completed, failed, redrawn, then
/// <metric>_mean and <metric>_sd for each metric.
void write_metrics_csv(std::ostream& out, const BootstrapResults& results, const Provenance& p);

/// One row per method and repetition.
void write_repetitions_csv(std::ostream& out, const BootstrapResults& results, const Provenance& p);

/// Per method, one curve over the scores of all completed repetitions.
void write_roc_csv(std::ostream& out, const BootstrapResults& results, const Provenance& p);

struct OmnibusRow {
  std::string metric;
  KruskalWallisResult kruskal;
  AnovaResult anova;
};

/// Kruskal-Wallis and ANOVA across methods for every metric. Needs at
/// least two methods.
std::vector<OmnibusRow> omnibus(const BootstrapResults& results);

void write_omnibus_csv(std::ostream& out, const std::vector<OmnibusRow>& rows, const Provenance& p);

struct MetricsRow {
  std::string method;
  std::size_t completed = 0, failed = 0, redrawn = 0;
  std::map<std::string, MetricSummary> metrics;
};

struct RocSeries {
  std::string method;
  std::vector<RocPoint> points;
};

/// Readers for the files above. Malformed input throws ValidationError
/// naming the line.
std::vector<MetricsRow> read_metrics_csv(std::istream& in, std::string_view source_name);
std::vector<RocSeries> read_roc_csv(std::istream& in, std::string_view source_name);

/// Plain-text table with "mean (SD)" cells and ROC areas.
std::string render_summary(const std::vector<MetricsRow>& metrics, const std::vector<RocSeries>& roc);

/// ROC curves as a standalone SVG; `comment` is embedded verbatim.
std::string render_roc_svg(const std::vector<RocSeries>& roc, const std::string& comment);

}  // namespace elorank
