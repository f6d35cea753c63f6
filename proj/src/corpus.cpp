// SPDX-License-Identifier: Apache-2.0
#include "elorank/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "elorank/csv.hpp"
#include "elorank/errors.hpp"
#include "elorank/hashing.hpp"
#include "elorank/random.hpp"

namespace elorank {

using json = nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

/// Renders scalar JSON values as strings; numbers keep their JSON spelling.
std::string scalar_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return {};
  return v.dump();
}

class ProblemList {
 public:
  explicit ProblemList(std::string source) : source_(std::move(source)) {}
  void add(std::size_t row, const std::string& what) {
    problems_.push_back("row " + std::to_string(row) + ": " + what);
  }
  void throw_if_any() const {
    if (problems_.empty()) return;
    std::string msg = source_ + ": " + std::to_string(problems_.size()) + " invalid row(s)";
    const std::size_t shown = std::min<std::size_t>(problems_.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) msg += "\n  " + problems_[i];
    if (shown < problems_.size()) msg += "\n  ...";
    throw ValidationError(msg);
  }

 private:
  std::string source_;
  std::vector<std::string> problems_;
};

struct RawRow {
  std::size_t row = 0;
  std::optional<std::string> id;
  std::string text;
  std::string label;
  std::map<std::string, std::string> meta;
};

Dataset build(std::vector<RawRow> rows, const ColumnMapping& columns, const std::string& name) {
  ProblemList problems(name);
  std::vector<TextEntry> entries;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& r = rows[i];
    TextEntry e;
    e.id = r.id ? trim(*r.id) : std::to_string(i);
    e.text = normalize_text(r.text);
    e.meta = std::move(r.meta);
    if (e.id.empty()) problems.add(r.row, "empty id");
    if (!seen.insert(e.id).second) problems.add(r.row, "duplicate id '" + e.id + "'");
    if (e.text.empty()) problems.add(r.row, "empty text (id '" + e.id + "')");
    try {
      e.label = columns.labels.map(r.label);
    } catch (const ValidationError& err) {
      problems.add(r.row, err.what());
    }
    entries.push_back(std::move(e));
  }
  problems.throw_if_any();
  return Dataset(name, std::move(entries));
}

std::vector<RawRow> parse_jsonl_rows(std::istream& in, const ColumnMapping& columns, const std::string& name) {
  ProblemList problems(name);
  std::vector<RawRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const json obj = json::parse(line, nullptr, false);
    if (!obj.is_object()) {
      problems.add(line_no, "not a JSON object");
      continue;
    }
    RawRow r;
    r.row = line_no;
    if (const auto it = obj.find(columns.id_column); it != obj.end() && !it->is_null()) r.id = scalar_to_string(*it);
    if (const auto it = obj.find(columns.text_column); it != obj.end()) r.text = scalar_to_string(*it);
    if (const auto it = obj.find(columns.label_column); it != obj.end()) r.label = scalar_to_string(*it);
    if (const auto it = obj.find("meta"); it != obj.end() && it->is_object()) {
      for (const auto& [k, v] : it->items()) r.meta[k] = scalar_to_string(v);
    }
    rows.push_back(std::move(r));
  }
  problems.throw_if_any();
  return rows;
}

std::vector<RawRow> parse_csv_rows(std::istream& in, const ColumnMapping& columns, const std::string& name) {
  auto records = read_csv(in, name);
  if (records.empty()) throw ValidationError(name + ": CSV has no header row");
  const auto& header = records.front().fields;
  auto find_col = [&](const std::string& col) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), col);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto id_col = find_col(columns.id_column);
  const auto text_col = find_col(columns.text_column);
  const auto label_col = find_col(columns.label_column);
  if (!text_col) throw ValidationError(name + ": CSV header has no text column '" + columns.text_column + "'");

  ProblemList problems(name);
  std::vector<RawRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.fields.size() != header.size()) {
      problems.add(rec.line, "expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(rec.fields.size()));
      continue;
    }
    RawRow r;
    r.row = rec.line;
    if (id_col) r.id = rec.fields[*id_col];
    r.text = rec.fields[*text_col];
    if (label_col) r.label = rec.fields[*label_col];
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == text_col || c == id_col || c == label_col) continue;
      r.meta[header[c]] = rec.fields[c];
    }
    rows.push_back(std::move(r));
  }
  problems.throw_if_any();
  return rows;
}

std::vector<std::size_t> choose(std::size_t population, std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(population - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  return idx;
}

}  // namespace

Dataset::Dataset(std::string name, std::vector<TextEntry> entries) : name_(std::move(name)), entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (trim(e.text).empty()) throw ValidationError("entry '" + e.id + "' has empty text");
    if (!index_.emplace(e.id, i).second) throw ValidationError("duplicate id '" + e.id + "'");
  }
}

const TextEntry& Dataset::at(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw ValidationError("unknown item id '" + id + "'");
  return entries_[it->second];
}

std::vector<std::string> Dataset::ids() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.id);
  return out;
}

bool Dataset::fully_labeled() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const TextEntry& e) { return e.label.has_value(); });
}

LabelMap Dataset::gold() const {
  LabelMap out;
  for (const auto& e : entries_) {
    if (e.label) out.emplace(e.id, *e.label);
  }
  return out;
}

CorpusFormat corpus_format_from_string(std::string_view s) {
  if (s == "jsonl") return CorpusFormat::Jsonl;
  if (s == "csv") return CorpusFormat::Csv;
  throw ValidationError("unknown corpus format '" + std::string(s) + "' (expected jsonl or csv)");
}

CorpusFormat corpus_format_for(const std::filesystem::path& path) {
  return lower(path.extension().string()) == ".csv" ? CorpusFormat::Csv : CorpusFormat::Jsonl;
}

LabelMapping LabelMapping::parse(std::string_view spec, bool collapse_unknown_to_harmful) {
  LabelMapping m;
  m.collapse_unknown_to_harmful = collapse_unknown_to_harmful;
  std::stringstream ss{std::string(spec)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("label map entry '" + item + "' is not raw=harmful|benign");
    m.explicit_map[trim(item.substr(0, eq))] = label_from_string(trim(item.substr(eq + 1)));
  }
  return m;
}

std::optional<Label> LabelMapping::map(std::string_view raw) const {
  const auto value = trim(raw);
  if (value.empty()) return std::nullopt;
  if (const auto it = explicit_map.find(value); it != explicit_map.end()) return it->second;
  static const std::set<std::string> kHarmful = {"harmful", "1", "true", "yes"};
  static const std::set<std::string> kBenign = {"benign", "0", "false", "no", "neither", "none",
                                                "not_harmful", "non-harmful", "nonharmful"};
  const auto key = lower(value);
  if (kHarmful.count(key)) return Label::Harmful;
  if (kBenign.count(key)) return Label::Benign;
  if (collapse_unknown_to_harmful) return Label::Harmful;
  throw ValidationError("unknown label '" + value + "'");
}

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
    } else {
      out.push_back(text[i]);
    }
  }
  return trim(out);
}

Dataset parse_dataset(std::istream& in, CorpusFormat format, const ColumnMapping& columns, std::string name) {
  auto rows = format == CorpusFormat::Csv ? parse_csv_rows(in, columns, name) : parse_jsonl_rows(in, columns, name);
  return build(std::move(rows), columns, name);
}

Dataset load_dataset(const std::filesystem::path& path, CorpusFormat format, const ColumnMapping& columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read dataset " + path.string());
  return parse_dataset(in, format, columns, path.filename().string());
}

std::string serialize_jsonl(const Dataset& dataset) {
  std::string out;
  for (const auto& e : dataset.entries()) {
    json rec = {{"id", e.id}, {"text", e.text}};
    if (e.label) rec["label"] = to_string(*e.label);
    if (!e.meta.empty()) rec["meta"] = e.meta;
    out += rec.dump();
    out.push_back('\n');
  }
  return out;
}

void write_jsonl(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  out << serialize_jsonl(dataset);
  if (!out) throw EnvironmentError("cannot write " + path.string());
}

std::string content_hash(const Dataset& dataset) { return sha256_hex(serialize_jsonl(dataset)); }

Dataset sample(const Dataset& dataset, std::size_t n, std::uint64_t seed, bool stratified) {
  const auto& entries = dataset.entries();
  if (n > entries.size()) {
    throw ValidationError("cannot sample " + std::to_string(n) + " of " + std::to_string(entries.size()) + " entries");
  }
  std::vector<std::size_t> picked;
  if (!stratified) {
    Rng rng(seed);
    picked = choose(entries.size(), n, rng);
  } else {
    if (!dataset.fully_labeled()) throw ValidationError("stratified sampling needs every entry labeled");
    std::vector<std::size_t> harmful, benign;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      (*entries[i].label == Label::Harmful ? harmful : benign).push_back(i);
    }
    auto n_harmful = static_cast<std::size_t>(
        std::floor(static_cast<double>(n) * static_cast<double>(harmful.size()) / static_cast<double>(entries.size()) +
                   0.5));
    if (n >= 2 && !harmful.empty() && !benign.empty()) n_harmful = std::clamp<std::size_t>(n_harmful, 1, n - 1);
    n_harmful = std::min(n_harmful, harmful.size());
    if (n - n_harmful > benign.size()) n_harmful = n - benign.size();
    Rng rng_h(derive_seed(seed, 1));
    Rng rng_b(derive_seed(seed, 2));
    for (const auto i : choose(harmful.size(), n_harmful, rng_h)) picked.push_back(harmful[i]);
    for (const auto i : choose(benign.size(), n - n_harmful, rng_b)) picked.push_back(benign[i]);
  }
  std::sort(picked.begin(), picked.end());
  std::vector<TextEntry> out;
  out.reserve(picked.size());
  for (const auto i : picked) out.push_back(entries[i]);
  return Dataset(dataset.name(), std::move(out));
}

double prevalence(const Dataset& dataset) {
  if (dataset.empty()) throw ValidationError("prevalence of an empty dataset");
  std::size_t harmful = 0;
  for (const auto& e : dataset.entries()) {
    if (!e.label) throw ValidationError("entry '" + e.id + "' is unlabeled");
    if (*e.label == Label::Harmful) ++harmful;
  }
  return static_cast<double>(harmful) / static_cast<double>(dataset.size());
}

}  // namespace elorank
