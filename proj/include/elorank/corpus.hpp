// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "elorank/labels.hpp"

namespace elorank {

struct TextEntry {
  std::string id;
  std::string text;
  std::optional<Label> label;
  std::map<std::string, std::string> meta;

  bool operator==(const TextEntry&) const = default;
};

/// Entries in ingestion order with unique ids.
class Dataset {
 public:
  Dataset() = default;
  /// Validates id uniqueness and non-empty text.
  Dataset(std::string name, std::vector<TextEntry> entries);

  const std::string& name() const { return name_; }
  const std::vector<TextEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const TextEntry& at(const std::string& id) const;
  bool contains(const std::string& id) const { return index_.count(id) != 0; }

  std::vector<std::string> ids() const;
  bool fully_labeled() const;
  /// Gold labels of labeled entries.
  LabelMap gold() const;

  bool operator==(const Dataset& other) const { return name_ == other.name_ && entries_ == other.entries_; }

 private:
  std::string name_;
  std::vector<TextEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

enum class CorpusFormat { Jsonl, Csv };

CorpusFormat corpus_format_from_string(std::string_view s);
/// Guesses from the file extension; ".csv" is CSV, anything else JSONL.
CorpusFormat corpus_format_for(const std::filesystem::path& path);

/// How raw label strings become harmful/benign.
///
/// Lookup order: `explicit_map`, then (after trimming and lowercasing) the
/// built-in names. Anything still unmatched is harmful when
/// `collapse_unknown_to_harmful` is set (the default: every class that is
/// not recognizably benign counts as harmful), otherwise a validation error.
/// An empty label field means "unlabeled".
struct LabelMapping {
  std::map<std::string, Label> explicit_map;
  bool collapse_unknown_to_harmful = true;

  /// Parses "raw=harmful,raw2=benign" into explicit_map.
  static LabelMapping parse(std::string_view spec, bool collapse_unknown_to_harmful);
  std::optional<Label> map(std::string_view raw) const;
};

struct ColumnMapping {
  std::string id_column = "id";  // may be absent from the file: ids become row indices
  std::string text_column = "text";
  std::string label_column = "label";
  LabelMapping labels;
};

/// Loads and validates a corpus. Text is trimmed and CRLF becomes LF.
/// Problems are collected and reported together with row numbers.
Dataset load_dataset(const std::filesystem::path& path, CorpusFormat format, const ColumnMapping& columns = {});

/// Parses from a stream; `name` is used in diagnostics and as the dataset name.
Dataset parse_dataset(std::istream& in, CorpusFormat format, const ColumnMapping& columns, std::string name);

/// JSONL with fields id, text, label (when set), meta (when non-empty).
std::string serialize_jsonl(const Dataset& dataset);
void write_jsonl(const Dataset& dataset, const std::filesystem::path& path);

/// SHA-256 of the canonical JSONL serialization.
std::string content_hash(const Dataset& dataset);

/// Seeded uniform subsample without replacement, returned in ingestion
/// order. Stratified mode keeps each class within one item of its share and,
/// when n >= 2, draws at least one item of each class present.
Dataset sample(const Dataset& dataset, std::size_t n, std::uint64_t seed, bool stratified);

/// Fraction of entries labeled harmful. All entries must be labeled.
double prevalence(const Dataset& dataset);

/// Trims surrounding whitespace and canonicalizes newlines.
std::string normalize_text(std::string_view text);

}  // namespace elorank
