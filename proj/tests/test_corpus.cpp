// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <sstream>

#include "elorank/corpus.hpp"
#include "elorank/csv.hpp"
#include "elorank/errors.hpp"
#include "test_support.hpp"

namespace elorank {
namespace {

Dataset parse(const std::string& content, CorpusFormat format, const ColumnMapping& columns = {}) {
  std::istringstream in(content);
  return parse_dataset(in, format, columns, "input");
}

std::string error_of(const std::string& content, CorpusFormat format, const ColumnMapping& columns = {}) {
  try {
    parse(content, format, columns);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

TEST(Corpus, LoadsJsonl) {
  const auto d = parse(
      "{\"id\":\"a\",\"text\":\"  hello\\r\\nworld \",\"label\":\"harmful\"}\n"
      "\n"
      "{\"id\":7,\"text\":\"second\",\"label\":\"benign\",\"meta\":{\"latent\":0.5}}\n"
      "{\"id\":\"c\",\"text\":\"third\"}\n",
      CorpusFormat::Jsonl);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d.at("a").text, "hello\nworld");
  EXPECT_EQ(d.at("a").label, Label::Harmful);
  EXPECT_EQ(d.at("7").label, Label::Benign);
  EXPECT_EQ(d.at("7").meta.at("latent"), "0.5");
  EXPECT_FALSE(d.at("c").label.has_value());
  EXPECT_FALSE(d.fully_labeled());
  EXPECT_EQ(d.gold().size(), 2u);
  EXPECT_EQ(d.ids(), (std::vector<std::string>{"a", "7", "c"}));
}

TEST(Corpus, LoadsCsvWithCustomColumns) {
  ColumnMapping cols;
  cols.id_column = "tweet_id";
  cols.text_column = "tweet";
  cols.label_column = "class";
  const auto d = parse(
      "tweet_id,tweet,class,source\n"
      "1,\"quoted, with comma\",hate,x\n"
      "2,\"multi\nline \"\"q\"\"\",neither,y\n",
      CorpusFormat::Csv, cols);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.at("1").text, "quoted, with comma");
  EXPECT_EQ(d.at("2").text, "multi\nline \"q\"");
  EXPECT_EQ(d.at("1").label, Label::Harmful);
  EXPECT_EQ(d.at("2").label, Label::Benign);
  EXPECT_EQ(d.at("1").meta.at("source"), "x");
}

TEST(Corpus, MissingIdColumnUsesRowIndex) {
  const auto d = parse("text,label\nfirst,1\nsecond,0\n", CorpusFormat::Csv);
  EXPECT_EQ(d.ids(), (std::vector<std::string>{"0", "1"}));
  EXPECT_EQ(d.at("0").label, Label::Harmful);
}

TEST(Corpus, ReportsAllRowProblems) {
  const auto msg = error_of(
      "{\"id\":\"a\",\"text\":\"x\"}\n"
      "{\"id\":\"a\",\"text\":\"y\"}\n"
      "{\"id\":\"b\",\"text\":\"   \"}\n"
      "not json\n",
      CorpusFormat::Jsonl);
  EXPECT_NE(msg.find("not a JSON object"), std::string::npos) << msg;
  const auto msg2 = error_of("{\"id\":\"a\",\"text\":\"x\"}\n{\"id\":\"a\",\"text\":\"y\"}\n{\"id\":\"b\",\"text\":\"\"}\n",
                             CorpusFormat::Jsonl);
  EXPECT_NE(msg2.find("row 2: duplicate id 'a'"), std::string::npos) << msg2;
  EXPECT_NE(msg2.find("row 3: empty text"), std::string::npos) << msg2;
  EXPECT_NE(error_of("id,label\n1,x\n", CorpusFormat::Csv).find("no text column"), std::string::npos);
  EXPECT_NE(error_of("id,text\n1\n", CorpusFormat::Csv).find("expected 2 fields"), std::string::npos);
}

TEST(Corpus, LabelMapping) {
  const auto lenient = LabelMapping::parse("offensive_language=benign", true);
  EXPECT_EQ(lenient.map("offensive_language"), Label::Benign);
  EXPECT_EQ(lenient.map(" Harmful "), Label::Harmful);
  EXPECT_EQ(lenient.map("NEITHER"), Label::Benign);
  EXPECT_EQ(lenient.map("hate_speech"), Label::Harmful);
  EXPECT_FALSE(lenient.map("").has_value());
  const auto strict = LabelMapping::parse("", false);
  EXPECT_THROW(strict.map("hate_speech"), ValidationError);
  EXPECT_EQ(strict.map("0"), Label::Benign);
  EXPECT_THROW(LabelMapping::parse("novalue", true), ValidationError);
  EXPECT_THROW(LabelMapping::parse("x=maybe", true), ValidationError);

  ColumnMapping cols;
  cols.labels = strict;
  EXPECT_NE(error_of("{\"id\":\"a\",\"text\":\"x\",\"label\":\"odd\"}\n", CorpusFormat::Jsonl, cols).find("row 1"),
            std::string::npos);
}

TEST(Corpus, JsonlRoundTripAndHash) {
  testing::TempDir dir;
  auto d = parse("{\"id\":\"a\",\"text\":\"x, \\\"y\\\"\",\"label\":\"harmful\",\"meta\":{\"k\":\"v\"}}\n"
                 "{\"id\":\"b\",\"text\":\"z\"}\n",
                 CorpusFormat::Jsonl);
  write_jsonl(d, dir / "out.jsonl");
  const auto back = load_dataset(dir / "out.jsonl", CorpusFormat::Jsonl);
  EXPECT_EQ(back.entries(), d.entries());
  EXPECT_EQ(content_hash(back), content_hash(d));
  EXPECT_EQ(content_hash(d).size(), 64u);
  const auto other = parse("{\"id\":\"a\",\"text\":\"changed\"}\n", CorpusFormat::Jsonl);
  EXPECT_NE(content_hash(other), content_hash(d));
  EXPECT_THROW(load_dataset(dir / "missing.jsonl", CorpusFormat::Jsonl), ValidationError);
}

TEST(Corpus, FormatSelection) {
  EXPECT_EQ(corpus_format_for("x.CSV"), CorpusFormat::Csv);
  EXPECT_EQ(corpus_format_for("x.jsonl"), CorpusFormat::Jsonl);
  EXPECT_EQ(corpus_format_from_string("csv"), CorpusFormat::Csv);
  EXPECT_THROW(corpus_format_from_string("xml"), ValidationError);
}

Dataset balanced(int harmful, int benign) {
  std::vector<std::pair<std::string, Label>> items;
  for (int i = 0; i < harmful; ++i) items.emplace_back("h" + std::to_string(i), Label::Harmful);
  for (int i = 0; i < benign; ++i) items.emplace_back("b" + std::to_string(i), Label::Benign);
  return testing::make_dataset(items);
}

TEST(Sample, SubsetDeterministicAndOrdered) {
  const auto d = balanced(30, 70);
  const auto s = sample(d, 20, 4, false);
  EXPECT_EQ(s.size(), 20u);
  EXPECT_EQ(s, sample(d, 20, 4, false));
  EXPECT_NE(s, sample(d, 20, 5, false));
  std::size_t last = 0;
  const auto ids = d.ids();
  for (const auto& e : s.entries()) {
    const auto pos = static_cast<std::size_t>(std::find(ids.begin(), ids.end(), e.id) - ids.begin());
    EXPECT_LT(pos, ids.size());
    EXPECT_GE(pos + 1, last);
    last = pos + 1;
  }
  EXPECT_THROW(sample(d, 101, 0, false), ValidationError);
}

TEST(Sample, StratifiedKeepsShares) {
  const auto d = balanced(30, 70);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    EXPECT_NEAR(prevalence(sample(d, 21, seed, true)), 0.3, 1.0 / 21.0 + 1e-12);
  }
}

TEST(Sample, Prevalence) {
  EXPECT_DOUBLE_EQ(prevalence(balanced(1, 3)), 0.25);
  const auto unlabeled = parse("{\"id\":\"a\",\"text\":\"x\"}\n", CorpusFormat::Jsonl);
  EXPECT_THROW(prevalence(unlabeled), ValidationError);
}

TEST(Csv, ReaderAndWriter) {
  std::istringstream in("# provenance\na,\"b,c\"\n\"d\"\"e\",\"f\ng\"\n");
  const auto recs = read_csv(in);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].line, 2u);
  EXPECT_EQ(recs[0].fields, (std::vector<std::string>{"a", "b,c"}));
  EXPECT_EQ(recs[1].fields, (std::vector<std::string>{"d\"e", "f\ng"}));
  EXPECT_EQ(csv_line({"plain", "with,comma", "q\"uote"}), "plain,\"with,comma\",\"q\"\"uote\"");
  std::istringstream bad("a,\"open\n");
  EXPECT_THROW(read_csv(bad), ValidationError);
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace elorank
