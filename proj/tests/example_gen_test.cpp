#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "dancer/example_gen.hpp"
#include "test_util.hpp"

using namespace dancer;

namespace {

std::string repeated_words(const std::string& stem, int count) {
  std::string out;
  for (int i = 0; i < count; ++i) {
    if (i) out.push_back(' ');
    out += stem + std::to_string(i);
  }
  return out;
}

}  // namespace

TEST_CASE("one example per selected section with a non-empty target") {
  const auto table = KeywordTable::defaults();
  const auto doc = testutil::make_doc(
      "d",
      {{"Introduction", {"alpha beta gamma"}},
       {"Methods", {"delta epsilon zeta"}},
       {"Results", {"eta theta iota"}},
       {"Conclusion", {"kappa lambda mu"}}},
      {"alpha beta", "delta epsilon", "kappa lambda"});
  const auto examples = generate_examples(doc, GenConfig{}, table);
  REQUIRE(examples.size() == 3);  // Results received no target sentence
  CHECK(examples[0].section_index == 0);
  CHECK(examples[0].section_type == SectionType::Introduction);
  CHECK(examples[1].section_index == 1);
  CHECK(examples[2].section_index == 3);
  CHECK(examples[2].target == std::vector<std::string>{"kappa", "lambda"});
}

TEST_CASE("sections outside the selected set produce no examples") {
  const auto table = KeywordTable::defaults();
  const auto doc = testutil::make_doc(
      "d",
      {{"Related Work", {"alpha beta gamma"}}, {"Methods", {"delta epsilon"}}},
      {"alpha beta gamma", "delta epsilon"});
  const auto examples = generate_examples(doc, GenConfig{}, table);
  REQUIRE(examples.size() == 1);  // the literature-assigned sentence is dropped
  CHECK(examples[0].section_index == 1);
  CHECK(examples[0].section_type == SectionType::Methods);
}

TEST_CASE("source truncates to the configured word cap") {
  const auto table = KeywordTable::defaults();
  const auto doc = testutil::make_doc(
      "d", {{"Introduction", {repeated_words("w", 800)}}}, {"w0 w1 w2"});
  const auto examples = generate_examples(doc, GenConfig{}, table);
  REQUIRE(examples.size() == 1);
  CHECK(examples[0].source.size() == 500);
  CHECK(examples[0].source.front() == "w0");
  CHECK(examples[0].source.back() == "w499");
}

TEST_CASE("target truncates to the configured word cap") {
  const auto table = KeywordTable::defaults();
  std::vector<std::string> summary;
  for (int i = 0; i < 13; ++i) summary.push_back(repeated_words("t", 10));  // 130 words total
  const auto doc =
      testutil::make_doc("d", {{"Introduction", {"t0 t1 t2 t3"}}}, summary);
  const auto examples = generate_examples(doc, GenConfig{}, table);
  REQUIRE(examples.size() == 1);
  CHECK(examples[0].target.size() == 100);
}

TEST_CASE("caps hold on random documents") {
  const auto table = KeywordTable::defaults();
  GenConfig config;
  config.max_source_words = 7;
  config.max_target_words = 5;
  std::mt19937 rng(55);
  for (int i = 0; i < 200; ++i) {
    auto doc = testutil::random_doc(rng, 4, 5, 4, 4);
    for (std::size_t k = 0; k < doc.sections.size(); ++k) {
      doc.sections[k].header = (k % 2 == 0) ? "Methods" : "Results";
    }
    for (const auto& ex : generate_examples(doc, config, table)) {
      CHECK(!ex.source.empty());
      CHECK(!ex.target.empty());
      CHECK(ex.source.size() <= config.max_source_words);
      CHECK(ex.target.size() <= config.max_target_words);
    }
  }
}

TEST_CASE("sentence-boundary truncation keeps whole sentences") {
  const auto table = KeywordTable::defaults();
  GenConfig config;
  config.max_source_words = 5;
  GenOptions options;
  options.sentence_truncation = true;
  const auto doc = testutil::make_doc(
      "d", {{"Introduction", {"a b c", "d e f", "g h"}}}, {"a b c"});
  const auto examples = generate_examples(doc, config, table, options);
  REQUIRE(examples.size() == 1);
  CHECK(examples[0].source == std::vector<std::string>{"a", "b", "c"});  // 3+3 > 5
}

TEST_CASE("fallback-first-k rescues header-less documents") {
  const auto table = KeywordTable::defaults();
  const auto doc = testutil::make_doc(
      "d", {{"Part One", {"alpha beta"}}, {"Part Two", {"gamma delta"}}},
      {"alpha beta", "gamma delta"});
  CHECK(generate_examples(doc, GenConfig{}, table).empty());
  GenOptions options;
  options.fallback_first_k = 1;
  const auto examples = generate_examples(doc, GenConfig{}, table, options);
  REQUIRE(examples.size() == 1);
  CHECK(examples[0].section_type == SectionType::Introduction);
  CHECK(examples[0].target == std::vector<std::string>{"alpha", "beta"});
}

TEST_CASE("serialization round-trips and counts") {
  const auto table = KeywordTable::defaults();
  const auto docs =
      load_dataset(std::string(FIXTURES_DIR) + "/mini.jsonl", DatasetFormat::ArxivPubmed);
  std::vector<TrainingExample> all;
  for (const auto& doc : docs) {
    const auto examples = generate_examples(doc, GenConfig{}, table);
    all.insert(all.end(), examples.begin(), examples.end());
  }
  REQUIRE(!all.empty());

  std::ostringstream out;
  CHECK(write_examples(all, out) == all.size());
  std::istringstream in(out.str());
  const auto reloaded = read_examples(in);
  CHECK(reloaded == all);

  // byte determinism for a fixed input stream
  std::ostringstream again;
  write_examples(all, again);
  CHECK(again.str() == out.str());
}

TEST_CASE("zero examples write an empty file with count zero") {
  std::ostringstream out;
  CHECK(write_examples({}, out) == 0);
  CHECK(out.str().empty());
}

TEST_CASE("mini corpus example count matches the recount oracle") {
  const auto table = KeywordTable::defaults();
  const auto docs =
      load_dataset(std::string(FIXTURES_DIR) + "/mini.jsonl", DatasetFormat::ArxivPubmed);
  std::size_t total = 0;
  for (const auto& doc : docs) total += generate_examples(doc, GenConfig{}, table).size();
  CHECK(total == 26);  // frozen from tests/fixtures/recount.py
}

TEST_CASE("invalid documents yield no examples instead of failing") {
  const auto table = KeywordTable::defaults();
  Document empty;
  empty.doc_id = "x";
  CHECK(generate_examples(empty, GenConfig{}, table).empty());
}
