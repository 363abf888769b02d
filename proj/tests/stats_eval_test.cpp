#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "dancer/stats_eval.hpp"
#include "test_util.hpp"

using namespace dancer;

namespace {

std::vector<std::string> toks(std::initializer_list<const char*> list) {
  return {list.begin(), list.end()};
}

SummaryHypothesis hyp(std::string id, std::string final) {
  SummaryHypothesis h;
  h.doc_id = std::move(id);
  h.final = std::move(final);
  return h;
}

Document ref(std::string id, const std::vector<std::string>& summary_sentences) {
  return testutil::make_doc(std::move(id), {{"Introduction", {"placeholder body ."}}},
                            summary_sentences);
}

}  // namespace

TEST_CASE("copied_ngram_fraction on the stated cases") {
  const auto source = toks({"a", "b", "c", "d"});
  // target verbatim inside source -> 1.0 for all n <= |target|
  const auto inside = toks({"b", "c", "d"});
  for (int n = 1; n <= 3; ++n) CHECK(copied_ngram_fraction(source, inside, n) == 1.0);
  // disjoint vocabulary -> 0.0
  CHECK(copied_ngram_fraction(source, toks({"x", "y"}), 1) == 0.0);
  // distinct-set counting: target bigrams {ab, bd, dc}, source has only {ab}
  CHECK(copied_ngram_fraction(source, toks({"a", "b", "d", "c"}), 2) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // target shorter than n -> 0
  CHECK(copied_ngram_fraction(source, toks({"a"}), 2) == 0.0);
}

TEST_CASE("multiset counting clips on source occurrences") {
  const auto source = toks({"a", "b"});
  const auto target = toks({"a", "a"});
  CHECK(copied_ngram_fraction(source, target, 1) == 1.0);                  // distinct
  CHECK(copied_ngram_fraction(source, target, 1, /*multiset=*/true) == 0.5);
}

TEST_CASE("copied fraction is anti-monotone when target n-grams are distinct") {
  std::mt19937 rng(246);
  for (int i = 0; i < 300; ++i) {
    // all-distinct target tokens make every n-gram distinct
    std::vector<std::string> target;
    const int len = 2 + static_cast<int>(rng() % 8);
    for (int j = 0; j < len; ++j) target.push_back("t" + std::to_string(j));
    std::vector<std::string> source;
    for (int j = 0; j < 12; ++j) {
      if (rng() % 2) {
        source.push_back("t" + std::to_string(rng() % len));
      } else {
        source.push_back("s" + std::to_string(rng() % 4));
      }
    }
    double previous = 2.0;
    for (int n = 1; n <= std::min(4, len); ++n) {
      const double fraction = copied_ngram_fraction(source, target, n);
      CHECK(fraction <= previous + 1e-15);
      previous = fraction;
    }
  }
}

TEST_CASE("corpus stats on a single sized document") {
  const auto table = KeywordTable::defaults();
  std::string body;
  for (int i = 0; i < 100; ++i) body += "w" + std::to_string(i) + " ";
  body += ".";
  std::string abstract;
  for (int i = 0; i < 10; ++i) abstract += "w" + std::to_string(i) + " ";
  abstract += ".";
  const auto doc = testutil::make_doc("d", {{"Introduction", {body}}}, {abstract});

  StatsAccumulator acc;
  acc.add(doc, GenConfig{}, table);
  const auto stats = acc.corpus();
  CHECK(stats.n_documents == 1);
  CHECK(stats.avg_document_words == 100.0);
  CHECK(stats.avg_summary_words == 10.0);
  CHECK(stats.avg_summary_sentences == 1.0);
  CHECK(stats.n_examples == 1);
  CHECK(stats.avg_example_words == 100.0);
  CHECK(stats.avg_target_words == 10.0);
  CHECK(stats.section_distribution.at(SectionType::Introduction) == 1.0);
}

TEST_CASE("empty corpus produces zero stats without dividing by zero") {
  StatsAccumulator acc;
  const auto stats = acc.corpus();
  CHECK(stats.n_documents == 0);
  CHECK(stats.avg_document_words == 0.0);
  CHECK(stats.avg_target_words == 0.0);
  const auto copy = acc.copied();
  for (const auto& [_, fraction] : copy.per_n) CHECK(fraction == 0.0);
}

TEST_CASE("stats are exactly invariant to corpus permutation and sharding") {
  const auto table = KeywordTable::defaults();
  const auto docs =
      load_dataset(std::string(FIXTURES_DIR) + "/mini.jsonl", DatasetFormat::ArxivPubmed);

  StatsAccumulator forward;
  for (const auto& doc : docs) forward.add(doc, GenConfig{}, table);

  auto reversed_docs = docs;
  std::reverse(reversed_docs.begin(), reversed_docs.end());
  StatsAccumulator reversed;
  for (const auto& doc : reversed_docs) reversed.add(doc, GenConfig{}, table);

  StatsAccumulator sharded;
  for (std::size_t i = 0; i < docs.size(); i += 3) {
    StatsAccumulator shard;
    for (std::size_t j = i; j < std::min(i + 3, docs.size()); ++j)
      shard.add(docs[j], GenConfig{}, table);
    sharded.merge(shard);
  }

  const auto a = forward.corpus();
  for (const auto* acc : {&reversed, &sharded}) {
    const auto b = acc->corpus();
    CHECK(a.n_documents == b.n_documents);
    CHECK(a.n_examples == b.n_examples);
    CHECK(a.avg_document_words == b.avg_document_words);
    CHECK(a.avg_summary_words == b.avg_summary_words);
    CHECK(a.avg_example_words == b.avg_example_words);
    CHECK(a.avg_target_words == b.avg_target_words);
    CHECK(a.avg_summary_sentences == b.avg_summary_sentences);
    CHECK(a.section_distribution == b.section_distribution);
  }
  CHECK(forward.copied().per_n == reversed.copied().per_n);
  CHECK(forward.copied().per_n == sharded.copied().per_n);
}

TEST_CASE("mini corpus stats match the recount oracle") {
  // frozen from tests/fixtures/recount.py (see golden.json)
  const auto table = KeywordTable::defaults();
  const auto docs =
      load_dataset(std::string(FIXTURES_DIR) + "/mini.jsonl", DatasetFormat::ArxivPubmed);
  StatsAccumulator acc;
  for (const auto& doc : docs) acc.add(doc, GenConfig{}, table);
  const auto stats = acc.corpus();
  CHECK(stats.n_documents == 10);
  CHECK(stats.n_examples == 26);
  CHECK(stats.avg_document_words == doctest::Approx(64.2).epsilon(1e-12));
  CHECK(stats.avg_summary_words == doctest::Approx(28.6).epsilon(1e-12));
  CHECK(stats.avg_summary_sentences == doctest::Approx(3.1).epsilon(1e-12));
  const auto copy = acc.copied();
  CHECK(copy.per_n.at(1) == doctest::Approx(0.9878048780487805).epsilon(1e-12));
  CHECK(copy.per_n.at(4) == doctest::Approx(0.76953125).epsilon(1e-12));
  // non-increasing per-corpus fractions
  CHECK(copy.per_n.at(1) >= copy.per_n.at(2));
  CHECK(copy.per_n.at(2) >= copy.per_n.at(3));
  CHECK(copy.per_n.at(3) >= copy.per_n.at(4));
}

TEST_CASE("evaluating references against themselves scores 1 with a point CI") {
  std::vector<Document> references;
  std::vector<SummaryHypothesis> hypotheses;
  for (int i = 0; i < 5; ++i) {
    const std::string id = "doc-" + std::to_string(i);
    const std::string text = "sentence number " + std::to_string(i) + " of the abstract .";
    references.push_back(ref(id, {text}));
    hypotheses.push_back(hyp(id, text));
  }
  const auto report = evaluate(hypotheses, references);
  CHECK(report.n_pairs == 5);
  for (const auto& [_, variant] : report.variants) {
    CHECK(variant.mean.f1 == 1.0);
    CHECK(variant.ci_lower == 1.0);
    CHECK(variant.ci_upper == 1.0);
  }
}

TEST_CASE("hand-scored pairs match to 1e-9") {
  // pair 1: identical; pair 2: 2-token prefix of a 3-token reference;
  // pair 3: fully disjoint
  std::vector<Document> references = {
      ref("p1", {"the cat sat"}), ref("p2", {"the cat sat"}), ref("p3", {"the cat sat"})};
  std::vector<SummaryHypothesis> hypotheses = {
      hyp("p1", "the cat sat"), hyp("p2", "the cat"), hyp("p3", "a dog barks")};
  const auto report = evaluate(hypotheses, references);
  REQUIRE(report.n_pairs == 3);

  const auto& r1 = report.variants.at("rouge-1");
  CHECK(r1.mean.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(r1.mean.recall == doctest::Approx(5.0 / 9.0).epsilon(1e-9));
  CHECK(r1.mean.f1 == doctest::Approx(0.6).epsilon(1e-9));

  const auto& r2 = report.variants.at("rouge-2");
  CHECK(r2.mean.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(r2.mean.recall == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r2.mean.f1 == doctest::Approx(5.0 / 9.0).epsilon(1e-9));

  const auto& rl = report.variants.at("rouge-l");
  CHECK(rl.mean.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(rl.mean.recall == doctest::Approx(5.0 / 9.0).epsilon(1e-9));
  CHECK(rl.mean.f1 == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("evaluation joins on doc_id regardless of stream order") {
  std::vector<Document> references;
  std::vector<SummaryHypothesis> hypotheses;
  std::mt19937 rng(11);
  for (int i = 0; i < 12; ++i) {
    const std::string id = "doc-" + std::to_string(i);
    const std::string text = testutil::random_sentence(rng, 8, 3, 9);
    references.push_back(ref(id, {text}));
    hypotheses.push_back(hyp(id, testutil::random_sentence(rng, 8, 3, 9)));
  }
  const auto sorted = evaluate(hypotheses, references);
  auto shuffled = hypotheses;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto moved = evaluate(shuffled, references);
  for (const auto& [name, variant] : sorted.variants) {
    CHECK(variant.mean.f1 == moved.variants.at(name).mean.f1);
    CHECK(variant.ci_lower == moved.variants.at(name).ci_lower);
    CHECK(variant.ci_upper == moved.variants.at(name).ci_upper);
  }

  // parallel scoring changes nothing
  EvalOptions options;
  options.workers = 4;
  const auto parallel = evaluate(hypotheses, references, options);
  for (const auto& [name, variant] : sorted.variants)
    CHECK(variant.mean.f1 == parallel.variants.at(name).mean.f1);
}

TEST_CASE("unmatched ids are reported, zero joins are fatal") {
  std::vector<Document> references = {ref("a", {"x y"}), ref("b", {"x y"})};
  std::vector<SummaryHypothesis> hypotheses = {hyp("b", "x y"), hyp("c", "x y")};
  const auto report = evaluate(hypotheses, references);
  CHECK(report.n_pairs == 1);
  CHECK(report.unmatched_references == std::vector<std::string>{"a"});
  CHECK(report.unmatched_hypotheses == std::vector<std::string>{"c"});

  CHECK_THROWS_AS(evaluate({hyp("zz", "x")}, references), std::runtime_error);
}

TEST_CASE("stemming folds inflected forms at evaluation time") {
  std::vector<Document> references = {ref("a", {"run dog"})};
  std::vector<SummaryHypothesis> hypotheses = {hyp("a", "running dogs")};
  const auto plain = evaluate(hypotheses, references);
  CHECK(plain.variants.at("rouge-1").mean.f1 == 0.0);
  EvalOptions options;
  options.stemming = true;
  const auto stemmed = evaluate(hypotheses, references, options);
  CHECK(stemmed.variants.at("rouge-1").mean.f1 == 1.0);
}

TEST_CASE("reports render in both formats") {
  std::vector<Document> references = {ref("a", {"x y z"})};
  std::vector<SummaryHypothesis> hypotheses = {hyp("a", "x y z")};
  const auto report = evaluate(hypotheses, references);
  const auto j = to_json(report);
  CHECK(j["n_pairs"] == 1);
  CHECK(j["variants"]["rouge-1"]["f1"] == 1.0);
  const auto text = render_text(report);
  CHECK(text.find("rouge-1") != std::string::npos);
  CHECK(text.find("100.00") != std::string::npos);
}
