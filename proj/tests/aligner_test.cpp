#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "dancer/aligner.hpp"
#include "dancer/rouge.hpp"
#include "test_util.hpp"

using namespace dancer;

namespace {

// Brute-force argmax over every (section, sentence) pair, straight off the
// string tokens; ties resolved by smallest section then sentence index.
std::vector<Assignment> align_oracle(const Document& doc, AlignDenominator den) {
  std::vector<Assignment> out;
  for (std::size_t m = 0; m < doc.summary.size(); ++m) {
    const auto& a = doc.summary[m].tokens;
    Assignment best{m, 0, 0, -1.0};
    for (std::size_t k = 0; k < doc.sections.size(); ++k) {
      for (std::size_t n = 0; n < doc.sections[k].sentences.size(); ++n) {
        const auto& s = doc.sections[k].sentences[n].tokens;
        const double score = den == AlignDenominator::SummarySentence
                                 ? rouge_l_precision(s, a)
                                 : rouge_l_precision(a, s);
        if (score > best.best_score) best = {m, k, n, score};
      }
    }
    out.push_back(best);
  }
  return out;
}

bool same_assignments(const std::vector<Assignment>& a, const std::vector<Assignment>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].summary_sentence_index != b[i].summary_sentence_index ||
        a[i].section_index != b[i].section_index ||
        a[i].best_sentence_index != b[i].best_sentence_index ||
        a[i].best_score != b[i].best_score) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("exact-match sentences align with score 1") {
  const auto doc = testutil::make_doc(
      "d", {{"A", {"the cat sat"}}, {"B", {"dogs bark loudly"}}}, {"the cat sat"});
  const auto assignments = align_summary(doc);
  REQUIRE(assignments.size() == 1);
  CHECK(assignments[0].section_index == 0);
  CHECK(assignments[0].best_sentence_index == 0);
  CHECK(assignments[0].best_score == 1.0);
}

TEST_CASE("ties go to the earliest section") {
  const auto doc = testutil::make_doc("d",
                                      {{"A", {"shared words here"}},
                                       {"B", {"unrelated text entirely"}},
                                       {"C", {"shared words here"}}},
                                      {"shared words here"});
  const auto assignments = align_summary(doc);
  REQUIRE(assignments.size() == 1);
  CHECK(assignments[0].section_index == 0);
  CHECK(assignments[0].best_score == 1.0);
}

TEST_CASE("mixed-overlap document matches the brute-force oracle") {
  const auto doc = testutil::make_doc(
      "d",
      {{"A", {"alpha beta gamma", "delta epsilon"}},
       {"B", {"alpha beta", "zeta eta theta"}},
       {"C", {"beta gamma delta epsilon", "iota kappa"}}},
      {"alpha beta gamma delta", "zeta eta", "iota kappa epsilon"});
  for (auto den : {AlignDenominator::SummarySentence, AlignDenominator::DocumentSentence}) {
    CHECK(same_assignments(align_summary(doc, den), align_oracle(doc, den)));
  }
}

TEST_CASE("random documents match the brute-force oracle exactly") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 500; ++i) {
    const auto doc = testutil::random_doc(rng, 4, 5, 4, 4);
    const auto got = align_summary(doc);
    CHECK(same_assignments(got, align_oracle(doc, AlignDenominator::SummarySentence)));
    for (const auto& a : got) {
      CHECK(a.best_score >= 0.0);
      CHECK(a.best_score <= 1.0);
    }
  }
}

TEST_CASE("denominator conventions disagree where sentence lengths differ") {
  // the long document sentence contains the whole summary sentence; the
  // short one is a fragment of it
  const auto doc = testutil::make_doc(
      "d", {{"A", {"x y"}}, {"B", {"a b c x y z"}}}, {"a b c x y"});
  const auto by_summary = align_summary(doc, AlignDenominator::SummarySentence);
  const auto by_doc = align_summary(doc, AlignDenominator::DocumentSentence);
  CHECK(by_summary[0].section_index == 1);  // LCS 5 beats LCS 2
  CHECK(by_doc[0].section_index == 0);      // 2/2 beats 5/6
}

TEST_CASE("verbatim summary sentences always score 1") {
  std::mt19937 rng(404);
  for (int i = 0; i < 100; ++i) {
    auto doc = testutil::random_doc(rng, 3, 4, 1, 5);
    const auto& sec = doc.sections[rng() % doc.sections.size()];
    doc.summary[0] = sec.sentences[rng() % sec.sentences.size()];
    const auto assignments = align_summary(doc);
    CHECK(assignments[0].best_score == 1.0);
  }
}

TEST_CASE("alignment stability under within-section permutation") {
  std::mt19937 rng(808);
  int checked = 0;
  for (int i = 0; i < 300 && checked < 100; ++i) {
    auto doc = testutil::random_doc(rng, 3, 4, 2, 5);
    const auto base = align_summary(doc);

    // keep only tie-free instances: the best section must win strictly
    bool tie_free = true;
    for (std::size_t m = 0; m < doc.summary.size() && tie_free; ++m) {
      const auto& a = doc.summary[m].tokens;
      double best = -1.0, second = -1.0;
      for (const auto& sec : doc.sections) {
        double section_best = -1.0;
        for (const auto& s : sec.sentences)
          section_best = std::max(section_best, rouge_l_precision(s.tokens, a));
        if (section_best > best) {
          second = best;
          best = section_best;
        } else {
          second = std::max(second, section_best);
        }
      }
      if (best == second) tie_free = false;
    }
    if (!tie_free) continue;
    ++checked;

    for (auto& sec : doc.sections) {
      std::shuffle(sec.sentences.begin(), sec.sentences.end(), rng);
    }
    const auto shuffled = align_summary(doc);
    for (std::size_t m = 0; m < base.size(); ++m) {
      CHECK(shuffled[m].section_index == base[m].section_index);
    }
  }
  CHECK(checked == 100);
}

TEST_CASE("align_summary rejects empty inputs") {
  Document empty;
  empty.doc_id = "x";
  CHECK_THROWS_AS(align_summary(empty), std::invalid_argument);

  auto no_summary = testutil::make_doc("d", {{"A", {"a b"}}}, {});
  CHECK_THROWS_AS(align_summary(no_summary), std::invalid_argument);
}

TEST_CASE("build_section_targets groups by section in summary order") {
  const auto doc = testutil::make_doc(
      "d", {{"A", {"a b"}}, {"B", {"c d"}}}, {"s zero", "s one", "s two"});
  const std::vector<Assignment> assignments = {
      {0, 0, 0, 0.5}, {1, 1, 0, 0.5}, {2, 0, 0, 0.5}};
  const auto targets = build_section_targets(doc, assignments);
  REQUIRE(targets.size() == 2);
  CHECK(targets[0].section_index == 0);
  CHECK(targets[0].summary_indices == std::vector<std::size_t>{0, 2});
  CHECK(targets[1].section_index == 1);
  CHECK(targets[1].summary_indices == std::vector<std::size_t>{1});

  const auto sentences = target_sentences(doc, targets[0]);
  REQUIRE(sentences.size() == 2);
  CHECK(sentences[0].text == "s zero");
  CHECK(sentences[1].text == "s two");
}

TEST_CASE("single-section grouping keeps the whole summary in order") {
  const auto doc = testutil::make_doc("d", {{"A", {"a"}}}, {"one", "two", "three"});
  const auto targets = build_section_targets(doc, align_summary(doc));
  REQUIRE(targets.size() == 1);
  CHECK(targets[0].summary_indices == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("build_section_targets validates coverage") {
  const auto doc = testutil::make_doc("d", {{"A", {"a"}}}, {"one", "two"});
  CHECK(build_section_targets(Document{doc.doc_id, doc.sections, {}}, {}).empty());
  CHECK_THROWS_AS(build_section_targets(doc, {{0, 0, 0, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(build_section_targets(doc, {{0, 0, 0, 0.5}, {0, 0, 0, 0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_section_targets(doc, {{0, 0, 0, 0.5}, {5, 0, 0, 0.5}}),
                  std::invalid_argument);
}

TEST_CASE("partition property holds on random documents") {
  std::mt19937 rng(606);
  for (int i = 0; i < 300; ++i) {
    const auto doc = testutil::random_doc(rng, 4, 5, 4, 4);
    const auto targets = build_section_targets(doc, align_summary(doc));
    std::vector<bool> seen(doc.summary.size(), false);
    for (const auto& t : targets) {
      for (std::size_t pos = 0; pos + 1 < t.summary_indices.size(); ++pos)
        CHECK(t.summary_indices[pos] < t.summary_indices[pos + 1]);
      for (std::size_t m : t.summary_indices) {
        REQUIRE(m < seen.size());
        CHECK(!seen[m]);
        seen[m] = true;
      }
    }
    for (bool covered : seen) CHECK(covered);
  }
}

TEST_CASE("drop-zero-overlap removes only zero-score sentences") {
  const auto doc = testutil::make_doc("d", {{"A", {"alpha beta"}}}, {"alpha beta", "qq ww"});
  const auto assignments = align_summary(doc);
  CHECK(assignments[1].best_score == 0.0);
  const auto kept = build_section_targets(doc, assignments, true);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].summary_indices == std::vector<std::size_t>{0});
}

TEST_CASE("alignment distribution on a one-section-type document") {
  const auto table = KeywordTable::defaults();
  const auto doc = testutil::make_doc("d", {{"Introduction", {"alpha beta", "gamma delta"}}},
                                      {"alpha beta", "gamma"});
  const auto dist = alignment_distribution(std::vector<Document>{doc}, table);
  CHECK(dist.at(SectionType::Introduction) == 1.0);
  CHECK(dist.at(SectionType::Methods) == 0.0);
  CHECK(dist.at(SectionType::Other) == 0.0);

  double total = 0.0;
  for (const auto& [_, fraction] : dist) total += fraction;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("alignment distribution rejects an empty corpus") {
  const auto table = KeywordTable::defaults();
  CHECK_THROWS_AS(alignment_distribution(std::vector<Document>{}, table), std::invalid_argument);
}
