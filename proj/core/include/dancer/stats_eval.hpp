#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dancer/aligner.hpp"
#include "dancer/compose.hpp"
#include "dancer/corpus.hpp"
#include "dancer/example_gen.hpp"
#include "dancer/rouge.hpp"
#include "dancer/section_classify.hpp"

#include "json.hpp"

namespace dancer {

struct CorpusStats {
  std::uint64_t n_documents = 0;
  std::uint64_t n_examples = 0;
  double avg_document_words = 0.0;
  double avg_summary_words = 0.0;
  double avg_example_words = 0.0;
  double avg_target_words = 0.0;
  double avg_summary_sentences = 0.0;
  std::map<SectionType, double> section_distribution;
};

// Fraction of target n-grams (n = 1..4) found in the source, pooled over the
// corpus (total copied / total distinct target n-grams).
struct CopyStats {
  std::map<int, double> per_n;
};

// |distinct target n-grams present in source| / |distinct target n-grams|;
// 0 when the target is shorter than n. The multiset flag switches to clipped
// occurrence counting.
double copied_ngram_fraction(std::span<const std::string> source,
                             std::span<const std::string> target, int n, bool multiset = false);

// Single-pass, integer-tallied accumulator: merging shards or permuting the
// corpus cannot change any output field.
class StatsAccumulator {
 public:
  void add(const Document& doc, const GenConfig& config, const KeywordTable& table,
           const GenOptions& options = {});
  void merge(const StatsAccumulator& other);

  CorpusStats corpus() const;
  CopyStats copied(bool multiset = false) const;

  std::uint64_t documents() const { return n_documents_; }

 private:
  std::uint64_t n_documents_ = 0;
  std::uint64_t n_examples_ = 0;
  std::uint64_t document_words_ = 0;
  std::uint64_t summary_words_ = 0;
  std::uint64_t summary_sentences_ = 0;
  std::uint64_t example_words_ = 0;
  std::uint64_t target_words_ = 0;
  SectionTypeCounts assigned_counts_{};
  // copied-n-gram tallies, distinct and clipped-multiset countings
  std::array<std::uint64_t, 4> copied_distinct_{};
  std::array<std::uint64_t, 4> total_distinct_{};
  std::array<std::uint64_t, 4> copied_multiset_{};
  std::array<std::uint64_t, 4> total_multiset_{};
};

struct EvalOptions {
  bool stemming = false;
  int resamples = 1000;
  double confidence = 0.95;
  std::uint64_t seed = kDefaultBootstrapSeed;
  std::size_t workers = 1;
};

struct VariantReport {
  RougeScore mean;
  double ci_lower = 0.0;  // bootstrap CI of the mean F1
  double ci_upper = 0.0;
};

struct EvalReport {
  std::size_t n_pairs = 0;
  std::map<std::string, VariantReport> variants;  // rouge-1, rouge-2, rouge-l
  std::vector<std::string> unmatched_hypotheses;  // doc_ids with no reference
  std::vector<std::string> unmatched_references;  // doc_ids with no hypothesis
};

// Joins hypotheses to references on doc_id and scores final summaries
// against reference abstracts. Aggregation follows reference order, so the
// hypothesis stream may arrive shuffled. Throws when no pair joins.
EvalReport evaluate(const std::vector<SummaryHypothesis>& hypotheses,
                    const std::vector<Document>& references, const EvalOptions& options = {});

nlohmann::json to_json(const CorpusStats& stats);
nlohmann::json to_json(const CopyStats& stats);
nlohmann::json to_json(const EvalReport& report);

// Aligned-text renderings; ROUGE means are printed as percentages.
std::string render_text(const CorpusStats& stats);
std::string render_text(const CopyStats& stats);
std::string render_text(const EvalReport& report);

}  // namespace dancer
