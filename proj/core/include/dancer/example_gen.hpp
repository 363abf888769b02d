#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "dancer/aligner.hpp"
#include "dancer/corpus.hpp"
#include "dancer/section_classify.hpp"

namespace dancer {

struct GenConfig {
  std::size_t max_source_words = 500;
  std::size_t max_target_words = 100;
  std::set<SectionType> selected_types = default_selected_types();
};

// One (section text, section summary) training pair.
struct TrainingExample {
  std::string doc_id;
  std::size_t section_index = 0;
  SectionType section_type = SectionType::Other;
  std::vector<std::string> source;
  std::vector<std::string> target;

  bool operator==(const TrainingExample&) const = default;
};

struct GenOptions {
  AlignDenominator denominator = AlignDenominator::SummarySentence;
  bool drop_zero_overlap = false;
  // Truncate at sentence boundaries instead of cutting mid-sentence.
  bool sentence_truncation = false;
  std::size_t fallback_first_k = 0;
};

// Aligns the summary over the whole document, groups it into section
// targets, and emits one example per selected section that received at
// least one target sentence, in document order. Documents yielding nothing
// return an empty list.
std::vector<TrainingExample> generate_examples(const Document& doc, const GenConfig& config,
                                               const KeywordTable& table,
                                               const GenOptions& options = {});

// Same, reusing alignment the caller already computed.
std::vector<TrainingExample> generate_examples(const Document& doc, const GenConfig& config,
                                               const KeywordTable& table,
                                               const GenOptions& options,
                                               const std::vector<Assignment>& assignments);

// UTF-8 JSONL, one example per line, source/target as space-joined token
// strings. Returns the number of lines written.
std::size_t write_examples(const std::vector<TrainingExample>& examples, std::ostream& out);
std::size_t write_examples(const std::vector<TrainingExample>& examples, const std::string& path);

std::vector<TrainingExample> read_examples(const std::string& path);
std::vector<TrainingExample> read_examples(std::istream& in);

}  // namespace dancer
