#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "dancer/corpus.hpp"
#include "dancer/section_classify.hpp"

namespace dancer {

// Which sequence's length divides the LCS when scoring a (summary sentence,
// document sentence) pair. SummarySentence keeps the denominator constant
// per summary sentence, so the argmax reduces to raw LCS length and short
// document sentences gain no edge; DocumentSentence is the literal
// candidate-is-document-sentence reading.
enum class AlignDenominator { SummarySentence, DocumentSentence };

struct Assignment {
  std::size_t summary_sentence_index = 0;  // m
  std::size_t section_index = 0;           // argmax section
  std::size_t best_sentence_index = 0;     // argmax sentence within it
  double best_score = 0.0;
};

// One Assignment per summary sentence; ties broken by smallest section
// index, then smallest sentence index. Throws std::invalid_argument when the
// document has no sentences or no summary.
std::vector<Assignment> align_summary(const Document& doc,
                                      AlignDenominator denominator = AlignDenominator::SummarySentence);

struct SectionTarget {
  std::size_t section_index = 0;
  std::vector<std::size_t> summary_indices;  // ascending original positions
};

// Groups assignments per section, ordered by section index; summary order is
// preserved within each group. Assignments must cover summary indices
// 0..M-1 exactly once. With drop_zero_overlap, sentences whose best score is
// zero join no target.
std::vector<SectionTarget> build_section_targets(const Document& doc,
                                                 const std::vector<Assignment>& assignments,
                                                 bool drop_zero_overlap = false);

std::vector<Sentence> target_sentences(const Document& doc, const SectionTarget& target);

// Per-type tally of assigned summary sentences, indexed by SectionType.
using SectionTypeCounts = std::array<std::uint64_t, kNumSectionTypes>;

void tally_assignments(const Document& doc, const KeywordTable& table,
                       const std::vector<Assignment>& assignments, SectionTypeCounts& counts);

void tally_alignment(const Document& doc, const KeywordTable& table,
                     AlignDenominator denominator, SectionTypeCounts& counts);

std::map<SectionType, double> distribution_from_counts(const SectionTypeCounts& counts);

// Fraction of all summary sentences landing in each section type. Throws on
// an empty corpus.
std::map<SectionType, double> alignment_distribution(const std::vector<Document>& corpus,
                                                     const KeywordTable& table,
                                                     AlignDenominator denominator = AlignDenominator::SummarySentence);
std::map<SectionType, double> alignment_distribution(JsonlDocumentReader& corpus,
                                                     const KeywordTable& table,
                                                     AlignDenominator denominator = AlignDenominator::SummarySentence);

}  // namespace dancer
