#include "dancer/aligner.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "dancer/rouge.hpp"

namespace dancer {

namespace {

// Interns every distinct token once per document so the LCS inner loop
// compares ints instead of strings.
struct InternedDocument {
  std::vector<std::vector<std::vector<int>>> sections;  // [k][n] -> token ids
  std::vector<std::vector<int>> summary;                // [m] -> token ids

  explicit InternedDocument(const Document& doc) {
    std::unordered_map<std::string, int> vocab;
    auto intern = [&vocab](const std::vector<std::string>& tokens) {
      std::vector<int> ids;
      ids.reserve(tokens.size());
      for (const auto& t : tokens) {
        auto [it, _] = vocab.try_emplace(t, static_cast<int>(vocab.size()));
        ids.push_back(it->second);
      }
      return ids;
    };
    sections.reserve(doc.sections.size());
    for (const auto& sec : doc.sections) {
      auto& dest = sections.emplace_back();
      dest.reserve(sec.sentences.size());
      for (const auto& sent : sec.sentences) dest.push_back(intern(sent.tokens));
    }
    summary.reserve(doc.summary.size());
    for (const auto& sent : doc.summary) summary.push_back(intern(sent.tokens));
  }
};

}  // namespace

std::vector<Assignment> align_summary(const Document& doc, AlignDenominator denominator) {
  bool has_sentence = false;
  for (const auto& sec : doc.sections) has_sentence |= !sec.sentences.empty();
  if (!has_sentence) throw std::invalid_argument("align_summary: document has no sentences");
  if (doc.summary.empty()) throw std::invalid_argument("align_summary: document has no summary");

  const InternedDocument interned(doc);
  std::vector<Assignment> out;
  out.reserve(doc.summary.size());

  for (std::size_t m = 0; m < interned.summary.size(); ++m) {
    const auto& summary_ids = interned.summary[m];
    Assignment best{m, 0, 0, -1.0};
    for (std::size_t k = 0; k < interned.sections.size(); ++k) {
      for (std::size_t n = 0; n < interned.sections[k].size(); ++n) {
        const auto& sentence_ids = interned.sections[k][n];
        const auto lcs = static_cast<double>(lcs_length(std::span<const int>(summary_ids),
                                                        std::span<const int>(sentence_ids)));
        const double denom = denominator == AlignDenominator::SummarySentence
                                 ? static_cast<double>(summary_ids.size())
                                 : static_cast<double>(sentence_ids.size());
        const double score = denom > 0.0 ? lcs / denom : 0.0;
        if (score > best.best_score) best = {m, k, n, score};
      }
    }
    out.push_back(best);
  }
  return out;
}

std::vector<SectionTarget> build_section_targets(const Document& doc,
                                                 const std::vector<Assignment>& assignments,
                                                 bool drop_zero_overlap) {
  const std::size_t m_total = doc.summary.size();
  std::vector<bool> seen(m_total, false);
  if (assignments.size() != m_total)
    throw std::invalid_argument("build_section_targets: expected one assignment per summary sentence");
  for (const auto& a : assignments) {
    if (a.summary_sentence_index >= m_total || seen[a.summary_sentence_index])
      throw std::invalid_argument("build_section_targets: duplicate or out-of-range summary index");
    seen[a.summary_sentence_index] = true;
  }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (const auto& a : assignments) {
    if (drop_zero_overlap && a.best_score == 0.0) continue;
    groups[a.section_index].push_back(a.summary_sentence_index);
  }

  std::vector<SectionTarget> out;
  out.reserve(groups.size());
  for (auto& [section, indices] : groups) {
    std::sort(indices.begin(), indices.end());
    out.push_back({section, std::move(indices)});
  }
  return out;
}

std::vector<Sentence> target_sentences(const Document& doc, const SectionTarget& target) {
  std::vector<Sentence> out;
  out.reserve(target.summary_indices.size());
  for (std::size_t m : target.summary_indices) out.push_back(doc.summary.at(m));
  return out;
}

void tally_assignments(const Document& doc, const KeywordTable& table,
                       const std::vector<Assignment>& assignments, SectionTypeCounts& counts) {
  for (const auto& a : assignments) {
    const SectionType type = classify_header(doc.sections.at(a.section_index).header, table);
    ++counts[static_cast<std::size_t>(type)];
  }
}

void tally_alignment(const Document& doc, const KeywordTable& table,
                     AlignDenominator denominator, SectionTypeCounts& counts) {
  tally_assignments(doc, table, align_summary(doc, denominator), counts);
}

std::map<SectionType, double> distribution_from_counts(const SectionTypeCounts& counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  std::map<SectionType, double> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out[static_cast<SectionType>(i)] =
        total == 0 ? 0.0 : static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return out;
}

std::map<SectionType, double> alignment_distribution(const std::vector<Document>& corpus,
                                                     const KeywordTable& table,
                                                     AlignDenominator denominator) {
  if (corpus.empty()) throw std::invalid_argument("alignment_distribution: empty corpus");
  SectionTypeCounts counts{};
  for (const auto& doc : corpus) tally_alignment(doc, table, denominator, counts);
  return distribution_from_counts(counts);
}

std::map<SectionType, double> alignment_distribution(JsonlDocumentReader& corpus,
                                                     const KeywordTable& table,
                                                     AlignDenominator denominator) {
  SectionTypeCounts counts{};
  std::size_t docs = 0;
  while (auto doc = corpus.next()) {
    tally_alignment(*doc, table, denominator, counts);
    ++docs;
  }
  if (docs == 0) throw std::invalid_argument("alignment_distribution: empty corpus");
  return distribution_from_counts(counts);
}

}  // namespace dancer
