#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dancer/corpus.hpp"
#include "dancer/example_gen.hpp"
#include "dancer/section_classify.hpp"
#include "dancer/summarizer.hpp"

namespace dancer {

struct SummaryPart {
  std::size_t section_index = 0;
  SectionType section_type = SectionType::Other;
  std::string partial;
};

struct SummaryHypothesis {
  std::string doc_id;
  std::vector<SummaryPart> parts;  // ascending section_index
  std::string final;               // recombine(parts)
};

// Non-empty partials joined with a single space, in part order.
std::string recombine(const std::vector<SummaryPart>& parts);

struct ComposeOptions {
  std::size_t fallback_first_k = 0;
  // Output cap for the built-in engines; adapters decide their own length.
  std::size_t builtin_output_cap = 120;
};

// Selects sections, summarizes each one independently (no target or
// cross-section information flows in), and concatenates the partials in
// document order. Per-section failures leave an empty partial and a
// diagnostic; zero selected sections yield an empty final plus a diagnostic.
SummaryHypothesis summarize_document(const Document& doc, const SummarizerSpec& spec,
                                     const KeywordTable& table, const GenConfig& config,
                                     const ComposeOptions& options = {},
                                     const DiagnosticSink& diagnostics = {});

// Fans (document, section) tasks out over `workers` threads; external specs
// get one adapter process per worker and never interleave requests on a
// pipe. Output order and bytes are independent of the worker count.
std::vector<SummaryHypothesis> summarize_corpus(const std::vector<Document>& docs,
                                                const SummarizerSpec& spec,
                                                const KeywordTable& table, const GenConfig& config,
                                                std::size_t workers,
                                                const ComposeOptions& options = {},
                                                const DiagnosticSink& diagnostics = {});

// Streaming variant: documents are pulled from the reader in bounded chunks
// and hypotheses handed to `emit` in input order.
void summarize_corpus(JsonlDocumentReader& docs, const SummarizerSpec& spec,
                      const KeywordTable& table, const GenConfig& config, std::size_t workers,
                      const std::function<void(SummaryHypothesis)>& emit,
                      const ComposeOptions& options = {}, const DiagnosticSink& diagnostics = {});

void write_hypothesis(const SummaryHypothesis& hyp, std::ostream& out);
std::vector<SummaryHypothesis> read_hypotheses(const std::string& path);

}  // namespace dancer
