#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dancer {

// One sentence of text plus its normalized word tokens. Tokens are derived
// from text by tokenize(); re-tokenizing text always yields the same tokens.
struct Sentence {
  std::string text;
  std::vector<std::string> tokens;
};

Sentence make_sentence(std::string text);

struct Section {
  std::string header;
  std::vector<Sentence> sentences;
  std::size_t index = 0;  // position within the parent document

  std::size_t word_count() const;
};

struct Document {
  std::string doc_id;
  std::vector<Section> sections;   // source order, index == position
  std::vector<Sentence> summary;   // reference abstract, original order

  bool valid() const { return !sections.empty() && !summary.empty(); }
  std::size_t body_word_count() const;
  std::size_t summary_word_count() const;
};

// Lowercases, splits on whitespace and strips leading/trailing ASCII
// punctuation from each token. Intra-token hyphens survive, and so do the
// dataset placeholder markers (@xmath0, @xcite, ...) since '@' is never
// stripped. Pure-punctuation tokens vanish.
std::vector<std::string> tokenize(std::string_view text);

// Rule-based splitter: boundaries at . ! ? followed by whitespace and a
// capital letter or digit (an optional run of quotes/brackets may sit in
// between). A '.' preceded by a known abbreviation or a single letter does
// not end a sentence. Concatenating the returned texts reconstructs the
// input up to whitespace.
std::vector<Sentence> split_sentences(std::string_view text);

bool is_abbreviation(std::string_view word);

// Utilities shared by the example generator and the prediction pipeline.
std::vector<std::string> concat_tokens(const std::vector<Sentence>& sentences);
std::vector<std::string> head_tokens(const std::vector<Sentence>& sentences, std::size_t max_words);
// Keeps whole sentences while the running token total fits; an oversized
// leading sentence is cut to max_words tokens so the cap always holds.
std::vector<Sentence> truncate_sentences(const std::vector<Sentence>& sentences, std::size_t max_words);

std::string join_tokens(const std::vector<std::string>& tokens);

enum class DatasetFormat {
  ArxivPubmed,  // article_id / sections / section_names / abstract_text
  Native,       // doc_id / sections[{header, sentences|text}] / summary
};

std::optional<DatasetFormat> parse_dataset_format(std::string_view name);
std::string_view to_string(DatasetFormat format);

using DiagnosticSink = std::function<void(const std::string&)>;

// Streams one Document per JSONL line. Malformed or unusable records are
// skipped and reported through the sink with their line number.
class JsonlDocumentReader {
 public:
  JsonlDocumentReader(const std::string& path, DatasetFormat format,
                      DiagnosticSink diagnostics = {});
  ~JsonlDocumentReader();

  JsonlDocumentReader(const JsonlDocumentReader&) = delete;
  JsonlDocumentReader& operator=(const JsonlDocumentReader&) = delete;

  std::optional<Document> next();

  std::size_t lines_read() const { return lines_read_; }
  std::size_t records_skipped() const { return records_skipped_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  DatasetFormat format_;
  DiagnosticSink diagnostics_;
  std::size_t lines_read_ = 0;
  std::size_t records_skipped_ = 0;
};

// Parses a single JSONL record; returns nullopt (with a diagnostic) when the
// record is malformed or yields no usable sections/summary.
std::optional<Document> parse_document_line(std::string_view line, DatasetFormat format,
                                            std::size_t line_number,
                                            const DiagnosticSink& diagnostics);

std::vector<Document> load_dataset(const std::string& path, DatasetFormat format,
                                   DiagnosticSink diagnostics = {});

// One line of the native JSONL layout, terminated with '\n'.
void write_native(const Document& doc, std::ostream& out);

}  // namespace dancer
