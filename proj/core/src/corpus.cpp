#include "dancer/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace dancer {

namespace {

using nlohmann::json;

inline bool ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c;
}

inline bool ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
inline bool ascii_digit(char c) { return c >= '0' && c <= '9'; }

inline bool ascii_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
         (c >= '{' && c <= '~');
}

// '@' is preserved so dataset placeholders (@xmath0, @xcite) stay whole.
inline bool strippable(char c) { return ascii_punct(c) && c != '@'; }

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && ascii_space(s[b])) ++b;
  while (e > b && ascii_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

const std::unordered_set<std::string>& abbreviation_set() {
  static const std::unordered_set<std::string> abbr = {
      "fig",  "figs", "eq",   "eqs",  "sec", "secs", "ref", "refs", "tab",  "tabs",
      "no",   "nos",  "al",   "e.g",  "i.e", "cf",   "vs",  "etc",  "resp", "approx",
      "ca",   "dr",   "mr",   "mrs",  "ms",  "prof", "st",  "jr",   "sr",   "inc",
      "ltd",  "co",   "dept", "univ", "ed",  "eds",  "vol", "vols", "pp",   "chap",
  };
  return abbr;
}

}  // namespace

bool is_abbreviation(std::string_view word) {
  std::string w;
  w.reserve(word.size());
  for (char c : word) w.push_back(ascii_lower(c));
  return abbreviation_set().count(w) > 0;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && ascii_space(text[i])) ++i;
    std::size_t j = i;
    while (j < n && !ascii_space(text[j])) ++j;
    if (j > i) {
      std::size_t b = i, e = j;
      while (b < e && strippable(text[b])) ++b;
      while (e > b && strippable(text[e - 1])) --e;
      if (e > b) {
        std::string tok;
        tok.reserve(e - b);
        for (std::size_t k = b; k < e; ++k) tok.push_back(ascii_lower(text[k]));
        out.push_back(std::move(tok));
      }
    }
    i = j;
  }
  return out;
}

Sentence make_sentence(std::string text) {
  Sentence s;
  s.tokens = tokenize(text);
  s.text = std::move(text);
  return s;
}

namespace {

// Word immediately preceding position `dot` (exclusive), without the dot.
std::string_view preceding_word(std::string_view text, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && !ascii_space(text[b - 1])) --b;
  return text.substr(b, dot - b);
}

bool suppress_period(std::string_view text, std::size_t dot) {
  std::string_view word = preceding_word(text, dot);
  if (word.empty()) return true;  // stray dot
  // Strip enclosing quotes/brackets so ("fig.") still matches.
  std::size_t b = 0, e = word.size();
  while (b < e && strippable(word[b]) && word[b] != '.') ++b;
  while (e > b && strippable(word[e - 1]) && word[e - 1] != '.') --e;
  return is_abbreviation(word.substr(b, e - b));
}

}  // namespace

std::vector<Sentence> split_sentences(std::string_view text) {
  std::vector<Sentence> out;
  const std::size_t n = text.size();
  std::size_t start = 0;

  auto emit = [&](std::size_t end) {
    std::string_view piece = trim(text.substr(start, end - start));
    if (!piece.empty()) out.push_back(make_sentence(std::string(piece)));
    start = end;
  };

  for (std::size_t i = 0; i < n; ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (c == '.' && suppress_period(text, i)) continue;

    // Absorb trailing closers: ." .) .''
    std::size_t end = i + 1;
    while (end < n && (text[end] == '"' || text[end] == '\'' || text[end] == ')' ||
                       text[end] == ']' || text[end] == '.' || text[end] == '!' ||
                       text[end] == '?')) {
      ++end;
    }
    if (end >= n) {
      emit(n);
      i = n;
      break;
    }
    if (!ascii_space(text[end])) continue;

    std::size_t next = end;
    while (next < n && ascii_space(text[next])) ++next;
    // Openers may precede the capital: . "Why
    while (next < n && (text[next] == '"' || text[next] == '\'' || text[next] == '(' ||
                        text[next] == '[')) {
      ++next;
    }
    if (next >= n || ascii_upper(text[next]) || ascii_digit(text[next])) {
      emit(end);
      i = end - 1;
    }
  }
  if (start < n) emit(n);
  return out;
}

std::size_t Section::word_count() const {
  std::size_t total = 0;
  for (const auto& s : sentences) total += s.tokens.size();
  return total;
}

std::size_t Document::body_word_count() const {
  std::size_t total = 0;
  for (const auto& sec : sections) total += sec.word_count();
  return total;
}

std::size_t Document::summary_word_count() const {
  std::size_t total = 0;
  for (const auto& s : summary) total += s.tokens.size();
  return total;
}

std::vector<std::string> concat_tokens(const std::vector<Sentence>& sentences) {
  std::vector<std::string> out;
  for (const auto& s : sentences) out.insert(out.end(), s.tokens.begin(), s.tokens.end());
  return out;
}

std::vector<std::string> head_tokens(const std::vector<Sentence>& sentences,
                                     std::size_t max_words) {
  std::vector<std::string> out;
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) {
      if (out.size() >= max_words) return out;
      out.push_back(t);
    }
  }
  return out;
}

std::vector<Sentence> truncate_sentences(const std::vector<Sentence>& sentences,
                                         std::size_t max_words) {
  std::vector<Sentence> out;
  std::size_t total = 0;
  for (const auto& s : sentences) {
    if (total + s.tokens.size() > max_words) break;
    out.push_back(s);
    total += s.tokens.size();
  }
  if (out.empty() && !sentences.empty() && max_words > 0) {
    std::vector<std::string> cut(sentences.front().tokens.begin(),
                                 sentences.front().tokens.begin() +
                                     std::min<std::size_t>(max_words, sentences.front().tokens.size()));
    out.push_back(make_sentence(join_tokens(cut)));
  }
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::optional<DatasetFormat> parse_dataset_format(std::string_view name) {
  if (name == "arxiv-pubmed") return DatasetFormat::ArxivPubmed;
  if (name == "native") return DatasetFormat::Native;
  return std::nullopt;
}

std::string_view to_string(DatasetFormat format) {
  return format == DatasetFormat::ArxivPubmed ? "arxiv-pubmed" : "native";
}

namespace {

void report(const DiagnosticSink& sink, std::size_t line, const std::string& message) {
  if (sink) sink("line " + std::to_string(line) + ": " + message);
}

// The release abstracts wrap sentences in <S>...</S> markers.
std::string strip_sentence_tags(std::string_view raw) {
  std::string_view s = trim(raw);
  if (s.size() >= 3 && (s.substr(0, 3) == "<S>" || s.substr(0, 3) == "<s>")) s.remove_prefix(3);
  if (s.size() >= 4 && (s.substr(s.size() - 4) == "</S>" || s.substr(s.size() - 4) == "</s>"))
    s.remove_suffix(4);
  return std::string(trim(s));
}

void append_sentence(std::vector<Sentence>& dest, std::string text) {
  Sentence s = make_sentence(std::move(text));
  if (!s.tokens.empty()) dest.push_back(std::move(s));
}

std::optional<Document> from_arxiv_pubmed(const json& rec, std::size_t line,
                                          const DiagnosticSink& sink) {
  for (const char* field : {"article_id", "sections", "section_names", "abstract_text"}) {
    if (!rec.contains(field)) {
      report(sink, line, std::string("missing required field '") + field + "'");
      return std::nullopt;
    }
  }
  if (!rec["article_id"].is_string() || !rec["sections"].is_array() ||
      !rec["section_names"].is_array() || !rec["abstract_text"].is_array()) {
    report(sink, line, "field has unexpected type");
    return std::nullopt;
  }
  const auto& sections = rec["sections"];
  const auto& names = rec["section_names"];
  if (sections.size() != names.size()) {
    report(sink, line, "sections and section_names differ in length");
    return std::nullopt;
  }

  Document doc;
  doc.doc_id = rec["article_id"].get<std::string>();
  for (std::size_t k = 0; k < sections.size(); ++k) {
    if (!sections[k].is_array() || !names[k].is_string()) {
      report(sink, line, "section " + std::to_string(k) + " has unexpected type");
      return std::nullopt;
    }
    Section sec;
    sec.header = names[k].get<std::string>();
    for (const auto& sent : sections[k]) {
      if (sent.is_string()) append_sentence(sec.sentences, sent.get<std::string>());
    }
    if (!sec.sentences.empty()) {
      sec.index = doc.sections.size();
      doc.sections.push_back(std::move(sec));
    }
  }
  for (const auto& sent : rec["abstract_text"]) {
    if (sent.is_string()) append_sentence(doc.summary, strip_sentence_tags(sent.get<std::string>()));
  }
  if (!doc.valid()) {
    report(sink, line, "document '" + doc.doc_id + "' has no usable sections or abstract, skipped");
    return std::nullopt;
  }
  return doc;
}

std::optional<Document> from_native(const json& rec, std::size_t line,
                                    const DiagnosticSink& sink) {
  for (const char* field : {"doc_id", "sections", "summary"}) {
    if (!rec.contains(field)) {
      report(sink, line, std::string("missing required field '") + field + "'");
      return std::nullopt;
    }
  }
  if (!rec["doc_id"].is_string() || !rec["sections"].is_array()) {
    report(sink, line, "field has unexpected type");
    return std::nullopt;
  }

  Document doc;
  doc.doc_id = rec["doc_id"].get<std::string>();
  for (const auto& raw : rec["sections"]) {
    if (!raw.is_object()) {
      report(sink, line, "section entry is not an object");
      return std::nullopt;
    }
    Section sec;
    sec.header = raw.value("header", std::string());
    if (raw.contains("sentences") && raw["sentences"].is_array()) {
      for (const auto& sent : raw["sentences"]) {
        if (sent.is_string()) append_sentence(sec.sentences, sent.get<std::string>());
      }
    } else if (raw.contains("text") && raw["text"].is_string()) {
      for (auto& sent : split_sentences(raw["text"].get<std::string>())) {
        if (!sent.tokens.empty()) sec.sentences.push_back(std::move(sent));
      }
    } else {
      report(sink, line, "section entry needs 'sentences' or 'text'");
      return std::nullopt;
    }
    if (!sec.sentences.empty()) {
      sec.index = doc.sections.size();
      doc.sections.push_back(std::move(sec));
    }
  }

  const auto& summary = rec["summary"];
  if (summary.is_array()) {
    for (const auto& sent : summary) {
      if (sent.is_string()) append_sentence(doc.summary, sent.get<std::string>());
    }
  } else if (summary.is_string()) {
    for (auto& sent : split_sentences(summary.get<std::string>())) {
      if (!sent.tokens.empty()) doc.summary.push_back(std::move(sent));
    }
  } else {
    report(sink, line, "'summary' must be a string or an array of strings");
    return std::nullopt;
  }

  if (!doc.valid()) {
    report(sink, line, "document '" + doc.doc_id + "' has no usable sections or abstract, skipped");
    return std::nullopt;
  }
  return doc;
}

}  // namespace

std::optional<Document> parse_document_line(std::string_view line, DatasetFormat format,
                                            std::size_t line_number,
                                            const DiagnosticSink& diagnostics) {
  json rec = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (rec.is_discarded() || !rec.is_object()) {
    report(diagnostics, line_number, "JSON parse error");
    return std::nullopt;
  }
  return format == DatasetFormat::ArxivPubmed ? from_arxiv_pubmed(rec, line_number, diagnostics)
                                              : from_native(rec, line_number, diagnostics);
}

struct JsonlDocumentReader::Impl {
  std::ifstream in;
};

JsonlDocumentReader::JsonlDocumentReader(const std::string& path, DatasetFormat format,
                                         DiagnosticSink diagnostics)
    : impl_(std::make_unique<Impl>()), format_(format), diagnostics_(std::move(diagnostics)) {
  impl_->in.open(path);
  if (!impl_->in) throw std::runtime_error("cannot open dataset file: " + path);
}

JsonlDocumentReader::~JsonlDocumentReader() = default;

std::optional<Document> JsonlDocumentReader::next() {
  std::string line;
  while (std::getline(impl_->in, line)) {
    ++lines_read_;
    if (trim(line).empty()) continue;
    auto doc = parse_document_line(line, format_, lines_read_, diagnostics_);
    if (doc) return doc;
    ++records_skipped_;
  }
  return std::nullopt;
}

std::vector<Document> load_dataset(const std::string& path, DatasetFormat format,
                                   DiagnosticSink diagnostics) {
  JsonlDocumentReader reader(path, format, std::move(diagnostics));
  std::vector<Document> docs;
  while (auto doc = reader.next()) docs.push_back(std::move(*doc));
  return docs;
}

void write_native(const Document& doc, std::ostream& out) {
  json rec;
  rec["doc_id"] = doc.doc_id;
  rec["sections"] = json::array();
  for (const auto& sec : doc.sections) {
    json s;
    s["header"] = sec.header;
    json sentences = json::array();
    for (const auto& sent : sec.sentences) sentences.push_back(sent.text);
    s["sentences"] = std::move(sentences);
    rec["sections"].push_back(std::move(s));
  }
  json summary = json::array();
  for (const auto& sent : doc.summary) summary.push_back(sent.text);
  rec["summary"] = std::move(summary);
  out << rec.dump() << '\n';
}

}  // namespace dancer
