#include "dancer/compose.hpp"

#include <fstream>
#include <memory>
#include <stdexcept>

#include "json.hpp"

#include "dancer/adapter.hpp"
#include "dancer/parallel.hpp"

namespace dancer {

std::string recombine(const std::vector<SummaryPart>& parts) {
  std::string out;
  for (const auto& part : parts) {
    if (part.partial.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += part.partial;
  }
  return out;
}

namespace {

// Lazily (re)spawned adapter owned by exactly one worker. A crashed process
// is replaced on the next request, so one bad section does not poison the
// rest of the worker's queue.
class AdapterSlot {
 public:
  explicit AdapterSlot(const SummarizerSpec& spec) : spec_(spec) {}

  std::string exchange(const std::string& id, const std::string& source) {
    if (!process_ || !process_->running()) {
      process_.reset();
      process_ = std::make_unique<AdapterProcess>(spec_.command, spec_.timeout);
    }
    try {
      return process_->exchange(id, source);
    } catch (const AdapterError&) {
      process_.reset();
      throw;
    }
  }

 private:
  SummarizerSpec spec_;
  std::unique_ptr<AdapterProcess> process_;
};

std::string cap_tokens(std::vector<std::string> tokens, std::size_t cap, bool trigram_block) {
  if (trigram_block) tokens = apply_trigram_blocking(tokens);
  if (tokens.size() > cap) tokens.resize(cap);
  return join_tokens(tokens);
}

// One section, one partial. Adapter errors propagate to the caller.
std::string summarize_one(const Section& section, const std::string& doc_id,
                          const SummarizerSpec& spec, const GenConfig& config,
                          const ComposeOptions& options, AdapterSlot* adapter) {
  if (spec.kind == SummarizerSpec::Kind::External) {
    const std::string source = join_tokens(head_tokens(section.sentences, config.max_source_words));
    const std::string id = doc_id + "#" + std::to_string(section.index);
    std::string summary = adapter->exchange(id, source);
    if (spec.trigram_block)
      summary = join_tokens(apply_trigram_blocking(tokenize(summary)));
    return summary;
  }
  const auto source = truncate_sentences(section.sentences, config.max_source_words);
  const auto picked = summarize_section(source, spec);
  return cap_tokens(concat_tokens(picked), options.builtin_output_cap, spec.trigram_block);
}

struct SectionTask {
  const Document* doc = nullptr;
  std::size_t part_pos = 0;       // index into the hypothesis' parts
  std::size_t hypothesis_pos = 0; // index into the chunk's hypotheses
};

struct ChunkResult {
  std::vector<SummaryHypothesis> hypotheses;
  std::vector<std::string> messages;  // in task order
};

ChunkResult summarize_chunk(const std::vector<Document>& docs, const SummarizerSpec& spec,
                            const KeywordTable& table, const GenConfig& config,
                            std::size_t workers, const ComposeOptions& options) {
  ChunkResult result;
  result.hypotheses.resize(docs.size());

  std::vector<SectionTask> tasks;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const Document& doc = docs[d];
    auto& hyp = result.hypotheses[d];
    hyp.doc_id = doc.doc_id;
    const auto selected =
        select_sections(doc, table, config.selected_types, options.fallback_first_k);
    for (const auto& sel : selected) {
      hyp.parts.push_back({sel.section_index, sel.type, {}});
      tasks.push_back({&doc, hyp.parts.size() - 1, d});
    }
  }

  const std::size_t pool = std::max<std::size_t>(workers, 1);
  std::vector<std::unique_ptr<AdapterSlot>> adapters;
  if (spec.kind == SummarizerSpec::Kind::External) {
    for (std::size_t w = 0; w < pool; ++w) adapters.push_back(std::make_unique<AdapterSlot>(spec));
  }

  std::vector<std::string> errors(tasks.size());
  parallel_for_indexed(tasks.size(), pool, [&](std::size_t t, std::size_t w) {
    const SectionTask& task = tasks[t];
    auto& hyp = result.hypotheses[task.hypothesis_pos];
    auto& part = hyp.parts[task.part_pos];
    const Section& section = task.doc->sections[part.section_index];
    try {
      part.partial = summarize_one(section, task.doc->doc_id, spec, config, options,
                                   adapters.empty() ? nullptr : adapters[w].get());
    } catch (const std::exception& e) {
      part.partial.clear();
      errors[t] = "doc " + task.doc->doc_id + " section " + std::to_string(part.section_index) +
                  ": " + e.what();
    }
  });

  for (std::size_t d = 0; d < docs.size(); ++d) {
    auto& hyp = result.hypotheses[d];
    hyp.final = recombine(hyp.parts);
    if (hyp.parts.empty())
      result.messages.push_back("doc " + docs[d].doc_id + ": no sections selected");
  }
  for (auto& message : errors) {
    if (!message.empty()) result.messages.push_back(std::move(message));
  }
  return result;
}

}  // namespace

SummaryHypothesis summarize_document(const Document& doc, const SummarizerSpec& spec,
                                     const KeywordTable& table, const GenConfig& config,
                                     const ComposeOptions& options,
                                     const DiagnosticSink& diagnostics) {
  auto result = summarize_chunk({doc}, spec, table, config, 1, options);
  if (diagnostics) {
    for (const auto& message : result.messages) diagnostics(message);
  }
  return std::move(result.hypotheses.front());
}

std::vector<SummaryHypothesis> summarize_corpus(const std::vector<Document>& docs,
                                                const SummarizerSpec& spec,
                                                const KeywordTable& table, const GenConfig& config,
                                                std::size_t workers, const ComposeOptions& options,
                                                const DiagnosticSink& diagnostics) {
  if (workers < 1) throw std::invalid_argument("summarize_corpus: workers must be >= 1");
  auto result = summarize_chunk(docs, spec, table, config, workers, options);
  if (diagnostics) {
    for (const auto& message : result.messages) diagnostics(message);
  }
  return std::move(result.hypotheses);
}

void summarize_corpus(JsonlDocumentReader& docs, const SummarizerSpec& spec,
                      const KeywordTable& table, const GenConfig& config, std::size_t workers,
                      const std::function<void(SummaryHypothesis)>& emit,
                      const ComposeOptions& options, const DiagnosticSink& diagnostics) {
  if (workers < 1) throw std::invalid_argument("summarize_corpus: workers must be >= 1");
  const std::size_t chunk_size = std::max<std::size_t>(32, workers * 8);
  std::vector<Document> chunk;
  chunk.reserve(chunk_size);
  auto flush = [&] {
    if (chunk.empty()) return;
    auto result = summarize_chunk(chunk, spec, table, config, workers, options);
    for (auto& hyp : result.hypotheses) emit(std::move(hyp));
    if (diagnostics) {
      for (const auto& message : result.messages) diagnostics(message);
    }
    chunk.clear();
  };
  while (auto doc = docs.next()) {
    chunk.push_back(std::move(*doc));
    if (chunk.size() >= chunk_size) flush();
  }
  flush();
}

void write_hypothesis(const SummaryHypothesis& hyp, std::ostream& out) {
  nlohmann::json rec;
  rec["doc_id"] = hyp.doc_id;
  rec["final"] = hyp.final;
  rec["parts"] = nlohmann::json::array();
  for (const auto& part : hyp.parts) {
    nlohmann::json p;
    p["section_index"] = part.section_index;
    p["section_type"] = std::string(to_string(part.section_type));
    p["partial"] = part.partial;
    rec["parts"].push_back(std::move(p));
  }
  out << rec.dump() << '\n';
}

std::vector<SummaryHypothesis> read_hypotheses(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_hypotheses: cannot open " + path);
  std::vector<SummaryHypothesis> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("doc_id") ||
        !rec.contains("final")) {
      throw std::runtime_error("read_hypotheses: bad record at line " + std::to_string(line_no));
    }
    SummaryHypothesis hyp;
    hyp.doc_id = rec["doc_id"].get<std::string>();
    hyp.final = rec["final"].get<std::string>();
    if (rec.contains("parts") && rec["parts"].is_array()) {
      for (const auto& p : rec["parts"]) {
        SummaryPart part;
        part.section_index = p.value("section_index", std::size_t{0});
        if (auto type = section_type_from_string(p.value("section_type", "other")))
          part.section_type = *type;
        part.partial = p.value("partial", std::string());
        hyp.parts.push_back(std::move(part));
      }
    }
    out.push_back(std::move(hyp));
  }
  return out;
}

}  // namespace dancer
