#include "dancer/example_gen.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace dancer {

namespace {

std::vector<std::string> truncated_tokens(const std::vector<Sentence>& sentences,
                                          std::size_t max_words, bool sentence_truncation) {
  if (sentence_truncation) return concat_tokens(truncate_sentences(sentences, max_words));
  return head_tokens(sentences, max_words);
}

}  // namespace

std::vector<TrainingExample> generate_examples(const Document& doc, const GenConfig& config,
                                               const KeywordTable& table,
                                               const GenOptions& options) {
  if (!doc.valid()) return {};
  return generate_examples(doc, config, table, options, align_summary(doc, options.denominator));
}

std::vector<TrainingExample> generate_examples(const Document& doc, const GenConfig& config,
                                               const KeywordTable& table,
                                               const GenOptions& options,
                                               const std::vector<Assignment>& assignments) {
  std::vector<TrainingExample> out;
  if (!doc.valid()) return out;

  // Selected section -> type, including the fallback stand-ins.
  const auto selected = select_sections(doc, table, config.selected_types, options.fallback_first_k);
  std::vector<int> type_of(doc.sections.size(), -1);
  for (const auto& sel : selected) type_of[sel.section_index] = static_cast<int>(sel.type);

  const auto targets = build_section_targets(doc, assignments, options.drop_zero_overlap);

  for (const auto& target : targets) {
    if (type_of[target.section_index] < 0) continue;
    TrainingExample ex;
    ex.doc_id = doc.doc_id;
    ex.section_index = target.section_index;
    ex.section_type = static_cast<SectionType>(type_of[target.section_index]);
    ex.source = truncated_tokens(doc.sections[target.section_index].sentences,
                                 config.max_source_words, options.sentence_truncation);
    ex.target = truncated_tokens(target_sentences(doc, target), config.max_target_words,
                                 options.sentence_truncation);
    if (ex.source.empty() || ex.target.empty()) continue;
    out.push_back(std::move(ex));
  }
  return out;
}

std::size_t write_examples(const std::vector<TrainingExample>& examples, std::ostream& out) {
  for (const auto& ex : examples) {
    nlohmann::json rec;
    rec["doc_id"] = ex.doc_id;
    rec["section_index"] = ex.section_index;
    rec["section_type"] = std::string(to_string(ex.section_type));
    rec["source"] = join_tokens(ex.source);
    rec["target"] = join_tokens(ex.target);
    out << rec.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write_examples: stream write failed");
  return examples.size();
}

std::size_t write_examples(const std::vector<TrainingExample>& examples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_examples: cannot open " + path);
  return write_examples(examples, out);
}

std::vector<TrainingExample> read_examples(std::istream& in) {
  std::vector<TrainingExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object())
      throw std::runtime_error("read_examples: bad JSON at line " + std::to_string(line_no));
    TrainingExample ex;
    ex.doc_id = rec.at("doc_id").get<std::string>();
    ex.section_index = rec.at("section_index").get<std::size_t>();
    auto type = section_type_from_string(rec.at("section_type").get<std::string>());
    if (!type)
      throw std::runtime_error("read_examples: bad section_type at line " + std::to_string(line_no));
    ex.section_type = *type;
    ex.source = tokenize(rec.at("source").get<std::string>());
    ex.target = tokenize(rec.at("target").get<std::string>());
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<TrainingExample> read_examples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_examples: cannot open " + path);
  return read_examples(in);
}

}  // namespace dancer
