#include "dancer/section_classify.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dancer {

std::string_view to_string(SectionType type) {
  switch (type) {
    case SectionType::Introduction: return "introduction";
    case SectionType::Literature: return "literature";
    case SectionType::Methods: return "methods";
    case SectionType::Results: return "results";
    case SectionType::Conclusion: return "conclusion";
    case SectionType::Other: return "other";
  }
  return "other";
}

std::optional<SectionType> section_type_from_string(std::string_view name) {
  if (name == "introduction") return SectionType::Introduction;
  if (name == "literature") return SectionType::Literature;
  if (name == "methods") return SectionType::Methods;
  if (name == "results") return SectionType::Results;
  if (name == "conclusion") return SectionType::Conclusion;
  if (name == "other") return SectionType::Other;
  return std::nullopt;
}

KeywordTable KeywordTable::defaults() {
  KeywordTable table;
  table.set(SectionType::Introduction, {"introduction", "case"});
  table.set(SectionType::Literature, {"background", "literature", "related"});
  table.set(SectionType::Methods, {"method", "methods", "techniques", "methodology"});
  table.set(SectionType::Results, {"result", "results", "experimental", "experiment", "experiments"});
  table.set(SectionType::Conclusion,
            {"conclusion", "conclusions", "concluding", "discussion", "limitations"});
  return table;
}

KeywordTable KeywordTable::parse(std::string_view text) {
  KeywordTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (tokenize(line).empty()) continue;

    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("keyword table line " + std::to_string(line_no) +
                               ": expected '<type>: keywords...'");
    std::string name;
    for (char c : line.substr(0, colon))
      if (!std::isspace(static_cast<unsigned char>(c))) name.push_back(c);
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto type = section_type_from_string(name);
    if (!type || *type == SectionType::Other)
      throw std::runtime_error("keyword table line " + std::to_string(line_no) +
                               ": unknown section type '" + name + "'");
    std::string rest = line.substr(colon + 1);
    std::replace(rest.begin(), rest.end(), ',', ' ');
    table.set(*type, tokenize(rest));
  }
  return table;
}

KeywordTable KeywordTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open keyword table: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const std::vector<std::string>& KeywordTable::keywords(SectionType type) const {
  return keywords_.at(static_cast<std::size_t>(type));
}

void KeywordTable::set(SectionType type, std::vector<std::string> keywords) {
  if (type == SectionType::Other)
    throw std::invalid_argument("'other' carries no keywords; it is the no-match bucket");
  keywords_.at(static_cast<std::size_t>(type)) = std::move(keywords);
}

SectionType classify_header(std::string_view header, const KeywordTable& table) {
  const std::vector<std::string> words = tokenize(header);
  if (words.empty()) return SectionType::Other;
  for (SectionType type : kClassifiedTypes) {
    for (const auto& keyword : table.keywords(type)) {
      if (std::find(words.begin(), words.end(), keyword) != words.end()) return type;
    }
  }
  return SectionType::Other;
}

const std::set<SectionType>& default_selected_types() {
  static const std::set<SectionType> types = {SectionType::Introduction, SectionType::Methods,
                                              SectionType::Results, SectionType::Conclusion};
  return types;
}

std::vector<SelectedSection> select_sections(const Document& doc, const KeywordTable& table,
                                             const std::set<SectionType>& types,
                                             std::size_t fallback_first_k) {
  std::vector<SelectedSection> out;
  for (const auto& section : doc.sections) {
    SectionType type = classify_header(section.header, table);
    if (types.count(type)) out.push_back({section.index, type});
  }
  if (out.empty() && fallback_first_k > 0) {
    const std::size_t k = std::min(fallback_first_k, doc.sections.size());
    for (std::size_t i = 0; i < k; ++i) out.push_back({i, SectionType::Introduction});
  }
  return out;
}

}  // namespace dancer
