#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dancer/corpus.hpp"

namespace dancer {

enum class SectionType {
  Introduction = 0,
  Literature,
  Methods,
  Results,
  Conclusion,
  Other,
};

inline constexpr std::size_t kNumSectionTypes = 6;
inline constexpr std::array<SectionType, 5> kClassifiedTypes = {
    SectionType::Introduction, SectionType::Literature, SectionType::Methods,
    SectionType::Results, SectionType::Conclusion};

std::string_view to_string(SectionType type);
std::optional<SectionType> section_type_from_string(std::string_view name);

// Maps each classifiable type to its lowercase header keywords. A header
// matches a type when one of its word tokens equals a keyword.
class KeywordTable {
 public:
  static KeywordTable defaults();

  // Plain text, one type per line: "<type>: kw1, kw2 ...". '#' starts a
  // comment. Types the file does not mention match nothing.
  static KeywordTable load(const std::string& path);
  static KeywordTable parse(std::string_view text);

  const std::vector<std::string>& keywords(SectionType type) const;
  void set(SectionType type, std::vector<std::string> keywords);

 private:
  std::array<std::vector<std::string>, 5> keywords_;
};

// First type (in Introduction..Conclusion order) with a keyword matching a
// whole header token; Other when none match.
SectionType classify_header(std::string_view header, const KeywordTable& table);

struct SelectedSection {
  std::size_t section_index = 0;
  SectionType type = SectionType::Other;
};

const std::set<SectionType>& default_selected_types();

// Sections classified into one of `types`, in document order. When nothing
// matches and fallback_first_k > 0, the first K sections stand in as
// introductions so header-less documents still flow through the pipeline.
std::vector<SelectedSection> select_sections(const Document& doc, const KeywordTable& table,
                                             const std::set<SectionType>& types = default_selected_types(),
                                             std::size_t fallback_first_k = 0);

}  // namespace dancer
