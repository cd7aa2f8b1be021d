#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace biblio {

/// One dissertation. The BibTeX author list is read positionally: the first
/// author is the student, everyone after is a supervisor. The journal field
/// carries the research group.
struct BibRecord {
  std::string id;
  std::string title;
  int year = 0;
  std::string student;
  std::vector<std::string> supervisors;
  std::string group;
  std::vector<std::string> affiliations;
  std::vector<std::string> author_keywords;
  std::vector<std::string> unigram_keywords;
  std::string abstract;
  std::vector<std::string> references;
  std::int64_t citation_count = 0;

  /// Student followed by supervisors.
  std::vector<std::string> authors() const;
  bool single_authored() const { return supervisors.empty(); }

  bool operator==(const BibRecord&) const = default;
};

/// Text fields that feed term-based analyses.
enum class TextField { Title, Abstract, AuthorKeywords, UnigramKeywords };

std::string_view to_string(TextField field);
/// Accepts "title", "abstract", "author_keywords" (or "keywords"),
/// "unigram_keywords" (or "unigrams"). Throws Error{InvalidArgument}.
TextField parse_text_field(std::string_view name);

}  // namespace biblio
