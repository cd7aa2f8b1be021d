#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "biblio/record.hpp"

namespace biblio {

/// An entry that could not become a record. The entry is skipped.
struct ParseWarning {
  std::size_t line = 0;
  std::string key;
  std::string message;

  bool operator==(const ParseWarning&) const = default;
};

struct ParseOptions {
  /// Field holding the citation count. A leading integer is read from it,
  /// so `note = {12 citations}` works when this is set to "note".
  std::string citations_field = "citations";
  /// Used as a prefix in warnings and provenance notes.
  std::string source_name = "<input>";
};

using ParsedEntry = std::variant<BibRecord, ParseWarning>;

struct ParsedSource {
  /// One item per @entry in source order (@comment, @string and @preamble
  /// blocks are not entries).
  std::vector<ParsedEntry> entries;
  /// Non-fatal observations such as deduplicated keywords.
  std::vector<std::string> notes;

  std::vector<BibRecord> records() const;
  std::vector<ParseWarning> warnings() const;
};

/// Parses BibTeX text. Compound fields (author, keywords, affiliations,
/// references) are lists separated by ';'. Author lists without ';' are split
/// on " and " instead. Field names are case-insensitive.
ParsedSource parse_bib(std::istream& source, const ParseOptions& options = {});
ParsedSource parse_bib_string(const std::string& text, const ParseOptions& options = {});
/// Throws Error{Io} when the file cannot be read.
ParsedSource parse_bib_file(const std::filesystem::path& path, ParseOptions options = {});

/// Writes records in the same field convention parse_bib reads.
void write_bib(std::ostream& out, const std::vector<BibRecord>& records,
               const std::string& citations_field = "citations");

}  // namespace biblio
