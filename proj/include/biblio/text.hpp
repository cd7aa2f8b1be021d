#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "biblio/record.hpp"

namespace biblio {

struct NormalizationConfig {
  /// Stored folded and lowercased.
  std::set<std::string> stopwords;
  /// variant -> canonical, both folded and lowercased.
  std::map<std::string, std::string> synonyms;
  bool fold_diacritics = true;
  std::size_t min_token_length = 2;

  /// Throws Error{Config} if a variant maps to itself or a canonical form is
  /// also used as a variant.
  void validate() const;
};

/// Builds a config from raw lists, folding and lowercasing every entry so
/// matching is consistent with normalize().
NormalizationConfig make_normalization_config(
    const std::vector<std::string>& stopwords,
    const std::vector<std::pair<std::string, std::string>>& synonyms,
    bool fold_diacritics = true, std::size_t min_token_length = 2);

/// One entry per line; blank lines and lines starting with '#' are ignored.
std::vector<std::string> read_stopword_list(const std::filesystem::path& path);
/// "variant=canonical" per line.
std::vector<std::pair<std::string, std::string>> read_synonym_list(
    const std::filesystem::path& path);

struct TermList {
  std::vector<std::string> terms;
  TextField source_field = TextField::Title;

  bool operator==(const TermList&) const = default;
};

/// Maps accented Latin letters to ASCII (á -> a, ñ -> n, ß -> ss, ...).
/// Combining marks are dropped; any other non-ASCII codepoint becomes a space.
std::string fold_diacritics(std::string_view utf8);

/// Fold, lowercase, collapse runs of whitespace, trim. Punctuation is kept.
/// Used for person names and reference strings.
std::string canonical_string(std::string_view text, bool fold = true);

/// fold -> lowercase -> split on non-alphanumerics -> synonym -> stopword ->
/// length filter.
TermList normalize(std::string_view text, const NormalizationConfig& config,
                   TextField field = TextField::Title);

/// Normalizes a multi-word keyword as one unit: hyphenated compounds and inner
/// stopwords are preserved, the synonym map applies to the whole phrase and
/// the phrase is dropped (empty result) when it is itself a stopword.
std::string normalize_phrase(std::string_view text, const NormalizationConfig& config);

/// Splits each author keyword into unigrams with normalize(); concatenated and
/// deduplicated in first-seen order.
std::vector<std::string> derive_unigram_keywords(const BibRecord& record,
                                                 const NormalizationConfig& config);

/// Distinct terms of one record for one field, in first-seen order. Keywords
/// are phrase-normalized, title and abstract are tokenized, unigram keywords
/// come from the record when present and are derived otherwise.
std::vector<std::string> document_terms(const BibRecord& record, TextField field,
                                        const NormalizationConfig& config);

/// Applies the keyword rules to the stored lists and fills unigram_keywords
/// when the record has none.
BibRecord clean_record(const BibRecord& record, const NormalizationConfig& config);

const NormalizationConfig& default_normalization();

}  // namespace biblio
