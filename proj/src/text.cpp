#include "biblio/text.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <unordered_set>

#include "biblio/error.hpp"

namespace biblio {
namespace {

// ASCII replacements for U+00C0..U+00FF and U+0100..U+017F. An empty entry
// means "not a letter": the codepoint becomes a separator.
constexpr std::array<const char*, 64> kLatin1Upper = {
    "A", "A", "A", "A", "A", "A", "AE", "C", "E", "E", "E", "E", "I", "I", "I", "I",
    "D", "N", "O", "O", "O", "O", "O", "",  "O", "U", "U", "U", "U", "Y", "TH", "ss",
    "a", "a", "a", "a", "a", "a", "ae", "c", "e", "e", "e", "e", "i", "i", "i", "i",
    "d", "n", "o", "o", "o", "o", "o", "",  "o", "u", "u", "u", "u", "y", "th", "y"};

constexpr std::array<const char*, 128> kLatinExtA = {
    "A", "a", "A", "a", "A", "a", "C", "c", "C", "c", "C", "c", "C", "c", "D", "d",
    "D", "d", "E", "e", "E", "e", "E", "e", "E", "e", "E", "e", "G", "g", "G", "g",
    "G", "g", "G", "g", "H", "h", "H", "h", "I", "i", "I", "i", "I", "i", "I", "i",
    "I", "i", "IJ", "ij", "J", "j", "K", "k", "k", "L", "l", "L", "l", "L", "l", "L",
    "l", "L", "l", "N", "n", "N", "n", "N", "n", "n", "N", "n", "O", "o", "O", "o",
    "O", "o", "OE", "oe", "R", "r", "R", "r", "R", "r", "S", "s", "S", "s", "S", "s",
    "S", "s", "T", "t", "T", "t", "T", "t", "U", "u", "U", "u", "U", "u", "U", "u",
    "U", "u", "U", "u", "W", "w", "Y", "y", "Y", "Z", "z", "Z", "z", "Z", "z", "s"};

// Decodes one UTF-8 sequence starting at text[pos]. Returns the codepoint and
// advances pos; malformed bytes decode to U+FFFD one byte at a time.
char32_t next_codepoint(std::string_view text, std::size_t& pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  if (lead < 0x80) {
    ++pos;
    return lead;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    cp = lead & 0x07;
  } else {
    ++pos;
    return 0xFFFD;
  }
  if (pos + len > text.size()) {
    ++pos;
    return 0xFFFD;
  }
  for (std::size_t i = 1; i < len; ++i) {
    const auto cont = static_cast<unsigned char>(text[pos + i]);
    if ((cont & 0xC0) != 0x80) {
      ++pos;
      return 0xFFFD;
    }
    cp = (cp << 6) | (cont & 0x3F);
  }
  pos += len;
  return cp;
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_ascii_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

// Lowercases ASCII and, when folding, maps the text to pure ASCII.
std::string prepare(std::string_view text, bool fold) {
  std::string out = fold ? fold_diacritics(text) : std::string(text);
  std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
  return out;
}

bool is_word_byte(char c, bool fold) {
  return is_ascii_alnum(c) || (!fold && static_cast<unsigned char>(c) >= 0x80);
}

std::size_t codepoint_length(std::string_view text) {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < text.size(); ++n) next_codepoint(text, pos);
  return n;
}

std::vector<std::string> split_words(std::string_view prepared, bool fold) {
  std::vector<std::string> words;
  std::string current;
  for (char c : prepared) {
    if (is_word_byte(c, fold)) {
      current.push_back(c);
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

void append_unique(std::vector<std::string>& out, std::unordered_set<std::string>& seen,
                   std::string term) {
  if (term.empty()) return;
  if (seen.insert(term).second) out.push_back(std::move(term));
}

std::ifstream open_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read list file " + path.string());
  return in;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::string fold_diacritics(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    const char32_t cp = next_codepoint(utf8, pos);
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp >= 0x0300 && cp <= 0x036F) {
      // combining mark: drop so decomposed input folds like precomposed input
    } else if (cp >= 0x00C0 && cp <= 0x00FF) {
      const char* rep = kLatin1Upper[cp - 0x00C0];
      out += (*rep != '\0') ? rep : " ";
    } else if (cp >= 0x0100 && cp <= 0x017F) {
      out += kLatinExtA[cp - 0x0100];
    } else {
      out.push_back(' ');
    }
  }
  return out;
}

std::string canonical_string(std::string_view text, bool fold) {
  const std::string prepared = prepare(text, fold);
  std::string out;
  bool pending_space = false;
  for (char c : prepared) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

void NormalizationConfig::validate() const {
  for (const auto& [variant, canonical] : synonyms) {
    if (variant == canonical)
      throw Error(ErrorCode::Config, "synonym maps '" + variant + "' to itself");
    if (synonyms.count(canonical) != 0)
      throw Error(ErrorCode::Config,
                  "synonym chain: canonical '" + canonical + "' is also a variant");
  }
}

NormalizationConfig make_normalization_config(
    const std::vector<std::string>& stopwords,
    const std::vector<std::pair<std::string, std::string>>& synonyms, bool fold_diacritics,
    std::size_t min_token_length) {
  NormalizationConfig config;
  config.fold_diacritics = fold_diacritics;
  config.min_token_length = min_token_length;
  for (const auto& word : stopwords) {
    std::string key = canonical_string(word, fold_diacritics);
    if (!key.empty()) config.stopwords.insert(std::move(key));
  }
  for (const auto& [variant, canonical] : synonyms) {
    std::string from = canonical_string(variant, fold_diacritics);
    std::string to = canonical_string(canonical, fold_diacritics);
    if (from.empty() || to.empty())
      throw Error(ErrorCode::Config, "empty synonym entry '" + variant + "=" + canonical + "'");
    auto [it, inserted] = config.synonyms.emplace(from, to);
    if (!inserted && it->second != to)
      throw Error(ErrorCode::Config, "conflicting synonyms for '" + from + "'");
  }
  config.validate();
  return config;
}

std::vector<std::string> read_stopword_list(const std::filesystem::path& path) {
  auto in = open_list(path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string entry = trim(line);
    if (entry.empty() || entry.front() == '#') continue;
    words.push_back(std::move(entry));
  }
  return words;
}

std::vector<std::pair<std::string, std::string>> read_synonym_list(
    const std::filesystem::path& path) {
  auto in = open_list(path);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string entry = trim(line);
    if (entry.empty() || entry.front() == '#') continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::Config, path.string() + ":" + std::to_string(line_no) +
                                         ": expected 'variant=canonical'");
    pairs.emplace_back(trim(std::string_view(entry).substr(0, eq)),
                       trim(std::string_view(entry).substr(eq + 1)));
  }
  return pairs;
}

TermList normalize(std::string_view text, const NormalizationConfig& config, TextField field) {
  TermList result;
  result.source_field = field;
  const bool fold = config.fold_diacritics;
  for (auto& word : split_words(prepare(text, fold), fold)) {
    if (auto it = config.synonyms.find(word); it != config.synonyms.end()) word = it->second;
    if (config.stopwords.count(word) != 0) continue;
    const std::size_t length = fold ? word.size() : codepoint_length(word);
    if (length < config.min_token_length) continue;
    result.terms.push_back(std::move(word));
  }
  return result;
}

std::string normalize_phrase(std::string_view text, const NormalizationConfig& config) {
  const bool fold = config.fold_diacritics;
  std::string prepared = prepare(text, fold);
  for (char& c : prepared)
    if (!is_word_byte(c, fold) && c != '-') c = ' ';

  std::string phrase;
  std::size_t start = 0;
  while (start < prepared.size()) {
    auto end = prepared.find(' ', start);
    if (end == std::string::npos) end = prepared.size();
    std::string_view word = std::string_view(prepared).substr(start, end - start);
    const auto first = word.find_first_not_of('-');
    if (first != std::string_view::npos) {
      word = word.substr(first, word.find_last_not_of('-') - first + 1);
      if (!phrase.empty()) phrase.push_back(' ');
      phrase += word;
    }
    start = end + 1;
  }

  if (auto it = config.synonyms.find(phrase); it != config.synonyms.end()) phrase = it->second;
  if (config.stopwords.count(phrase) != 0) return {};
  const std::size_t length = fold ? phrase.size() : codepoint_length(phrase);
  if (length < config.min_token_length) return {};
  return phrase;
}

std::vector<std::string> derive_unigram_keywords(const BibRecord& record,
                                                 const NormalizationConfig& config) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& keyword : record.author_keywords)
    for (auto& term : normalize(keyword, config, TextField::UnigramKeywords).terms)
      append_unique(out, seen, std::move(term));
  return out;
}

std::vector<std::string> document_terms(const BibRecord& record, TextField field,
                                        const NormalizationConfig& config) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  switch (field) {
    case TextField::Title:
    case TextField::Abstract: {
      const auto& text = field == TextField::Title ? record.title : record.abstract;
      for (auto& term : normalize(text, config, field).terms) append_unique(out, seen, std::move(term));
      break;
    }
    case TextField::AuthorKeywords:
      for (const auto& keyword : record.author_keywords)
        append_unique(out, seen, normalize_phrase(keyword, config));
      break;
    case TextField::UnigramKeywords:
      if (record.unigram_keywords.empty()) return derive_unigram_keywords(record, config);
      for (const auto& keyword : record.unigram_keywords)
        for (auto& term : normalize(keyword, config, field).terms)
          append_unique(out, seen, std::move(term));
      break;
  }
  return out;
}

BibRecord clean_record(const BibRecord& record, const NormalizationConfig& config) {
  BibRecord cleaned = record;
  cleaned.author_keywords = document_terms(record, TextField::AuthorKeywords, config);
  cleaned.unigram_keywords = document_terms(record, TextField::UnigramKeywords, config);
  return cleaned;
}

const NormalizationConfig& default_normalization() {
  static const NormalizationConfig config;
  return config;
}

}  // namespace biblio
