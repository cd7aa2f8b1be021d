#include "biblio/bib.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "biblio/error.hpp"
#include "biblio/text.hpp"

namespace biblio {
namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::optional<char32_t> accent_mark(std::string_view command) {
  static const std::map<std::string_view, char32_t> marks = {
      {"'", 0x0301}, {"`", 0x0300}, {"^", 0x0302}, {"\"", 0x0308}, {"~", 0x0303},
      {"=", 0x0304}, {".", 0x0307}, {"c", 0x0327}, {"v", 0x030C}, {"u", 0x0306},
      {"H", 0x030B}, {"k", 0x0328}};
  auto it = marks.find(command);
  if (it == marks.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string_view> letter_command(std::string_view command) {
  static const std::map<std::string_view, std::string_view> letters = {
      {"ss", "\xC3\x9F"}, {"i", "i"},          {"j", "j"},          {"o", "\xC3\xB8"},
      {"O", "\xC3\x98"},  {"ae", "\xC3\xA6"},  {"AE", "\xC3\x86"},  {"oe", "\xC5\x93"},
      {"OE", "\xC5\x92"}, {"aa", "\xC3\xA5"},  {"AA", "\xC3\x85"},  {"l", "\xC5\x82"},
      {"L", "\xC5\x81"},  {"textbackslash", "\\"}};
  auto it = letters.find(command);
  if (it == letters.end()) return std::nullopt;
  return it->second;
}

// Removes grouping braces and decodes the LaTeX accent commands that show up
// in exported bibliographies. Accents become base letter + combining mark.
std::string decode_latex(std::string_view raw) {
  std::string out;
  std::size_t i = 0;
  const auto read_command = [&](std::size_t& pos) {
    std::string_view name;
    if (pos < raw.size() && std::isalpha(static_cast<unsigned char>(raw[pos]))) {
      const std::size_t start = pos;
      while (pos < raw.size() && std::isalpha(static_cast<unsigned char>(raw[pos]))) ++pos;
      name = raw.substr(start, pos - start);
    } else if (pos < raw.size()) {
      name = raw.substr(pos, 1);
      ++pos;
    }
    return name;
  };
  while (i < raw.size()) {
    const char c = raw[i];
    if (c == '{' || c == '}') {
      ++i;
      continue;
    }
    if (c != '\\') {
      out.push_back(c);
      ++i;
      continue;
    }
    ++i;
    const std::string_view command = read_command(i);
    if (command.empty()) break;
    if (command.size() == 1 && std::string_view("&%$#_{}").find(command[0]) != std::string_view::npos) {
      out.push_back(command[0]);
      continue;
    }
    if (auto mark = accent_mark(command)) {
      if (std::isalpha(static_cast<unsigned char>(command[0])))
        while (i < raw.size() && raw[i] == ' ') ++i;
      std::string base;
      if (i < raw.size() && raw[i] == '{') {
        const auto close = raw.find('}', i);
        base = decode_latex(raw.substr(i + 1, close == std::string_view::npos ? raw.npos : close - i - 1));
        i = close == std::string_view::npos ? raw.size() : close + 1;
      } else if (i < raw.size() && raw[i] == '\\') {
        ++i;
        const auto inner = read_command(i);
        base = letter_command(inner).value_or(inner);
      } else if (i < raw.size()) {
        base = raw.substr(i, 1);
        ++i;
      }
      out += base;
      append_utf8(out, *mark);
      continue;
    }
    if (auto letter = letter_command(command)) {
      out += *letter;
      if (i < raw.size() && raw[i] == ' ' && std::isalpha(static_cast<unsigned char>(command[0]))) ++i;
      continue;
    }
    // unknown command such as \emph: drop the name, keep its argument
  }
  return out;
}

std::string clean_text(std::string_view raw) { return collapse_whitespace(decode_latex(raw)); }

// Splits at depth-0 occurrences of sep.
std::vector<std::string_view> split_top_level(std::string_view raw, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\\') {
      ++i;
      continue;
    }
    if (raw[i] == '{') ++depth;
    else if (raw[i] == '}') --depth;
    else if (raw[i] == sep && depth == 0) {
      parts.push_back(raw.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(raw.substr(start));
  return parts;
}

bool has_top_level(std::string_view raw, char sep) { return split_top_level(raw, sep).size() > 1; }

std::vector<std::string_view> split_on_and(std::string_view raw) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c == '{') ++depth;
    else if (c == '}') --depth;
    else if (depth == 0 && is_space(c) && i + 4 < raw.size() &&
             lower_ascii(raw.substr(i + 1, 3)) == "and" && is_space(raw[i + 4])) {
      parts.push_back(raw.substr(start, i - start));
      start = i + 5;
      i += 4;
    }
  }
  parts.push_back(raw.substr(start));
  return parts;
}

struct EntrySource {
  std::string type;
  std::string key;
  std::size_t line = 0;
  // field name (lowercase) -> raw value with inner braces preserved
  std::map<std::string, std::string> fields;
  std::vector<std::string> duplicate_fields;
};

class MalformedEntry : public std::runtime_error {
 public:
  MalformedEntry(std::size_t offset, const std::string& message)
      : std::runtime_error(message), offset(offset) {}
  std::size_t offset;
};

// Parses a single @entry chunk. Offsets in exceptions are absolute.
class ChunkParser {
 public:
  ChunkParser(std::string_view text, std::size_t begin, std::size_t end,
              const std::map<std::string, std::string>& macros)
      : text_(text), pos_(begin), end_(end), macros_(macros) {}

  std::string read_type() {
    ++pos_;  // '@'
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < end_ && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) throw MalformedEntry(start, "missing entry type after '@'");
    return lower_ascii(text_.substr(start, pos_ - start));
  }

  char open_body() {
    skip_ws();
    if (pos_ >= end_ || (text_[pos_] != '{' && text_[pos_] != '('))
      throw MalformedEntry(pos_, "expected '{' after entry type");
    const char close = text_[pos_] == '{' ? '}' : ')';
    ++pos_;
    return close;
  }

  void read_entry(EntrySource& entry, char close) {
    skip_ws();
    const std::size_t key_start = pos_;
    while (pos_ < end_ && text_[pos_] != ',' && text_[pos_] != close && !is_space(text_[pos_])) ++pos_;
    entry.key = std::string(text_.substr(key_start, pos_ - key_start));
    skip_ws();
    if (pos_ >= end_) throw MalformedEntry(key_start, "entry is not closed");
    if (text_[pos_] == close) {
      ++pos_;
      return;
    }
    if (text_[pos_] != ',') throw MalformedEntry(pos_, "expected ',' after citation key");
    ++pos_;
    while (true) {
      skip_ws();
      if (pos_ >= end_) throw MalformedEntry(key_start, "entry is not closed");
      if (text_[pos_] == close) {
        ++pos_;
        return;
      }
      auto [name, value] = read_field();
      if (!entry.fields.emplace(name, value).second) {
        entry.fields[name] = value;
        entry.duplicate_fields.push_back(name);
      }
      skip_ws();
      if (pos_ < end_ && text_[pos_] == ',') {
        ++pos_;
      } else if (pos_ < end_ && text_[pos_] == close) {
        ++pos_;
        return;
      } else {
        throw MalformedEntry(pos_ < end_ ? pos_ : key_start, "expected ',' or end of entry after field '" + name + "'");
      }
    }
  }

  std::pair<std::string, std::string> read_field() {
    const std::size_t name_start = pos_;
    while (pos_ < end_ && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                           std::string_view("_-:.+").find(text_[pos_]) != std::string_view::npos))
      ++pos_;
    if (pos_ == name_start) throw MalformedEntry(pos_, "expected field name");
    std::string name = lower_ascii(text_.substr(name_start, pos_ - name_start));
    skip_ws();
    if (pos_ >= end_ || text_[pos_] != '=') throw MalformedEntry(pos_, "expected '=' after field '" + name + "'");
    ++pos_;
    return {std::move(name), read_value()};
  }

  std::string read_value() {
    std::string value;
    while (true) {
      skip_ws();
      if (pos_ >= end_) throw MalformedEntry(pos_, "missing field value");
      const char c = text_[pos_];
      if (c == '{') {
        value += read_delimited('{', '}');
      } else if (c == '"') {
        value += read_delimited('"', '"');
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        const std::size_t start = pos_;
        while (pos_ < end_ && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        value += text_.substr(start, pos_ - start);
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        const std::size_t start = pos_;
        while (pos_ < end_ && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
          ++pos_;
        const std::string macro = lower_ascii(text_.substr(start, pos_ - start));
        auto it = macros_.find(macro);
        value += it != macros_.end() ? it->second : macro;
      } else {
        throw MalformedEntry(pos_, "unexpected character in field value");
      }
      skip_ws();
      if (pos_ < end_ && text_[pos_] == '#') {
        ++pos_;
        continue;
      }
      return value;
    }
  }

  void skip_ws() {
    while (pos_ < end_ && is_space(text_[pos_])) ++pos_;
  }

 private:
  // Reads a braced or quoted value; inner braces are kept.
  std::string read_delimited(char open, char close) {
    const std::size_t start = pos_;
    ++pos_;
    int depth = 0;
    while (pos_ < end_) {
      const char c = text_[pos_];
      if (c == '\\' && pos_ + 1 < end_) {
        pos_ += 2;
        continue;
      }
      if (c == close && depth == 0) {
        ++pos_;
        return std::string(text_.substr(start + 1, pos_ - start - 2));
      }
      if (c == '{') ++depth;
      else if (c == '}') {
        if (depth == 0) throw MalformedEntry(start, "unbalanced braces in field value");
        --depth;
      }
      (void)open;
      ++pos_;
    }
    throw MalformedEntry(start, "unbalanced braces in field value");
  }

  std::string_view text_;
  std::size_t pos_;
  std::size_t end_;
  const std::map<std::string, std::string>& macros_;
};

class LineIndex {
 public:
  explicit LineIndex(std::string_view text) {
    starts_.push_back(0);
    for (std::size_t i = 0; i < text.size(); ++i)
      if (text[i] == '\n') starts_.push_back(i + 1);
  }
  std::size_t line_of(std::size_t offset) const {
    return static_cast<std::size_t>(std::upper_bound(starts_.begin(), starts_.end(), offset) - starts_.begin());
  }

 private:
  std::vector<std::size_t> starts_;
};

// Entry starts are '@' signs that open a line (after indentation).
std::vector<std::size_t> entry_starts(std::string_view text) {
  std::vector<std::size_t> starts;
  bool line_start = true;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      line_start = true;
    } else if (c == '@' && line_start) {
      starts.push_back(i);
      line_start = false;
    } else if (!is_space(c)) {
      line_start = false;
    }
  }
  return starts;
}

std::vector<std::string> dedupe(std::vector<std::string> items, const std::string& what,
                                const std::string& where, std::vector<std::string>& notes) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (auto& item : items) {
    if (item.empty()) continue;
    if (!seen.insert(item).second) {
      notes.push_back(where + ": duplicate " + what + " '" + item + "' removed");
      continue;
    }
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<std::string> split_list(std::string_view raw, bool comma_fallback) {
  std::vector<std::string_view> parts;
  if (has_top_level(raw, ';') || !comma_fallback) parts = split_top_level(raw, ';');
  else parts = split_top_level(raw, ',');
  std::vector<std::string> out;
  for (auto part : parts) out.push_back(clean_text(part));
  return out;
}

std::vector<std::string> split_people(std::string_view raw) {
  const auto parts = has_top_level(raw, ';') ? split_top_level(raw, ';') : split_on_and(raw);
  std::vector<std::string> people;
  for (auto part : parts) {
    std::string name = canonical_string(decode_latex(part));
    if (!name.empty()) people.push_back(std::move(name));
  }
  return people;
}

const std::string* find_field(const EntrySource& entry, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    auto it = entry.fields.find(name);
    if (it != entry.fields.end()) return &it->second;
  }
  return nullptr;
}

std::optional<long long> leading_integer(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && is_space(text[i])) ++i;
  const std::size_t start = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == start || i - start > 18) return std::nullopt;
  return std::stoll(std::string(text.substr(start, i - start)));
}

std::variant<BibRecord, ParseWarning> to_record(const EntrySource& entry, const ParseOptions& options,
                                                std::vector<std::string>& notes) {
  const std::string where = options.source_name + ":" + std::to_string(entry.line) + " [" + entry.key + "]";
  const auto warn = [&](std::string message) {
    return ParseWarning{entry.line, entry.key, std::move(message)};
  };
  for (const auto& name : entry.duplicate_fields)
    notes.push_back(where + ": field '" + name + "' repeated, last value kept");

  if (entry.key.empty()) return warn("missing citation key");

  BibRecord record;
  record.id = entry.key;

  const std::string* title = find_field(entry, {"title"});
  const std::string* author = find_field(entry, {"author", "authors"});
  std::vector<std::string> people = author ? split_people(*author) : std::vector<std::string>{};
  if (title) record.title = clean_text(*title);
  if (record.title.empty() && people.empty()) return warn("entry has neither title nor author");
  if (people.empty()) return warn("entry has no author");

  record.student = people.front();
  record.supervisors.assign(people.begin() + 1, people.end());
  record.supervisors = dedupe(std::move(record.supervisors), "supervisor", where, notes);
  if (std::find(record.supervisors.begin(), record.supervisors.end(), record.student) != record.supervisors.end())
    return warn("student '" + record.student + "' also listed as supervisor");

  const std::string* year = find_field(entry, {"year"});
  const auto year_value = year ? leading_integer(clean_text(*year)) : std::nullopt;
  if (!year_value || *year_value < 1000 || *year_value > 9999) return warn("missing or invalid year");
  record.year = static_cast<int>(*year_value);

  if (const auto* group = find_field(entry, {"journal", "group"})) record.group = clean_text(*group);
  if (const auto* aff = find_field(entry, {"affiliations", "affiliation"}))
    record.affiliations = dedupe(split_list(*aff, false), "affiliation", where, notes);

  if (const auto* kw = find_field(entry, {"keywords", "author_keywords", "author-keywords"})) {
    std::vector<std::string> keywords;
    for (auto& k : split_list(*kw, true)) keywords.push_back(canonical_string(k));
    record.author_keywords = dedupe(std::move(keywords), "keyword", where, notes);
  }
  if (const auto* uni = find_field(entry, {"unigram_keywords", "unigrams", "keywords-plus", "keywords_plus"})) {
    std::vector<std::string> unigrams;
    for (auto& k : split_list(*uni, true)) unigrams.push_back(canonical_string(k));
    record.unigram_keywords = dedupe(std::move(unigrams), "unigram keyword", where, notes);
  }
  if (const auto* abs = find_field(entry, {"abstract"})) record.abstract = clean_text(*abs);
  if (const auto* refs = find_field(entry, {"references", "cited-references", "cited_references"})) {
    std::vector<std::string> references;
    for (auto& r : split_list(*refs, false)) references.push_back(canonical_string(r));
    record.references = dedupe(std::move(references), "reference", where, notes);
  }
  const std::string citations_key = lower_ascii(options.citations_field);
  if (auto it = entry.fields.find(citations_key); it != entry.fields.end()) {
    const std::string text = clean_text(it->second);
    if (auto count = leading_integer(text)) {
      record.citation_count = *count;
    } else if (!text.empty()) {
      notes.push_back(where + ": '" + citations_key + "' has no leading integer, citations set to 0");
    }
  }
  return record;
}

bool needs_protection(const std::string& item) {
  return item.find(',') != std::string::npos ||
         lower_ascii(item).find(" and ") != std::string::npos;
}

std::string escape_value(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '{' || c == '}') out.push_back('\\');
    if (c == '\\') {
      out += "\\textbackslash{}";
      continue;
    }
    out.push_back(c);
  }
  return out;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += "; ";
    out += escape_value(items[i]);
  }
  // a lone item containing a fallback separator is protected by braces
  if (items.size() == 1 && needs_protection(items[0])) out = "{" + out + "}";
  return out;
}

}  // namespace

std::vector<BibRecord> ParsedSource::records() const {
  std::vector<BibRecord> out;
  for (const auto& entry : entries)
    if (const auto* record = std::get_if<BibRecord>(&entry)) out.push_back(*record);
  return out;
}

std::vector<ParseWarning> ParsedSource::warnings() const {
  std::vector<ParseWarning> out;
  for (const auto& entry : entries)
    if (const auto* warning = std::get_if<ParseWarning>(&entry)) out.push_back(*warning);
  return out;
}

ParsedSource parse_bib_string(const std::string& text, const ParseOptions& options) {
  ParsedSource result;
  const LineIndex lines(text);
  const auto starts = entry_starts(text);
  std::map<std::string, std::string> macros = {
      {"jan", "January"}, {"feb", "February"}, {"mar", "March"},     {"apr", "April"},
      {"may", "May"},     {"jun", "June"},     {"jul", "July"},      {"aug", "August"},
      {"sep", "September"}, {"oct", "October"}, {"nov", "November"}, {"dec", "December"}};

  for (std::size_t n = 0; n < starts.size(); ++n) {
    const std::size_t begin = starts[n];
    const std::size_t end = n + 1 < starts.size() ? starts[n + 1] : text.size();
    ChunkParser parser(text, begin, end, macros);
    EntrySource entry;
    entry.line = lines.line_of(begin);
    try {
      entry.type = parser.read_type();
      if (entry.type == "comment" || entry.type == "preamble") continue;
      const char close = parser.open_body();
      if (entry.type == "string") {
        parser.skip_ws();
        auto [name, value] = parser.read_field();
        macros[name] = value;
        continue;
      }
      parser.read_entry(entry, close);
    } catch (const MalformedEntry& e) {
      if (entry.type == "string") {
        result.notes.push_back(options.source_name + ":" + std::to_string(lines.line_of(e.offset)) +
                               ": ignored malformed @string: " + e.what());
        continue;
      }
      result.entries.emplace_back(ParseWarning{lines.line_of(e.offset), entry.key, e.what()});
      continue;
    }
    result.entries.push_back(to_record(entry, options, result.notes));
  }
  return result;
}

ParsedSource parse_bib(std::istream& source, const ParseOptions& options) {
  std::string text{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  if (source.bad()) throw Error(ErrorCode::Io, "failed reading " + options.source_name);
  return parse_bib_string(text, options);
}

ParsedSource parse_bib_file(const std::filesystem::path& path, ParseOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  if (options.source_name == ParseOptions{}.source_name) options.source_name = path.string();
  return parse_bib(in, options);
}

void write_bib(std::ostream& out, const std::vector<BibRecord>& records,
               const std::string& citations_field) {
  for (const auto& r : records) {
    out << "@article{" << r.id << ",\n";
    out << "  author = {" << join_list(r.authors()) << "},\n";
    out << "  title = {" << escape_value(r.title) << "},\n";
    out << "  year = {" << r.year << "},\n";
    if (!r.group.empty()) out << "  journal = {" << escape_value(r.group) << "},\n";
    if (!r.affiliations.empty()) out << "  affiliations = {" << join_list(r.affiliations) << "},\n";
    if (!r.author_keywords.empty()) out << "  keywords = {" << join_list(r.author_keywords) << "},\n";
    if (!r.unigram_keywords.empty()) out << "  unigram_keywords = {" << join_list(r.unigram_keywords) << "},\n";
    if (!r.abstract.empty()) out << "  abstract = {" << escape_value(r.abstract) << "},\n";
    if (!r.references.empty()) out << "  references = {" << join_list(r.references) << "},\n";
    out << "  " << citations_field << " = {" << r.citation_count << "}\n";
    out << "}\n\n";
  }
}

}  // namespace biblio
