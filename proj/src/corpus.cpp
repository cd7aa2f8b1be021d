#include "biblio/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_set>

#include "biblio/error.hpp"

namespace biblio {

std::vector<std::string> BibRecord::authors() const {
  std::vector<std::string> out;
  out.reserve(1 + supervisors.size());
  out.push_back(student);
  out.insert(out.end(), supervisors.begin(), supervisors.end());
  return out;
}

std::string_view to_string(TextField field) {
  switch (field) {
    case TextField::Title: return "title";
    case TextField::Abstract: return "abstract";
    case TextField::AuthorKeywords: return "author_keywords";
    case TextField::UnigramKeywords: return "unigram_keywords";
  }
  return "title";
}

TextField parse_text_field(std::string_view name) {
  if (name == "title" || name == "titles") return TextField::Title;
  if (name == "abstract" || name == "abstracts") return TextField::Abstract;
  if (name == "author_keywords" || name == "keywords") return TextField::AuthorKeywords;
  if (name == "unigram_keywords" || name == "unigrams") return TextField::UnigramKeywords;
  throw Error(ErrorCode::InvalidArgument, "unknown text field '" + std::string(name) + "'");
}

std::vector<int> YearRange::years() const {
  std::vector<int> out;
  for (int y = start; y <= end; ++y) out.push_back(y);
  return out;
}

YearRange parse_year_range(const std::string& text) {
  const auto sep = text.find_first_of(":-");
  const auto bad = [&] { return Error(ErrorCode::Config, "invalid year range '" + text + "', expected YYYY:YYYY"); };
  if (sep == std::string::npos) throw bad();
  YearRange range;
  const char* begin = text.data();
  auto r1 = std::from_chars(begin, begin + sep, range.start);
  auto r2 = std::from_chars(begin + sep + 1, begin + text.size(), range.end);
  if (r1.ec != std::errc{} || r1.ptr != begin + sep || r2.ec != std::errc{} || r2.ptr != begin + text.size())
    throw bad();
  if (range.start > range.end) throw bad();
  return range;
}

Corpus::Corpus(std::vector<BibRecord> records, YearRange window, Provenance provenance)
    : records_(std::move(records)), window_(window), provenance_(std::move(provenance)) {
  if (window_.start > window_.end)
    throw Error(ErrorCode::InvalidArgument, "observation window start is after its end");
  if (records_.empty())
    throw Error(ErrorCode::EmptyCorpus, "no records inside window " + std::to_string(window_.start) + "-" +
                                            std::to_string(window_.end));
  std::unordered_set<std::string> ids;
  for (const auto& record : records_) {
    if (!ids.insert(record.id).second) throw Error(ErrorCode::DuplicateId, "duplicate record id '" + record.id + "'");
    if (!window_.contains(record.year))
      throw Error(ErrorCode::InvalidArgument, "record '" + record.id + "' lies outside the window");
    if (record.student.empty()) throw Error(ErrorCode::InvalidArgument, "record '" + record.id + "' has no student");
  }
}

Corpus build_corpus(const std::vector<BibRecord>& records, YearRange window, Provenance provenance) {
  if (window.start > window.end)
    throw Error(ErrorCode::InvalidArgument, "observation window start is after its end");
  std::vector<BibRecord> kept;
  for (const auto& record : records) {
    if (window.contains(record.year)) kept.push_back(record);
    else ++provenance.excluded_outside_window;
  }
  return Corpus(std::move(kept), window, std::move(provenance));
}

Corpus load_corpus(const std::vector<std::filesystem::path>& paths, YearRange window, const ParseOptions& options) {
  Provenance provenance;
  std::vector<BibRecord> records;
  for (const auto& path : paths) {
    ParseOptions file_options = options;
    file_options.source_name = path.string();
    const ParsedSource parsed = parse_bib_file(path, file_options);
    provenance.sources.push_back(path.string());
    for (const auto& entry : parsed.entries) {
      if (const auto* record = std::get_if<BibRecord>(&entry)) {
        records.push_back(*record);
      } else {
        const auto& w = std::get<ParseWarning>(entry);
        provenance.warnings.push_back(path.string() + ":" + std::to_string(w.line) +
                                      (w.key.empty() ? "" : " [" + w.key + "]") + ": " + w.message);
      }
    }
    provenance.notes.insert(provenance.notes.end(), parsed.notes.begin(), parsed.notes.end());
  }
  return build_corpus(records, window, std::move(provenance));
}

std::string provenance_log(const Corpus& corpus) {
  std::ostringstream out;
  const auto& p = corpus.provenance();
  out << "window " << corpus.window().start << "-" << corpus.window().end << "\n";
  for (const auto& source : p.sources) out << "source " << source << "\n";
  out << "records " << corpus.size() << "\n";
  out << "excluded_outside_window " << p.excluded_outside_window << "\n";
  out << "warnings " << p.warnings.size() << "\n";
  for (const auto& w : p.warnings) out << "warning " << w << "\n";
  for (const auto& n : p.notes) out << "note " << n << "\n";
  return out.str();
}

}  // namespace biblio
