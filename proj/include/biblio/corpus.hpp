#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "biblio/bib.hpp"
#include "biblio/record.hpp"

namespace biblio {

/// Inclusive calendar-year range.
struct YearRange {
  int start = 0;
  int end = 0;

  bool contains(int year) const { return year >= start && year <= end; }
  int length() const { return end - start + 1; }
  std::vector<int> years() const;

  bool operator==(const YearRange&) const = default;
};

/// Parses "YYYY:YYYY" (or "YYYY-YYYY"). Throws Error{Config}.
YearRange parse_year_range(const std::string& text);

struct Provenance {
  std::vector<std::string> sources;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
  std::size_t excluded_outside_window = 0;
};

/// Validated, immutable collection of records over an observation window.
class Corpus {
 public:
  /// Throws Error{DuplicateId}, Error{InvalidArgument} (record outside window
  /// or without a student) or Error{EmptyCorpus}.
  Corpus(std::vector<BibRecord> records, YearRange window, Provenance provenance = {});

  const std::vector<BibRecord>& records() const { return records_; }
  const YearRange& window() const { return window_; }
  const Provenance& provenance() const { return provenance_; }
  std::size_t size() const { return records_.size(); }

 private:
  std::vector<BibRecord> records_;
  YearRange window_;
  Provenance provenance_;
};

/// Keeps records inside the window. Input order is preserved.
Corpus build_corpus(const std::vector<BibRecord>& records, YearRange window,
                    Provenance provenance = {});

/// Parses every file and builds the corpus; parse warnings and notes go into
/// the provenance.
Corpus load_corpus(const std::vector<std::filesystem::path>& paths, YearRange window,
                   const ParseOptions& options = {});

/// Plain-text provenance log.
std::string provenance_log(const Corpus& corpus);

}  // namespace biblio
