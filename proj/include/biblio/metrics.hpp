#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "biblio/corpus.hpp"
#include "biblio/text.hpp"

namespace biblio {

/// How "average citations per year per document" spreads citations over time.
enum class CitationAge {
  /// mean over documents of citations / (reference_year - year + 1)
  Elapsed,
  /// average citations per document / window length
  Window,
};

struct StatsOptions {
  CitationAge citation_age = CitationAge::Elapsed;
  /// Year the citation counts were collected; defaults to window end + 1.
  std::optional<int> reference_year;
};

struct CorpusStats {
  YearRange timespan;
  std::size_t documents = 0;
  double avg_citations_per_doc = 0.0;
  double avg_citations_per_year_per_doc = 0.0;
  CitationAge citation_age = CitationAge::Elapsed;
  /// Both conventions, so reports can show which one matches a target.
  double avg_citations_per_year_per_doc_elapsed = 0.0;
  double avg_citations_per_year_per_doc_window = 0.0;
  /// Distinct normalized keywords across the corpus.
  std::size_t author_keywords_total = 0;
  std::size_t unigram_keywords_total = 0;
  double avg_dissertations_per_year = 0.0;
  /// Distinct people, students and supervisors together.
  std::size_t authors = 0;
  std::size_t author_appearances = 0;
  std::size_t single_authored_docs = 0;
  std::size_t multi_authored_docs = 0;
  /// Distinct authors minus distinct authors of single-authored documents.
  std::size_t authors_of_multi_authored_docs = 0;
  double authors_per_document = 0.0;
  double coauthors_per_document = 0.0;
  /// authors_of_multi_authored_docs / multi_authored_docs; unset when there are
  /// no multi-authored documents.
  std::optional<double> collaboration_index;
  /// Appearance-based alternative: author slots in multi-authored documents
  /// over multi-authored documents.
  std::size_t appearances_in_multi_authored_docs = 0;
  std::optional<double> appearances_per_multi_authored_doc;
  /// Distinct normalized reference strings.
  std::size_t references_total = 0;
  std::size_t reference_docs = 0;
};

CorpusStats corpus_stats(const Corpus& corpus, const StatsOptions& options = {},
                         const NormalizationConfig& text = default_normalization());

struct SeriesPoint {
  int year = 0;
  double value = 0.0;

  bool operator==(const SeriesPoint&) const = default;
};

struct TimeSeries {
  std::string label;
  std::vector<SeriesPoint> points;

  std::optional<double> at(int year) const;
  bool operator==(const TimeSeries&) const = default;
};

/// Documents per year, zero-filled over the window.
TimeSeries production_growth(const Corpus& corpus);

enum class CitationMode { Total, Average };

/// Total mode is zero-filled; average mode omits years without documents.
TimeSeries citation_series(const Corpus& corpus, CitationMode mode);

enum class Entity { Supervisor, Group, Author };

struct RankedCount {
  std::string name;
  std::int64_t count = 0;

  bool operator==(const RankedCount&) const = default;
};

/// Documents per entity, descending with alphabetical tie-break. A document
/// with several supervisors counts once for each. top_n == 0 keeps all.
std::vector<RankedCount> production_distribution(const Corpus& corpus, Entity by, std::size_t top_n);

/// Most cited documents, descending with id tie-break.
std::vector<RankedCount> citation_distribution(const Corpus& corpus, std::size_t top_n);

struct Bubble {
  int year = 0;
  std::int64_t doc_count = 0;
  std::int64_t citations = 0;

  bool operator==(const Bubble&) const = default;
};

struct Timeline {
  std::string entity;
  std::vector<Bubble> bubbles;

  bool operator==(const Timeline&) const = default;
};

/// One timeline per top-n entity (ranked as in production_distribution);
/// bubbles only for years with production.
std::vector<Timeline> timelines(const Corpus& corpus, Entity by, std::size_t top_n);

/// Cumulative per-year document counts for the top-n terms by final count.
std::vector<TimeSeries> word_trends(const Corpus& corpus, TextField field, std::size_t top_n,
                                    const NormalizationConfig& text = default_normalization());

/// Document frequency per term, descending with alphabetical tie-break.
std::vector<RankedCount> frequent_words(const Corpus& corpus, TextField field, std::size_t top_n,
                                        const NormalizationConfig& text = default_normalization());

struct WeightedTerm {
  std::string term;
  double weight = 0.0;

  bool operator==(const WeightedTerm&) const = default;
};

std::vector<WeightedTerm> word_cloud_data(const Corpus& corpus, TextField field, std::size_t top_n,
                                          const NormalizationConfig& text = default_normalization());

std::string_view to_string(Entity entity);
Entity parse_entity(std::string_view name);
std::string_view to_string(CitationMode mode);
CitationMode parse_citation_mode(std::string_view name);
std::string_view to_string(CitationAge age);
CitationAge parse_citation_age(std::string_view name);

void to_json(nlohmann::json& j, const CorpusStats& s);
void to_json(nlohmann::json& j, const SeriesPoint& p);
void from_json(const nlohmann::json& j, SeriesPoint& p);
void to_json(nlohmann::json& j, const TimeSeries& s);
void from_json(const nlohmann::json& j, TimeSeries& s);
void to_json(nlohmann::json& j, const RankedCount& r);
void from_json(const nlohmann::json& j, RankedCount& r);
void to_json(nlohmann::json& j, const Bubble& b);
void from_json(const nlohmann::json& j, Bubble& b);
void to_json(nlohmann::json& j, const Timeline& t);
void from_json(const nlohmann::json& j, Timeline& t);
void to_json(nlohmann::json& j, const WeightedTerm& w);
void from_json(const nlohmann::json& j, WeightedTerm& w);

}  // namespace biblio
