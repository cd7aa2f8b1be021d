#include "biblio/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "biblio/error.hpp"

namespace biblio {
namespace {

std::vector<RankedCount> rank(const std::map<std::string, std::int64_t>& counts, std::size_t top_n) {
  std::vector<RankedCount> out;
  out.reserve(counts.size());
  for (const auto& [name, count] : counts) out.push_back({name, count});
  std::stable_sort(out.begin(), out.end(), [](const RankedCount& a, const RankedCount& b) {
    return a.count != b.count ? a.count > b.count : a.name < b.name;
  });
  if (top_n != 0 && out.size() > top_n) out.resize(top_n);
  return out;
}

std::vector<std::string> entities_of(const BibRecord& record, Entity by) {
  switch (by) {
    case Entity::Supervisor: return record.supervisors;
    case Entity::Group:
      if (record.group.empty()) return {};
      return {record.group};
    case Entity::Author: return record.authors();
  }
  return {};
}

std::map<std::string, std::int64_t> document_frequency(const Corpus& corpus, TextField field,
                                                       const NormalizationConfig& text) {
  std::map<std::string, std::int64_t> df;
  for (const auto& record : corpus.records())
    for (const auto& term : document_terms(record, field, text)) ++df[term];
  return df;
}

}  // namespace

CorpusStats corpus_stats(const Corpus& corpus, const StatsOptions& options, const NormalizationConfig& text) {
  CorpusStats s;
  const auto& records = corpus.records();
  s.timespan = corpus.window();
  s.documents = records.size();

  std::set<std::string> people;
  std::set<std::string> single_authors;
  std::set<std::string> keywords;
  std::set<std::string> unigrams;
  std::set<std::string> references;
  std::int64_t citations = 0;
  double elapsed_sum = 0.0;
  const int reference_year = options.reference_year.value_or(corpus.window().end + 1);

  for (const auto& r : records) {
    const auto authors = r.authors();
    people.insert(authors.begin(), authors.end());
    s.author_appearances += authors.size();
    if (r.single_authored()) {
      ++s.single_authored_docs;
      single_authors.insert(r.student);
    } else {
      s.appearances_in_multi_authored_docs += authors.size();
    }
    for (auto& k : document_terms(r, TextField::AuthorKeywords, text)) keywords.insert(std::move(k));
    for (auto& k : document_terms(r, TextField::UnigramKeywords, text)) unigrams.insert(std::move(k));
    references.insert(r.references.begin(), r.references.end());
    if (!r.references.empty()) ++s.reference_docs;
    citations += r.citation_count;
    const int age = std::max(1, reference_year - r.year + 1);
    elapsed_sum += static_cast<double>(r.citation_count) / age;
  }

  const auto docs = static_cast<double>(s.documents);
  s.multi_authored_docs = s.documents - s.single_authored_docs;
  s.authors = people.size();
  s.authors_of_multi_authored_docs = s.authors - single_authors.size();
  s.authors_per_document = static_cast<double>(s.authors) / docs;
  s.coauthors_per_document = static_cast<double>(s.author_appearances) / docs;
  if (s.multi_authored_docs > 0)
    s.collaboration_index =
        static_cast<double>(s.authors_of_multi_authored_docs) / static_cast<double>(s.multi_authored_docs);
  if (s.multi_authored_docs > 0)
    s.appearances_per_multi_authored_doc =
        static_cast<double>(s.appearances_in_multi_authored_docs) / static_cast<double>(s.multi_authored_docs);
  s.avg_citations_per_doc = static_cast<double>(citations) / docs;
  s.avg_citations_per_year_per_doc_elapsed = elapsed_sum / docs;
  s.avg_citations_per_year_per_doc_window = s.avg_citations_per_doc / corpus.window().length();
  s.citation_age = options.citation_age;
  s.avg_citations_per_year_per_doc = options.citation_age == CitationAge::Elapsed
                                         ? s.avg_citations_per_year_per_doc_elapsed
                                         : s.avg_citations_per_year_per_doc_window;
  s.avg_dissertations_per_year = docs / corpus.window().length();
  s.author_keywords_total = keywords.size();
  s.unigram_keywords_total = unigrams.size();
  s.references_total = references.size();
  return s;
}

std::optional<double> TimeSeries::at(int year) const {
  for (const auto& p : points)
    if (p.year == year) return p.value;
  return std::nullopt;
}

TimeSeries production_growth(const Corpus& corpus) {
  std::map<int, double> counts;
  for (int y : corpus.window().years()) counts[y] = 0.0;
  for (const auto& r : corpus.records()) counts[r.year] += 1.0;
  TimeSeries series{"documents", {}};
  for (const auto& [year, value] : counts) series.points.push_back({year, value});
  return series;
}

TimeSeries citation_series(const Corpus& corpus, CitationMode mode) {
  std::map<int, std::pair<std::int64_t, std::int64_t>> per_year;  // docs, citations
  for (int y : corpus.window().years()) per_year[y] = {0, 0};
  for (const auto& r : corpus.records()) {
    auto& [docs, cites] = per_year[r.year];
    ++docs;
    cites += r.citation_count;
  }
  TimeSeries series{mode == CitationMode::Total ? "citations_total" : "citations_average", {}};
  for (const auto& [year, entry] : per_year) {
    const auto [docs, cites] = entry;
    if (mode == CitationMode::Total) {
      series.points.push_back({year, static_cast<double>(cites)});
    } else if (docs > 0) {
      series.points.push_back({year, static_cast<double>(cites) / static_cast<double>(docs)});
    }
  }
  return series;
}

std::vector<RankedCount> production_distribution(const Corpus& corpus, Entity by, std::size_t top_n) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& r : corpus.records())
    for (const auto& name : entities_of(r, by)) ++counts[name];
  return rank(counts, top_n);
}

std::vector<RankedCount> citation_distribution(const Corpus& corpus, std::size_t top_n) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& r : corpus.records()) counts[r.id] = r.citation_count;
  return rank(counts, top_n);
}

std::vector<Timeline> timelines(const Corpus& corpus, Entity by, std::size_t top_n) {
  const auto top = production_distribution(corpus, by, top_n);
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<std::map<int, Bubble>> per_entity(top.size());
  for (std::size_t i = 0; i < top.size(); ++i) slot[top[i].name] = i;
  for (const auto& r : corpus.records()) {
    for (const auto& name : entities_of(r, by)) {
      auto it = slot.find(name);
      if (it == slot.end()) continue;
      auto& bubble = per_entity[it->second][r.year];
      bubble.year = r.year;
      ++bubble.doc_count;
      bubble.citations += r.citation_count;
    }
  }
  std::vector<Timeline> out;
  for (std::size_t i = 0; i < top.size(); ++i) {
    Timeline t{top[i].name, {}};
    for (const auto& [year, bubble] : per_entity[i]) t.bubbles.push_back(bubble);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<TimeSeries> word_trends(const Corpus& corpus, TextField field, std::size_t top_n,
                                    const NormalizationConfig& text) {
  const auto years = corpus.window().years();
  std::map<std::string, std::map<int, std::int64_t>> per_term;
  for (const auto& r : corpus.records())
    for (const auto& term : document_terms(r, field, text)) ++per_term[term][r.year];

  std::map<std::string, std::int64_t> totals;
  for (const auto& [term, by_year] : per_term) {
    std::int64_t total = 0;
    for (const auto& [year, n] : by_year) total += n;
    totals[term] = total;
  }
  std::vector<TimeSeries> out;
  for (const auto& top : rank(totals, top_n)) {
    TimeSeries series{top.name, {}};
    const auto& by_year = per_term[top.name];
    double running = 0.0;
    for (int y : years) {
      if (auto it = by_year.find(y); it != by_year.end()) running += static_cast<double>(it->second);
      series.points.push_back({y, running});
    }
    out.push_back(std::move(series));
  }
  return out;
}

std::vector<RankedCount> frequent_words(const Corpus& corpus, TextField field, std::size_t top_n,
                                        const NormalizationConfig& text) {
  return rank(document_frequency(corpus, field, text), top_n);
}

std::vector<WeightedTerm> word_cloud_data(const Corpus& corpus, TextField field, std::size_t top_n,
                                          const NormalizationConfig& text) {
  std::vector<WeightedTerm> out;
  for (const auto& r : frequent_words(corpus, field, top_n, text))
    out.push_back({r.name, static_cast<double>(r.count)});
  return out;
}

std::string_view to_string(Entity entity) {
  switch (entity) {
    case Entity::Supervisor: return "supervisor";
    case Entity::Group: return "group";
    case Entity::Author: return "author";
  }
  return "supervisor";
}

Entity parse_entity(std::string_view name) {
  if (name == "supervisor" || name == "supervisors") return Entity::Supervisor;
  if (name == "group" || name == "groups") return Entity::Group;
  if (name == "author" || name == "authors") return Entity::Author;
  throw Error(ErrorCode::InvalidArgument, "unknown entity '" + std::string(name) + "'");
}

std::string_view to_string(CitationMode mode) { return mode == CitationMode::Total ? "total" : "average"; }

CitationMode parse_citation_mode(std::string_view name) {
  if (name == "total") return CitationMode::Total;
  if (name == "average") return CitationMode::Average;
  throw Error(ErrorCode::InvalidArgument, "unknown citation mode '" + std::string(name) + "'");
}

std::string_view to_string(CitationAge age) { return age == CitationAge::Elapsed ? "elapsed" : "window"; }

CitationAge parse_citation_age(std::string_view name) {
  if (name == "elapsed") return CitationAge::Elapsed;
  if (name == "window") return CitationAge::Window;
  throw Error(ErrorCode::InvalidArgument, "unknown citation age convention '" + std::string(name) + "'");
}

void to_json(nlohmann::json& j, const CorpusStats& s) {
  j = nlohmann::json{
      {"timespan", {s.timespan.start, s.timespan.end}},
      {"documents", s.documents},
      {"avg_citations_per_doc", s.avg_citations_per_doc},
      {"avg_citations_per_year_per_doc", s.avg_citations_per_year_per_doc},
      {"citation_age_convention", to_string(s.citation_age)},
      {"avg_citations_per_year_per_doc_elapsed", s.avg_citations_per_year_per_doc_elapsed},
      {"avg_citations_per_year_per_doc_window", s.avg_citations_per_year_per_doc_window},
      {"author_keywords_total", s.author_keywords_total},
      {"unigram_keywords_total", s.unigram_keywords_total},
      {"avg_dissertations_per_year", s.avg_dissertations_per_year},
      {"authors", s.authors},
      {"author_appearances", s.author_appearances},
      {"single_authored_docs", s.single_authored_docs},
      {"multi_authored_docs", s.multi_authored_docs},
      {"authors_of_multi_authored_docs", s.authors_of_multi_authored_docs},
      {"authors_per_document", s.authors_per_document},
      {"coauthors_per_document", s.coauthors_per_document},
      {"collaboration_index", s.collaboration_index ? nlohmann::json(*s.collaboration_index) : nlohmann::json()},
      {"appearances_in_multi_authored_docs", s.appearances_in_multi_authored_docs},
      {"appearances_per_multi_authored_doc",
       s.appearances_per_multi_authored_doc ? nlohmann::json(*s.appearances_per_multi_authored_doc) : nlohmann::json()},
      {"references_total", s.references_total},
      {"reference_docs", s.reference_docs},
  };
}

void to_json(nlohmann::json& j, const SeriesPoint& p) { j = nlohmann::json::array({p.year, p.value}); }
void from_json(const nlohmann::json& j, SeriesPoint& p) {
  p.year = j.at(0).get<int>();
  p.value = j.at(1).get<double>();
}
void to_json(nlohmann::json& j, const TimeSeries& s) { j = {{"label", s.label}, {"points", s.points}}; }
void from_json(const nlohmann::json& j, TimeSeries& s) {
  j.at("label").get_to(s.label);
  j.at("points").get_to(s.points);
}
void to_json(nlohmann::json& j, const RankedCount& r) { j = {{"name", r.name}, {"count", r.count}}; }
void from_json(const nlohmann::json& j, RankedCount& r) {
  j.at("name").get_to(r.name);
  j.at("count").get_to(r.count);
}
void to_json(nlohmann::json& j, const Bubble& b) {
  j = {{"year", b.year}, {"doc_count", b.doc_count}, {"citations", b.citations}};
}
void from_json(const nlohmann::json& j, Bubble& b) {
  j.at("year").get_to(b.year);
  j.at("doc_count").get_to(b.doc_count);
  j.at("citations").get_to(b.citations);
}
void to_json(nlohmann::json& j, const Timeline& t) { j = {{"entity", t.entity}, {"bubbles", t.bubbles}}; }
void from_json(const nlohmann::json& j, Timeline& t) {
  j.at("entity").get_to(t.entity);
  j.at("bubbles").get_to(t.bubbles);
}
void to_json(nlohmann::json& j, const WeightedTerm& w) { j = {{"term", w.term}, {"weight", w.weight}}; }
void from_json(const nlohmann::json& j, WeightedTerm& w) {
  j.at("term").get_to(w.term);
  j.at("weight").get_to(w.weight);
}

}  // namespace biblio
