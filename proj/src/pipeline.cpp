#include "biblio/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "biblio/concepts.hpp"
#include "biblio/csv.hpp"
#include "biblio/error.hpp"
#include "biblio/flow.hpp"
#include "biblio/graph.hpp"
#include "biblio/networks.hpp"

namespace biblio {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

std::size_t to_count(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size() || v.front() == '-')
    throw Error(ErrorCode::Config, fmt::format("{}: expected a non-negative integer, got '{}'", key, v));
  return static_cast<std::size_t>(n);
}

NormalizationConfig text_config(const RunConfig& config) {
  std::vector<std::string> stopwords;
  std::vector<std::pair<std::string, std::string>> synonyms;
  if (config.stopwords) stopwords = read_stopword_list(*config.stopwords);
  if (config.synonyms) synonyms = read_synonym_list(*config.synonyms);
  auto text = make_normalization_config(stopwords, synonyms, config.fold_diacritics, config.min_token_length);
  text.validate();
  return text;
}

std::set<std::string> available_fields(const Corpus& corpus) {
  std::set<std::string> fields = {"id", "year", "student", "citations"};
  for (const auto& r : corpus.records()) {
    if (!r.title.empty()) fields.insert("title");
    if (!r.abstract.empty()) fields.insert("abstract");
    if (!r.author_keywords.empty()) fields.insert("author_keywords");
    if (!r.unigram_keywords.empty() || !r.author_keywords.empty()) fields.insert("unigram_keywords");
    if (!r.supervisors.empty()) fields.insert("supervisors");
    if (!r.group.empty()) fields.insert("group");
    if (!r.references.empty()) fields.insert("references");
  }
  return fields;
}

std::vector<std::string> entity_fields(Entity by) {
  switch (by) {
    case Entity::Supervisor: return {"supervisors"};
    case Entity::Group: return {"group"};
    case Entity::Author: return {"student", "supervisors"};
  }
  return {};
}

std::string flow_field_name(FlowField f) { return std::string(to_string(f)); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct Skip {
  std::string reason;
};

class Job {
 public:
  Job(const RunConfig& config, const Corpus& corpus, const NormalizationConfig& text, const std::set<std::string>& available,
      AnalysisRecord& record)
      : corpus(corpus), text(text), config_(config), available_(available), rec(record) {}

  std::string param(const std::string& key) {
    auto v = config_.parameter(rec.name, key);
    rec.parameters[key] = v;
    return v;
  }
  std::size_t count(const std::string& key) { return to_count(rec.name + "." + key, param(key)); }
  void set_param(const std::string& key, std::string value) { rec.parameters[key] = std::move(value); }

  void uses(const std::vector<std::string>& fields) {
    for (const auto& f : fields)
      if (std::find(rec.fields.begin(), rec.fields.end(), f) == rec.fields.end()) rec.fields.push_back(f);
  }
  bool has(const std::string& field) const { return available_.count(field) > 0; }
  /// Skips the analysis when a field is missing from every record.
  void require(const std::vector<std::string>& fields) {
    uses(fields);
    for (const auto& f : fields)
      if (!has(f)) throw Skip{fmt::format("field '{}' is empty for every record", f)};
  }
  void warn(std::string message) { rec.warnings.push_back(std::move(message)); }

  void write(const std::string& rel, const std::string& content) {
    const fs::path path = config_.output_dir / rel;
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write {}", path.string()));
    rec.outputs.push_back(rel);
  }
  template <typename F>
  void write_with(const std::string& rel, F&& fill) {
    std::ostringstream out;
    fill(out);
    write(rel, out.str());
  }

  void write_graph(const std::string& base, const WeightedGraph& g) {
    write_with(base + ".graphml", [&](std::ostream& o) { write_graphml(o, g); });
    write_with(base + ".dot", [&](std::ostream& o) { write_dot(o, g); });
    write(base + ".json", dump(g));
    write_with(base + "_nodes.csv", [&](std::ostream& o) { write_nodes_csv(o, g); });
    write_with(base + "_edges.csv", [&](std::ostream& o) { write_edges_csv(o, g); });
    for (const auto& note : g.notes) warn(note);
  }

  TermDocumentMatrix tdm(bool with_bounds = true) {
    const auto field = parse_text_field(param("field"));
    require({std::string(to_string(field))});
    return term_document_matrix(corpus, field, with_bounds ? count("min_doc_freq") : 1,
                                with_bounds ? count("max_terms") : 0, text);
  }

  std::size_t clamp(const std::string& key, std::size_t value, std::size_t limit) {
    if (value <= limit) return value;
    warn(fmt::format("{} = {} exceeds the {} available terms; using {}", key, value, limit, limit));
    set_param(key, std::to_string(limit));
    return limit;
  }

  const Corpus& corpus;
  const NormalizationConfig& text;

 private:
  const RunConfig& config_;
  const std::set<std::string>& available_;

 public:
  AnalysisRecord& rec;
};

void write_series_csv(std::ostream& o, const std::vector<TimeSeries>& series) {
  csv::write_row(o, {"label", "year", "value"});
  for (const auto& s : series)
    for (const auto& p : s.points) csv::write_row(o, {s.label, std::to_string(p.year), csv::number(p.value)});
}

void write_ranked_csv(std::ostream& o, const std::vector<RankedCount>& rows) {
  csv::write_row(o, {"rank", "name", "count"});
  for (std::size_t i = 0; i < rows.size(); ++i)
    csv::write_row(o, {std::to_string(i + 1), rows[i].name, std::to_string(rows[i].count)});
}

std::string scalar(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return csv::number(v.get<double>());
  if (v.is_array()) {
    std::string out;
    for (const auto& x : v) out += (out.empty() ? "" : ":") + scalar(x);
    return out;
  }
  return v.dump();
}

void corpus_stats_job(Job& job) {
  job.uses({"year", "student", "supervisors", "citations", "author_keywords", "unigram_keywords", "references"});
  StatsOptions options;
  options.citation_age = parse_citation_age(job.param("citation_age"));
  if (const auto ry = job.param("reference_year"); !ry.empty())
    options.reference_year = static_cast<int>(to_count("corpus_stats.reference_year", ry));
  const json j = corpus_stats(job.corpus, options, job.text);
  job.write("stats/corpus_stats.json", dump(j));
  job.write_with("stats/corpus_stats.csv", [&](std::ostream& o) {
    csv::write_row(o, {"metric", "value"});
    for (const auto& [key, value] : j.items()) csv::write_row(o, {key, scalar(value)});
  });
}

void production_growth_job(Job& job) {
  job.require({"year"});
  const auto s = production_growth(job.corpus);
  job.write("series/production_growth.json", dump(s));
  job.write_with("series/production_growth.csv", [&](std::ostream& o) { write_series_csv(o, {s}); });
}

void citation_series_job(Job& job) {
  job.require({"year", "citations"});
  const auto s = citation_series(job.corpus, parse_citation_mode(job.param("mode")));
  job.write("series/citation_series.json", dump(s));
  job.write_with("series/citation_series.csv", [&](std::ostream& o) { write_series_csv(o, {s}); });
}

void production_distribution_job(Job& job) {
  const auto by = parse_entity(job.param("by"));
  job.require(entity_fields(by));
  const auto rows = production_distribution(job.corpus, by, job.count("top_n"));
  job.write("stats/production_distribution.json", dump(rows));
  job.write_with("stats/production_distribution.csv", [&](std::ostream& o) { write_ranked_csv(o, rows); });
}

void citation_distribution_job(Job& job) {
  job.require({"id", "citations"});
  const auto rows = citation_distribution(job.corpus, job.count("top_n"));
  job.write("stats/citation_distribution.json", dump(rows));
  job.write_with("stats/citation_distribution.csv", [&](std::ostream& o) { write_ranked_csv(o, rows); });
}

void timelines_job(Job& job) {
  const auto by = parse_entity(job.param("by"));
  job.require(entity_fields(by));
  job.require({"year", "citations"});
  const auto lines = timelines(job.corpus, by, job.count("top_n"));
  job.write("series/timelines.json", dump(lines));
  job.write_with("series/timelines.csv", [&](std::ostream& o) {
    csv::write_row(o, {"entity", "year", "doc_count", "citations"});
    for (const auto& l : lines)
      for (const auto& b : l.bubbles)
        csv::write_row(o, {l.entity, std::to_string(b.year), std::to_string(b.doc_count), std::to_string(b.citations)});
  });
}

// Runs `one` for every listed text field that has data.
void per_field(Job& job, const std::function<void(TextField)>& one) {
  std::size_t done = 0;
  for (const auto& name : split_list(job.param("fields"))) {
    const auto field = parse_text_field(name);
    const std::string canonical(to_string(field));
    job.uses({canonical});
    if (!job.has(canonical)) {
      job.warn(fmt::format("field '{}' is empty for every record; skipped", canonical));
      continue;
    }
    one(field);
    ++done;
  }
  if (done == 0) throw Skip{"none of the requested fields has data"};
}

void word_trends_job(Job& job) {
  job.require({"year"});
  const auto top_n = job.count("top_n");
  per_field(job, [&](TextField field) {
    const auto trends = word_trends(job.corpus, field, top_n, job.text);
    const std::string base = fmt::format("series/word_trends_{}", to_string(field));
    job.write(base + ".json", dump(trends));
    job.write_with(base + ".csv", [&](std::ostream& o) { write_series_csv(o, trends); });
  });
}

void frequent_words_job(Job& job) {
  const auto top_n = job.count("top_n");
  per_field(job, [&](TextField field) {
    const auto rows = frequent_words(job.corpus, field, top_n, job.text);
    const std::string base = fmt::format("stats/frequent_words_{}", to_string(field));
    job.write(base + ".json", dump(rows));
    job.write_with(base + ".csv", [&](std::ostream& o) { write_ranked_csv(o, rows); });
  });
}

void word_cloud_job(Job& job) {
  const auto field = parse_text_field(job.param("field"));
  job.require({std::string(to_string(field))});
  const auto terms = word_cloud_data(job.corpus, field, job.count("top_n"), job.text);
  job.write("stats/word_cloud.json", dump(terms));
  job.write_with("stats/word_cloud.csv", [&](std::ostream& o) {
    csv::write_row(o, {"term", "weight"});
    for (const auto& t : terms) csv::write_row(o, {t.term, csv::number(t.weight)});
  });
}

void topic_map_job(Job& job) {
  const auto m = job.tdm();
  const auto k = job.clamp("k", job.count("k"), m.term_count());
  const auto map = mca_topic_map(m, k);
  job.write("maps/topic_map.json", dump(map));
  job.write_with("maps/topic_map.csv", [&](std::ostream& o) {
    csv::write_row(o, {"term", "dim1", "dim2", "cluster"});
    for (const auto& p : map.points) csv::write_row(o, {p.term, csv::number(p.x), csv::number(p.y), std::to_string(p.cluster)});
  });
}

void dendrogram_job(Job& job) {
  const auto m = job.tdm();
  const auto k = job.clamp("k", job.count("k"), m.term_count());
  const auto tree = dendrogram(m, k);
  job.write("maps/dendrogram.json", dump(tree));
  job.write_with("maps/dendrogram.csv", [&](std::ostream& o) {
    csv::write_row(o, {"term", "cluster"});
    for (std::size_t i = 0; i < tree.labels.size(); ++i) csv::write_row(o, {tree.labels[i], std::to_string(tree.partition[i])});
  });
  job.write_with("maps/dendrogram_merges.csv", [&](std::ostream& o) {
    csv::write_row(o, {"step", "left", "right", "height", "size"});
    for (std::size_t i = 0; i < tree.linkage.merges.size(); ++i) {
      const auto& mg = tree.linkage.merges[i];
      csv::write_row(o, {std::to_string(i + 1), std::to_string(mg.left), std::to_string(mg.right), csv::number(mg.height),
                         std::to_string(mg.size)});
    }
  });
}

void cooccurrence_job(Job& job) {
  const auto c = cooccurrence(job.tdm());
  json j = {{"terms", c.terms}, {"counts", json::array()}};
  for (Eigen::Index i = 0; i < c.counts.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < c.counts.cols(); ++k) row.push_back(c.counts(i, k));
    j["counts"].push_back(row);
  }
  job.write("maps/cooccurrence.json", dump(j));
  job.write_with("maps/cooccurrence.csv", [&](std::ostream& o) {
    csv::write_row(o, {"term_a", "term_b", "count"});
    for (Eigen::Index i = 0; i < c.counts.rows(); ++i)
      for (Eigen::Index k = i; k < c.counts.cols(); ++k)
        if (c.counts(i, k) > 0)
          csv::write_row(o, {c.terms[static_cast<std::size_t>(i)], c.terms[static_cast<std::size_t>(k)],
                             std::to_string(c.counts(i, k))});
  });
}

void cooccurrence_network_job(Job& job) {
  const auto c = cooccurrence(job.tdm());
  const auto top_n = job.clamp("top_n", job.count("top_n"), c.size());
  const auto g = cooccurrence_network(c, top_n, parse_edge_normalization(job.param("normalization")));
  job.write_graph("networks/cooccurrence_network", g);
}

void thematic_map_job(Job& job) {
  const auto c = cooccurrence(job.tdm());
  const auto clusters = job.clamp("clusters", job.count("clusters"), c.size());
  const auto map = thematic_map(c, clusters, parse_edge_normalization(job.param("normalization")));
  job.write("maps/thematic_map.json", dump(map));
  job.write_with("maps/thematic_map.csv", [&](std::ostream& o) {
    csv::write_row(o, {"theme", "label", "centrality", "density", "doc_share", "quadrant", "members"});
    for (std::size_t i = 0; i < map.themes.size(); ++i) {
      const auto& t = map.themes[i];
      std::string members;
      for (const auto& m : t.members) members += (members.empty() ? "" : "; ") + m;
      csv::write_row(o, {std::to_string(i + 1), t.label, csv::number(t.centrality), csv::number(t.density),
                         csv::number(t.doc_share), to_string(t.quadrant), members});
    }
  });
}

void collaboration_job(Job& job) {
  job.require({"student", "supervisors"});
  job.write_graph("networks/collaboration_network", collaboration_network(job.corpus, job.count("top_n")));
}

void author_coupling_job(Job& job) {
  job.require({"student", "supervisors", "references"});
  job.write_graph("networks/author_coupling", author_coupling_network(job.corpus, job.count("min_shared")));
}

void doc_coupling_job(Job& job) {
  job.require({"references"});
  job.write_graph("networks/doc_coupling", doc_coupling_network(job.corpus, job.count("min_shared")));
}

void cocitation_job(Job& job) {
  job.require({"references"});
  job.write_graph("networks/cocitation", cocitation_network(job.corpus, job.count("top_n_refs")));
}

void flow_job(Job& job) {
  std::vector<FlowField> stages;
  std::vector<std::string> fields;
  for (const auto& name : split_list(job.param("stages"))) {
    stages.push_back(parse_flow_field(name));
    fields.push_back(flow_field_name(stages.back()));
  }
  job.require(fields);
  const auto d = flow(job.corpus, stages, job.count("top_n"), job.text);
  job.write("flows/flow.json", dump(d));
  job.write_with("flows/flow.csv", [&](std::ostream& o) { write_flow_links_csv(o, d); });
}

const std::map<std::string, void (*)(Job&)>& jobs() {
  static const std::map<std::string, void (*)(Job&)> table = {
      {"corpus_stats", corpus_stats_job},
      {"production_growth", production_growth_job},
      {"citation_series", citation_series_job},
      {"production_distribution", production_distribution_job},
      {"citation_distribution", citation_distribution_job},
      {"timelines", timelines_job},
      {"word_trends", word_trends_job},
      {"frequent_words", frequent_words_job},
      {"word_cloud", word_cloud_job},
      {"topic_map", topic_map_job},
      {"dendrogram", dendrogram_job},
      {"cooccurrence", cooccurrence_job},
      {"cooccurrence_network", cooccurrence_network_job},
      {"thematic_map", thematic_map_job},
      {"collaboration_network", collaboration_job},
      {"author_coupling", author_coupling_job},
      {"doc_coupling", doc_coupling_job},
      {"cocitation", cocitation_job},
      {"flow", flow_job},
  };
  return table;
}

AnalysisRecord run_one(const std::string& name, const RunConfig& config, const Corpus& corpus,
                       const NormalizationConfig& text, const std::set<std::string>& available) {
  AnalysisRecord rec;
  rec.name = name;
  const auto start = std::chrono::steady_clock::now();
  Job job(config, corpus, text, available, rec);
  try {
    jobs().at(name)(job);
  } catch (const Skip& s) {
    rec.status = AnalysisStatus::Skipped;
    rec.warnings.push_back(s.reason);
  } catch (const std::exception& e) {
    rec.status = AnalysisStatus::Failed;
    rec.warnings.push_back(e.what());
  }
  rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace

std::string_view to_string(AnalysisStatus status) {
  switch (status) {
    case AnalysisStatus::Ok: return "ok";
    case AnalysisStatus::Skipped: return "skipped";
    case AnalysisStatus::Failed: return "failed";
  }
  return "ok";
}

std::map<std::string, std::vector<std::string>> RunManifest::field_usage() const {
  std::map<std::string, std::vector<std::string>> usage;
  for (const auto& a : analyses) {
    if (a.status == AnalysisStatus::Skipped) continue;
    for (const auto& f : a.fields) usage[f].push_back(a.name);
  }
  return usage;
}

std::vector<std::string> RunManifest::all_outputs() const {
  std::vector<std::string> out = corpus_outputs;
  for (const auto& a : analyses) out.insert(out.end(), a.outputs.begin(), a.outputs.end());
  out.insert(out.end(), plots.begin(), plots.end());
  return out;
}

bool RunManifest::clean() const {
  return std::all_of(analyses.begin(), analyses.end(), [](const AnalysisRecord& a) { return a.status == AnalysisStatus::Ok; });
}

void to_json(json& j, const RunManifest& m) {
  json analyses = json::array();
  for (const auto& a : m.analyses)
    analyses.push_back({{"name", a.name},
                        {"status", to_string(a.status)},
                        {"fields", a.fields},
                        {"parameters", a.parameters},
                        {"outputs", a.outputs},
                        {"warnings", a.warnings},
                        {"elapsed_ms", a.elapsed_ms}});
  j = {{"corpus",
        {{"sources", m.sources},
         {"window", {m.window.start, m.window.end}},
         {"documents", m.documents},
         {"excluded_outside_window", m.excluded_outside_window},
         {"parse_warnings", m.parse_warnings},
         {"outputs", m.corpus_outputs}}},
       {"analyses", analyses},
       {"field_usage", m.field_usage()},
       {"plots", {{"files", m.plots}, {"warnings", m.plot_warnings}}}};
}

plots::RenderResult render_plots(const RunManifest& manifest, const fs::path& out_dir) {
  std::vector<plots::PlotArtifact> artifacts;
  for (const auto& a : manifest.analyses) {
    if (a.status != AnalysisStatus::Ok) continue;
    for (const auto& o : a.outputs)
      if (fs::path(o).extension() == ".json" && o.rfind("networks/", 0) != 0) artifacts.push_back({a.name, o});
  }
  return plots::render_plots(artifacts, out_dir);
}

RunManifest run(const RunConfig& config, const Corpus& corpus) {
  const auto text = text_config(config);
  const auto available = available_fields(corpus);
  fs::create_directories(config.output_dir);

  RunManifest manifest;
  manifest.sources = corpus.provenance().sources;
  manifest.window = corpus.window();
  manifest.documents = corpus.size();
  manifest.excluded_outside_window = corpus.provenance().excluded_outside_window;
  manifest.parse_warnings = corpus.provenance().warnings;
  {
    fs::create_directories(config.output_dir / "stats");
    std::ofstream(config.output_dir / "stats/provenance.log", std::ios::binary) << provenance_log(corpus);
    manifest.corpus_outputs.push_back("stats/provenance.log");
  }

  // Analyses only read the corpus and write disjoint paths, so they can run
  // on a small worker pool; results land in their canonical slot.
  manifest.analyses.resize(config.enabled.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < config.enabled.size(); i = next++)
      manifest.analyses[i] = run_one(config.enabled[i], config, corpus, text, available);
  };
  const std::size_t threads = std::min(config.jobs, config.enabled.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (config.plots) {
    auto rendered = render_plots(manifest, config.output_dir);
    manifest.plots = std::move(rendered.files);
    manifest.plot_warnings = std::move(rendered.warnings);
  }
  std::ofstream(config.output_dir / "manifest.json", std::ios::binary) << dump(manifest);
  return manifest;
}

RunManifest run(const RunConfig& config) {
  text_config(config);
  ParseOptions options;
  options.citations_field = config.citations_field;
  const Corpus corpus = load_corpus(config.inputs, config.window, options);
  return run(config, corpus);
}

int exit_code(const RunManifest& manifest) { return manifest.clean() ? 0 : 2; }

}  // namespace biblio
