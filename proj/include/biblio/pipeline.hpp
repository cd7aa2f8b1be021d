#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "biblio/corpus.hpp"
#include "biblio/metrics.hpp"
#include "biblio/plots.hpp"

namespace biblio {

/// Every analysis the pipeline knows, in execution and manifest order.
const std::vector<std::string>& analysis_names();

/// Parameter keys accepted in an analysis section and their defaults.
const std::map<std::string, std::string>& analysis_defaults(const std::string& analysis);

struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  YearRange window;
  std::string citations_field = "citations";
  std::optional<std::filesystem::path> stopwords;
  std::optional<std::filesystem::path> synonyms;
  std::size_t min_token_length = 2;
  bool fold_diacritics = true;
  std::filesystem::path output_dir = "out";
  bool plots = true;
  /// Worker threads for independent analyses.
  std::size_t jobs = 1;
  /// Subset of analysis_names(), kept in canonical order.
  std::vector<std::string> enabled;
  /// Per-analysis overrides; unspecified keys fall back to analysis_defaults.
  std::map<std::string, std::map<std::string, std::string>> parameters;

  /// Resolved parameter value (override, then [defaults] section, then built-in).
  std::string parameter(const std::string& analysis, const std::string& key) const;
};

/// INI-style file:
///   [input]    bib (comma separated), window, citations_field, stopwords,
///              synonyms, min_token_length, fold_diacritics
///   [output]   dir, plots, jobs
///   [analyses] enabled = all | name, name, ...
///   [defaults] top_n
///   [<analysis>] keys from analysis_defaults
/// Relative paths resolve against the file's directory. Throws Error{Config}.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);

/// Replaces the enabled set (canonical order is kept); throws Error{Config}
/// on an unknown name.
void restrict_analyses(RunConfig& config, const std::vector<std::string>& only);

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnvVar = "BIBLIOSCAPE_CONFIG";

enum class AnalysisStatus { Ok, Skipped, Failed };

std::string_view to_string(AnalysisStatus status);

struct AnalysisRecord {
  std::string name;
  AnalysisStatus status = AnalysisStatus::Ok;
  /// Corpus fields the analysis consumed.
  std::vector<std::string> fields;
  std::map<std::string, std::string> parameters;
  /// Paths relative to the output directory.
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
  double elapsed_ms = 0.0;
};

struct RunManifest {
  std::vector<std::string> sources;
  YearRange window;
  std::size_t documents = 0;
  std::size_t excluded_outside_window = 0;
  std::vector<std::string> parse_warnings;
  /// Files written before the analyses (provenance log).
  std::vector<std::string> corpus_outputs;
  std::vector<AnalysisRecord> analyses;
  std::vector<std::string> plots;
  std::vector<std::string> plot_warnings;

  /// field -> analyses that consumed it.
  std::map<std::string, std::vector<std::string>> field_usage() const;
  /// Every file in the bundle except manifest.json, in manifest order.
  std::vector<std::string> all_outputs() const;
  bool clean() const;
};

void to_json(nlohmann::json& j, const RunManifest& m);

/// Loads the corpus, runs every enabled analysis, renders plots and writes
/// manifest.json. Throws Error{EmptyCorpus}/Error{Config}/Error{Io} on fatal
/// problems; analysis failures are recorded in the manifest.
RunManifest run(const RunConfig& config);

/// Runs the analyses over an already built corpus.
RunManifest run(const RunConfig& config, const Corpus& corpus);

/// Renders the plottable JSON artifacts of the successful analyses.
plots::RenderResult render_plots(const RunManifest& manifest, const std::filesystem::path& out_dir);

/// 0 when every analysis succeeded, 2 otherwise.
int exit_code(const RunManifest& manifest);

}  // namespace biblio
