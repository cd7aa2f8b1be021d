#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "biblio/error.hpp"
#include "biblio/pipeline.hpp"

namespace biblio {
namespace {

using Defaults = std::map<std::string, std::string>;

const std::vector<std::pair<std::string, Defaults>>& table() {
  static const std::vector<std::pair<std::string, Defaults>> t = {
      {"corpus_stats", {{"citation_age", "elapsed"}, {"reference_year", ""}}},
      {"production_growth", {}},
      {"citation_series", {{"mode", "total"}}},
      {"production_distribution", {{"by", "supervisor"}, {"top_n", "10"}}},
      {"citation_distribution", {{"top_n", "10"}}},
      {"timelines", {{"by", "supervisor"}, {"top_n", "10"}}},
      {"word_trends", {{"fields", "title,abstract,author_keywords"}, {"top_n", "5"}}},
      {"frequent_words", {{"fields", "title,abstract,author_keywords"}, {"top_n", "20"}}},
      {"word_cloud", {{"field", "unigram_keywords"}, {"top_n", "50"}}},
      {"topic_map", {{"field", "author_keywords"}, {"min_doc_freq", "2"}, {"max_terms", "50"}, {"k", "4"}}},
      {"dendrogram", {{"field", "author_keywords"}, {"min_doc_freq", "2"}, {"max_terms", "50"}, {"k", "4"}}},
      {"cooccurrence", {{"field", "author_keywords"}, {"min_doc_freq", "2"}, {"max_terms", "50"}}},
      {"cooccurrence_network",
       {{"field", "author_keywords"}, {"min_doc_freq", "1"}, {"max_terms", "0"}, {"top_n", "30"},
        {"normalization", "association"}}},
      {"thematic_map",
       {{"field", "author_keywords"}, {"min_doc_freq", "2"}, {"max_terms", "100"}, {"clusters", "6"},
        {"normalization", "association"}}},
      {"collaboration_network", {{"top_n", "0"}}},
      {"author_coupling", {{"min_shared", "1"}}},
      {"doc_coupling", {{"min_shared", "1"}}},
      {"cocitation", {{"top_n_refs", "30"}}},
      {"flow", {{"stages", "group,author_keywords,supervisors"}, {"top_n", "10"}}},
  };
  return t;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw Error(ErrorCode::Config, fmt::format("{}: expected a boolean, got '{}'", key, v));
}

std::size_t parse_count(const std::string& key, const std::string& v) {
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

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  std::filesystem::path p(value);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

std::filesystem::path existing_file(const std::filesystem::path& base, const std::string& key, const std::string& value) {
  auto p = resolve(base, value);
  if (!std::filesystem::is_regular_file(p))
    throw Error(ErrorCode::Config, fmt::format("{}: file '{}' does not exist", key, p.string()));
  return p;
}

void check_keys(const std::string& section, const boost::property_tree::ptree& tree, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : tree)
    if (!allowed.count(key)) throw Error(ErrorCode::Config, fmt::format("unknown key '{}' in [{}]", key, section));
}

}  // namespace

const std::vector<std::string>& analysis_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, defaults] : table()) n.push_back(name);
    return n;
  }();
  return names;
}

const std::map<std::string, std::string>& analysis_defaults(const std::string& analysis) {
  for (const auto& [name, defaults] : table())
    if (name == analysis) return defaults;
  throw Error(ErrorCode::Config, fmt::format("unknown analysis '{}'", analysis));
}

std::string RunConfig::parameter(const std::string& analysis, const std::string& key) const {
  const auto& defaults = analysis_defaults(analysis);
  auto d = defaults.find(key);
  if (d == defaults.end())
    throw Error(ErrorCode::Config, fmt::format("analysis '{}' has no parameter '{}'", analysis, key));
  if (auto s = parameters.find(analysis); s != parameters.end())
    if (auto v = s->second.find(key); v != s->second.end()) return v->second;
  if (auto s = parameters.find("defaults"); s != parameters.end())
    if (auto v = s->second.find(key); v != s->second.end()) return v->second;
  return d->second;
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::Config, fmt::format("config line {}: {}", e.line(), e.message()));
  }

  RunConfig config;
  config.enabled = analysis_names();
  bool have_input = false;
  bool have_window = false;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw Error(ErrorCode::Config, fmt::format("key '{}' outside of a section", section));
    if (section == "input") {
      check_keys(section, body,
                 {"bib", "window", "citations_field", "stopwords", "synonyms", "min_token_length", "fold_diacritics"});
      for (const auto& [key, node] : body) {
        const std::string v = trim(node.data());
        if (key == "bib") {
          for (const auto& item : split_list(v)) config.inputs.push_back(existing_file(base_dir, "input.bib", item));
          have_input = true;
        } else if (key == "window") {
          config.window = parse_year_range(v);
          have_window = true;
        } else if (key == "citations_field") {
          if (v.empty()) throw Error(ErrorCode::Config, "input.citations_field is empty");
          config.citations_field = v;
        } else if (key == "stopwords") {
          config.stopwords = existing_file(base_dir, "input.stopwords", v);
        } else if (key == "synonyms") {
          config.synonyms = existing_file(base_dir, "input.synonyms", v);
        } else if (key == "min_token_length") {
          config.min_token_length = parse_count("input.min_token_length", v);
        } else if (key == "fold_diacritics") {
          config.fold_diacritics = parse_bool("input.fold_diacritics", v);
        }
      }
    } else if (section == "output") {
      check_keys(section, body, {"dir", "plots", "jobs"});
      for (const auto& [key, node] : body) {
        const std::string v = trim(node.data());
        if (key == "dir") config.output_dir = resolve(base_dir, v);
        else if (key == "plots") config.plots = parse_bool("output.plots", v);
        else if (key == "jobs") config.jobs = std::max<std::size_t>(1, parse_count("output.jobs", v));
      }
    } else if (section == "analyses") {
      check_keys(section, body, {"enabled"});
      const std::string v = trim(body.get<std::string>("enabled", "all"));
      if (v != "all") restrict_analyses(config, split_list(v));
    } else if (section == "defaults") {
      check_keys(section, body, {"top_n"});
      parse_count("defaults.top_n", trim(body.get<std::string>("top_n", "0")));
      for (const auto& [key, node] : body) config.parameters["defaults"][key] = trim(node.data());
    } else {
      const auto& defaults = analysis_defaults(section);
      std::set<std::string> allowed;
      for (const auto& [key, value] : defaults) allowed.insert(key);
      check_keys(section, body, allowed);
      for (const auto& [key, node] : body) config.parameters[section][key] = trim(node.data());
    }
  }
  if (!have_input || config.inputs.empty()) throw Error(ErrorCode::Config, "input.bib lists no files");
  if (!have_window) throw Error(ErrorCode::Config, "input.window is required");
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, fmt::format("cannot open config '{}'", path.string()));
  return parse_config(in, std::filesystem::absolute(path).parent_path());
}

void restrict_analyses(RunConfig& config, const std::vector<std::string>& only) {
  std::set<std::string> wanted;
  for (const auto& name : only) {
    const auto& names = analysis_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw Error(ErrorCode::Config, fmt::format("unknown analysis '{}'", name));
    wanted.insert(name);
  }
  std::vector<std::string> kept;
  for (const auto& name : analysis_names())
    if (wanted.count(name)) kept.push_back(name);
  config.enabled = std::move(kept);
}

}  // namespace biblio
