#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "biblio/error.hpp"
#include "biblio/pipeline.hpp"
#include "support/synthetic.hpp"

using namespace biblio;
namespace fs = std::filesystem;

namespace {

const fs::path kData = BIBLIO_TEST_DATA;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("biblio_" + name + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::set<std::string> files_under(const fs::path& root) {
  std::set<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out.insert(fs::relative(e.path(), root).generic_string());
  return out;
}

RunConfig fixture_config(const fs::path& out) {
  auto config = load_config(kData / "pipeline.ini");
  config.output_dir = out;
  return config;
}

const AnalysisRecord& record_of(const RunManifest& m, const std::string& name) {
  auto it = std::find_if(m.analyses.begin(), m.analyses.end(), [&](const auto& a) { return a.name == name; });
  if (it == m.analyses.end()) throw std::runtime_error("no record for " + name);
  return *it;
}

nlohmann::json without_timings(nlohmann::json j) {
  for (auto& a : j["analyses"]) a.erase("elapsed_ms");
  return j;
}

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, kData);
}

ErrorCode parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "config accepted:\n" << text;
  return ErrorCode::Io;
}

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + BIBLIOSCAPE_BIN + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Theses without a bibliography, so the reference analyses have nothing to use.
void write_unreferenced_bib(const fs::path& path) {
  std::ofstream out(path);
  for (int i = 0; i < 4; ++i)
    out << "@mastersthesis{t" << i << ",\n  author = {Student " << i << "; Lopez, E.},\n  title = {Fuzzy scheduling study "
        << i << "},\n  year = {" << 2012 + i << "},\n  keywords = {scheduling, fuzzy logic},\n  journal = {MMC}\n}\n\n";
}

}  // namespace

TEST(Config, FixtureLoads) {
  const auto config = load_config(kData / "pipeline.ini");
  EXPECT_EQ(config.window, (YearRange{2010, 2020}));
  ASSERT_EQ(config.inputs.size(), 1u);
  EXPECT_EQ(config.inputs[0], kData / "theses.bib");
  EXPECT_EQ(config.output_dir, kData / "out");
  EXPECT_EQ(config.enabled, analysis_names());
  EXPECT_EQ(config.parameter("topic_map", "k"), "3");
  EXPECT_EQ(config.parameter("dendrogram", "max_terms"), "50");
  EXPECT_EQ(config.parameter("frequent_words", "top_n"), "8");
  EXPECT_EQ(config.parameter("cooccurrence_network", "top_n"), "6");
}

TEST(Config, Rejections) {
  const std::string input = "[input]\nbib = theses.bib\nwindow = 2010:2020\n";
  EXPECT_NO_THROW(parse(input));
  EXPECT_EQ(parse_error("[input]\nbib = theses.bib\n"), ErrorCode::Config);
  EXPECT_EQ(parse_error("[input]\nbib = missing.bib\nwindow = 2010:2020\n"), ErrorCode::Config);
  EXPECT_EQ(parse_error(input + "colour = red\n"), ErrorCode::Config);
  EXPECT_EQ(parse_error(input + "[plotting]\nsize = 3\n"), ErrorCode::Config);
  EXPECT_EQ(parse_error(input + "[topic_map]\nclusters = 3\n"), ErrorCode::Config);
  EXPECT_EQ(parse_error(input + "[analyses]\nenabled = corpus_stats, horoscope\n"), ErrorCode::Config);
  EXPECT_EQ(parse_error("[input]\nbib = theses.bib\nwindow = 2020:2010\n"), ErrorCode::Config);
  EXPECT_THROW(load_config(kData / "nope.ini"), Error);
}

TEST(Config, RestrictKeepsCanonicalOrder) {
  auto config = parse("[input]\nbib = theses.bib\nwindow = 2010:2020\n");
  restrict_analyses(config, {"flow", "corpus_stats"});
  EXPECT_EQ(config.enabled, (std::vector<std::string>{"corpus_stats", "flow"}));
  EXPECT_THROW(restrict_analyses(config, {"tarot"}), Error);
}

TEST(Pipeline, FullRunWritesTheBundle) {
  TempDir tmp("full");
  const auto manifest = run(fixture_config(tmp.path));

  EXPECT_EQ(manifest.documents, 14u);
  EXPECT_EQ(manifest.excluded_outside_window, 1u);
  ASSERT_EQ(manifest.analyses.size(), analysis_names().size());
  for (const auto& a : manifest.analyses) {
    EXPECT_EQ(a.status, AnalysisStatus::Ok) << a.name << ": " << (a.warnings.empty() ? "" : a.warnings.back());
    EXPECT_FALSE(a.outputs.empty()) << a.name;
  }
  EXPECT_EQ(exit_code(manifest), 0);

  const auto listed = manifest.all_outputs();
  EXPECT_GE(listed.size(), 15u);
  const std::set<std::string> unique(listed.begin(), listed.end());
  EXPECT_EQ(unique.size(), listed.size()) << "a file is listed twice";

  auto on_disk = files_under(tmp.path);
  EXPECT_EQ(on_disk.erase("manifest.json"), 1u);
  EXPECT_EQ(on_disk, unique);

  for (const auto* dir : {"stats", "series", "maps", "networks", "flows", "plots"})
    EXPECT_TRUE(fs::is_directory(tmp.path / dir)) << dir;
  for (const auto* file : {"stats/corpus_stats.json", "series/production_growth.csv", "maps/topic_map.json",
                           "networks/doc_coupling.graphml", "flows/flow.csv", "plots/production_growth.svg"})
    EXPECT_TRUE(unique.count(file)) << file;

  const auto json = nlohmann::json::parse(read(tmp.path / "manifest.json"));
  EXPECT_EQ(json["analyses"].size(), analysis_names().size());
  EXPECT_EQ(without_timings(json), without_timings(nlohmann::json(manifest)));
}

TEST(Pipeline, FieldUsage) {
  TempDir tmp("fields");
  const auto usage = run(fixture_config(tmp.path)).field_usage();
  const auto uses = [&](const std::string& field, const std::string& analysis) {
    const auto it = usage.find(field);
    return it != usage.end() && std::count(it->second.begin(), it->second.end(), analysis) == 1;
  };
  for (const auto* field : {"title", "abstract", "author_keywords"}) EXPECT_TRUE(uses(field, "word_trends")) << field;
  for (const auto* analysis : {"author_coupling", "doc_coupling", "cocitation"})
    EXPECT_TRUE(uses("references", analysis)) << analysis;
  EXPECT_TRUE(uses("year", "production_growth"));
  EXPECT_TRUE(uses("citations", "citation_series"));
  EXPECT_FALSE(uses("references", "production_growth"));
}

TEST(Pipeline, SingleAnalysis) {
  TempDir tmp("single");
  auto config = fixture_config(tmp.path);
  restrict_analyses(config, {"corpus_stats"});
  const auto manifest = run(config);
  ASSERT_EQ(manifest.analyses.size(), 1u);
  EXPECT_EQ(manifest.analyses[0].name, "corpus_stats");
  EXPECT_TRUE(manifest.plots.empty());
  auto on_disk = files_under(tmp.path);
  EXPECT_EQ(on_disk.erase("manifest.json"), 1u);
  const auto listed = manifest.all_outputs();
  EXPECT_EQ(on_disk, std::set<std::string>(listed.begin(), listed.end()));
  EXPECT_FALSE(fs::exists(tmp.path / "networks"));
}

TEST(Pipeline, RerunsAreIdentical) {
  TempDir a("rerun_a");
  TempDir b("rerun_b");
  auto first = fixture_config(a.path);
  auto second = fixture_config(b.path);
  second.jobs = 4;
  const auto ma = run(first);
  const auto mb = run(second);

  const auto files = files_under(a.path);
  ASSERT_EQ(files, files_under(b.path));
  for (const auto& f : files) {
    if (f == "manifest.json") continue;
    EXPECT_EQ(read(a.path / f), read(b.path / f)) << f;
  }
  EXPECT_EQ(without_timings(nlohmann::json::parse(read(a.path / "manifest.json"))),
            without_timings(nlohmann::json::parse(read(b.path / "manifest.json"))));
  EXPECT_EQ(ma.all_outputs(), mb.all_outputs());
}

TEST(Pipeline, MissingFieldSkipsAnalysis) {
  TempDir tmp("skip");
  std::vector<BibRecord> records;
  for (int i = 0; i < 5; ++i)
    records.push_back(biblio::testing::make_record("d" + std::to_string(i), 2012 + i, "student " + std::to_string(i),
                                           {"supervisor a"}, "g1", {"scheduling", "fuzzy logic"}));
  const Corpus corpus(records, {2010, 2020});
  auto config = parse("[input]\nbib = theses.bib\nwindow = 2010:2020\n");
  config.output_dir = tmp.path;
  restrict_analyses(config, {"production_growth", "doc_coupling", "cocitation"});
  const auto manifest = run(config, corpus);

  EXPECT_EQ(record_of(manifest, "production_growth").status, AnalysisStatus::Ok);
  for (const auto* name : {"doc_coupling", "cocitation"}) {
    const auto& r = record_of(manifest, name);
    EXPECT_EQ(r.status, AnalysisStatus::Skipped) << name;
    EXPECT_TRUE(r.outputs.empty());
    ASSERT_FALSE(r.warnings.empty());
    EXPECT_NE(r.warnings[0].find("references"), std::string::npos) << r.warnings[0];
  }
  EXPECT_EQ(exit_code(manifest), 2);
  EXPECT_FALSE(manifest.clean());
  EXPECT_TRUE(manifest.field_usage().count("references") == 0);
}

TEST(Pipeline, WindowWithoutDocumentsIsFatal) {
  TempDir tmp("empty");
  auto config = fixture_config(tmp.path);
  config.window = {1990, 1995};
  try {
    run(config);
    FAIL() << "empty corpus accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyCorpus);
  }
}

TEST(Cli, ExitCodes) {
  TempDir tmp("cli");
  const std::string ini = (kData / "pipeline.ini").string();
  const std::string out = (tmp.path / "out").string();

  EXPECT_EQ(run_cli("analyze --config " + ini + " --out " + out + " --no-plots -q"), 0);
  EXPECT_TRUE(fs::exists(tmp.path / "out/manifest.json"));
  EXPECT_FALSE(fs::exists(tmp.path / "out/plots"));

  EXPECT_EQ(run_cli("analyze --out " + out + " --only corpus_stats -q", std::string("BIBLIOSCAPE_CONFIG=") + ini), 0);
  EXPECT_EQ(run_cli("analyze --out " + out + " -q", "env -u BIBLIOSCAPE_CONFIG"), 1);
  EXPECT_EQ(run_cli("analyze --config " + ini + " --out " + out + " --only tarot"), 1);
  EXPECT_EQ(run_cli("analyze --config " + ini + " --out " + out + " --window 1990:1995"), 1);

  const fs::path bad = tmp.path / "bad.ini";
  std::ofstream(bad) << "[input]\nbib = " << (kData / "theses.bib").string() << "\nwindow = 2010:2020\nmood = calm\n";
  EXPECT_EQ(run_cli("analyze --config " + bad.string() + " --out " + out), 1);

  write_unreferenced_bib(tmp.path / "plain.bib");
  const fs::path plain = tmp.path / "plain.ini";
  std::ofstream(plain) << "[input]\nbib = plain.bib\nwindow = 2010:2020\n[analyses]\nenabled = corpus_stats, doc_coupling\n";
  EXPECT_EQ(run_cli("analyze --config " + plain.string() + " --out " + out + " -q"), 2);

  EXPECT_EQ(run_cli("list"), 0);
}
