#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "biblio/error.hpp"
#include "biblio/pipeline.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(',', start);
    auto item = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!item.empty()) out.push_back(item);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bibliometric analysis of thesis collections"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "Run the configured analyses and write the report bundle");
  std::string config_path;
  std::string window;
  std::string only;
  std::string out_dir;
  std::size_t jobs = 0;
  bool no_plots = false;
  bool quiet = false;
  analyze->add_option("--config", config_path,
                      fmt::format("Config file (default: ${})", biblio::kConfigEnvVar));
  analyze->add_option("--window", window, "Observation window YYYY:YYYY");
  analyze->add_option("--only", only, "Comma-separated analyses to run");
  analyze->add_option("--out", out_dir, "Output directory");
  analyze->add_option("--jobs", jobs, "Worker threads");
  analyze->add_flag("--no-plots", no_plots, "Skip SVG rendering");
  analyze->add_flag("-q,--quiet", quiet, "Only report problems");

  auto* list = app.add_subcommand("list", "List the available analyses and their parameters");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& name : biblio::analysis_names()) {
      std::cout << name;
      for (const auto& [key, value] : biblio::analysis_defaults(name)) std::cout << ' ' << key << '=' << value;
      std::cout << '\n';
    }
    return 0;
  }

  try {
    if (config_path.empty()) {
      if (const char* env = std::getenv(biblio::kConfigEnvVar)) config_path = env;
    }
    if (config_path.empty()) {
      std::cerr << fmt::format("error: no config given (use --config or set {})\n", biblio::kConfigEnvVar);
      return 1;
    }
    auto config = biblio::load_config(config_path);
    if (!window.empty()) config.window = biblio::parse_year_range(window);
    if (!only.empty()) biblio::restrict_analyses(config, split_commas(only));
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (jobs > 0) config.jobs = jobs;
    if (no_plots) config.plots = false;

    const auto manifest = biblio::run(config);
    for (const auto& a : manifest.analyses) {
      if (quiet && a.status == biblio::AnalysisStatus::Ok) continue;
      std::cout << fmt::format("{:<24} {:<8} {} files\n", a.name, biblio::to_string(a.status), a.outputs.size());
      for (const auto& w : a.warnings) std::cout << "    " << w << '\n';
    }
    for (const auto& w : manifest.plot_warnings) std::cout << "plot: " << w << '\n';
    if (!quiet)
      std::cout << fmt::format("{} documents, {} files, manifest at {}\n", manifest.documents,
                               manifest.all_outputs().size(), (config.output_dir / "manifest.json").string());
    return biblio::exit_code(manifest);
  } catch (const biblio::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
