#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "biblio/concepts.hpp"
#include "biblio/flow.hpp"
#include "biblio/metrics.hpp"

namespace biblio::plots {

// Each renderer returns nullopt when there is nothing to draw.
std::optional<std::string> line_chart(const std::string& title, const std::vector<TimeSeries>& series);
std::optional<std::string> bar_chart(const std::string& title, const std::vector<RankedCount>& bars);
std::optional<std::string> topic_scatter(const TopicMap& map);
std::optional<std::string> thematic_scatter(const ThematicMap& map);
std::optional<std::string> dendrogram_tree(const Dendrogram& tree);
std::optional<std::string> sankey(const FlowDiagram& diagram);
std::optional<std::string> word_cloud(const std::vector<WeightedTerm>& terms);
std::optional<std::string> bubble_timeline(const std::vector<Timeline>& lines);

struct PlotArtifact {
  std::string analysis;
  /// Bundle-relative JSON artifact the plot is drawn from.
  std::string source;
};

struct RenderResult {
  /// Bundle-relative SVG paths.
  std::vector<std::string> files;
  std::vector<std::string> warnings;
};

/// Renders one SVG per plottable artifact into out_dir/plots/<source stem>.svg.
/// Missing or empty artifacts are skipped with a warning.
RenderResult render_plots(const std::vector<PlotArtifact>& artifacts, const std::filesystem::path& out_dir);

}  // namespace biblio::plots
