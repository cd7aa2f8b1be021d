#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "biblio/corpus.hpp"
#include "biblio/text.hpp"

namespace biblio {

enum class FlowField { Group, AuthorKeywords, Supervisors, Student, Year };

std::string_view to_string(FlowField field);
/// Accepts the to_string names plus "keywords". Throws Error{InvalidArgument}.
FlowField parse_flow_field(std::string_view name);

/// Distinct values of one field for one document.
std::vector<std::string> flow_values(const BibRecord& record, FlowField field,
                                     const NormalizationConfig& text = default_normalization());

struct FlowNode {
  std::string label;
  /// Documents carrying this value.
  std::int64_t total_weight = 0;

  bool operator==(const FlowNode&) const = default;
};

/// Link between node `from` of stage `stage` and node `to` of stage `stage + 1`.
struct FlowLink {
  std::size_t stage = 0;
  std::size_t from = 0;
  std::size_t to = 0;
  std::int64_t weight = 0;

  bool operator==(const FlowLink&) const = default;
};

struct FlowDiagram {
  std::vector<FlowField> stages;
  /// nodes[s] ordered by descending total_weight, then label.
  std::vector<std::vector<FlowNode>> nodes;
  /// Ordered by (stage, from, to).
  std::vector<FlowLink> links;

  bool operator==(const FlowDiagram&) const = default;
};

/// Each document adds one unit to every pair of retained values it carries in
/// adjacent stages. top_n limits the nodes per stage (0 keeps all). Throws
/// Error{InvalidArgument} for fewer than 2 or more than 3 stages and
/// Error{EmptyStage} when a stage has no values.
FlowDiagram flow(const Corpus& corpus, const std::vector<FlowField>& stages, std::size_t top_n,
                 const NormalizationConfig& text = default_normalization());

void write_flow_links_csv(std::ostream& out, const FlowDiagram& diagram);

void to_json(nlohmann::json& j, const FlowDiagram& d);
void from_json(const nlohmann::json& j, FlowDiagram& d);

}  // namespace biblio
