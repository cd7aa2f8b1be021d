#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace biblio {

enum class GraphKind { Collaboration, AuthorCoupling, DocCoupling, Cocitation, Cooccurrence };

std::string_view to_string(GraphKind kind);
GraphKind parse_graph_kind(std::string_view name);

struct GraphNode {
  std::string id;
  std::string label;
  double weight = 0.0;

  bool operator==(const GraphNode&) const = default;
};

/// Undirected edge between node indices, a < b.
struct GraphEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;

  bool operator==(const GraphEdge&) const = default;
};

struct WeightedGraph {
  GraphKind kind = GraphKind::Cooccurrence;
  std::vector<GraphNode> nodes;
  /// Sorted by (a, b).
  std::vector<GraphEdge> edges;
  /// Cluster id per node (1-based), parallel to nodes.
  std::vector<int> clusters;
  /// Fraction of documents that carry references; set for reference-based networks.
  std::optional<double> reference_coverage;
  std::vector<std::string> notes;

  std::vector<double> weighted_degree() const;
  bool operator==(const WeightedGraph&) const = default;
};

/// Throws Error{InvalidArgument} on self-loops, non-canonical or duplicate
/// edges, dangling endpoints, non-positive weights, duplicate node ids or a
/// cluster vector of the wrong length.
void validate(const WeightedGraph& graph);

/// Fills clusters with the deterministic greedy-modularity grouping.
void annotate_clusters(WeightedGraph& graph);

void write_graphml(std::ostream& out, const WeightedGraph& graph);
void write_dot(std::ostream& out, const WeightedGraph& graph);
void write_nodes_csv(std::ostream& out, const WeightedGraph& graph);
void write_edges_csv(std::ostream& out, const WeightedGraph& graph);
/// Reads the subset of GraphML produced by write_graphml.
WeightedGraph read_graphml(std::istream& in);

void to_json(nlohmann::json& j, const WeightedGraph& g);
void from_json(const nlohmann::json& j, WeightedGraph& g);

}  // namespace biblio
