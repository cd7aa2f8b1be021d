#include "biblio/graph.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "biblio/clustering.hpp"
#include "biblio/csv.hpp"
#include "biblio/error.hpp"

namespace biblio {
namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join_notes(const std::vector<std::string>& notes) {
  std::string out;
  for (std::size_t i = 0; i < notes.size(); ++i) {
    if (i) out.push_back('\n');
    out += notes[i];
  }
  return out;
}

}  // namespace

std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::Collaboration: return "collaboration";
    case GraphKind::AuthorCoupling: return "author_coupling";
    case GraphKind::DocCoupling: return "doc_coupling";
    case GraphKind::Cocitation: return "cocitation";
    case GraphKind::Cooccurrence: return "cooccurrence";
  }
  return "cooccurrence";
}

GraphKind parse_graph_kind(std::string_view name) {
  for (auto kind : {GraphKind::Collaboration, GraphKind::AuthorCoupling, GraphKind::DocCoupling,
                    GraphKind::Cocitation, GraphKind::Cooccurrence})
    if (to_string(kind) == name) return kind;
  throw Error(ErrorCode::InvalidArgument, "unknown graph kind '" + std::string(name) + "'");
}

std::vector<double> WeightedGraph::weighted_degree() const {
  std::vector<double> degree(nodes.size(), 0.0);
  for (const auto& e : edges) {
    degree[e.a] += e.weight;
    degree[e.b] += e.weight;
  }
  return degree;
}

void validate(const WeightedGraph& graph) {
  const auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, "invalid graph: " + what); };
  std::set<std::string> ids;
  for (const auto& n : graph.nodes)
    if (!ids.insert(n.id).second) fail("duplicate node id '" + n.id + "'");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : graph.edges) {
    if (e.a == e.b) fail("self-loop on node " + std::to_string(e.a));
    if (e.a > e.b) fail("edge not in canonical a < b order");
    if (e.b >= graph.nodes.size()) fail("edge endpoint out of range");
    if (!(e.weight > 0.0)) fail("non-positive edge weight");
    if (!seen.emplace(e.a, e.b).second) fail("duplicate edge");
  }
  if (!graph.clusters.empty() && graph.clusters.size() != graph.nodes.size()) fail("cluster vector size mismatch");
}

void annotate_clusters(WeightedGraph& graph) {
  std::vector<WeightedEdge> edges;
  edges.reserve(graph.edges.size());
  for (const auto& e : graph.edges) edges.push_back({e.a, e.b, e.weight});
  graph.clusters = greedy_modularity(graph.nodes.size(), edges);
}

void write_graphml(std::ostream& out, const WeightedGraph& graph) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"kind\" for=\"graph\" attr.name=\"kind\" attr.type=\"string\"/>\n"
      << "  <key id=\"coverage\" for=\"graph\" attr.name=\"reference_coverage\" attr.type=\"double\"/>\n"
      << "  <key id=\"notes\" for=\"graph\" attr.name=\"notes\" attr.type=\"string\"/>\n"
      << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
      << "  <key id=\"weight\" for=\"node\" attr.name=\"weight\" attr.type=\"double\"/>\n"
      << "  <key id=\"cluster\" for=\"node\" attr.name=\"cluster\" attr.type=\"int\"/>\n"
      << "  <key id=\"eweight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
      << "  <graph id=\"G\" edgedefault=\"undirected\">\n"
      << "    <data key=\"kind\">" << to_string(graph.kind) << "</data>\n";
  if (graph.reference_coverage)
    out << "    <data key=\"coverage\">" << csv::number(*graph.reference_coverage) << "</data>\n";
  if (!graph.notes.empty()) out << "    <data key=\"notes\">" << xml_escape(join_notes(graph.notes)) << "</data>\n";
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const auto& n = graph.nodes[i];
    out << "    <node id=\"" << xml_escape(n.id) << "\">"
        << "<data key=\"label\">" << xml_escape(n.label) << "</data>"
        << "<data key=\"weight\">" << csv::number(n.weight) << "</data>";
    if (!graph.clusters.empty()) out << "<data key=\"cluster\">" << graph.clusters[i] << "</data>";
    out << "</node>\n";
  }
  for (const auto& e : graph.edges)
    out << "    <edge source=\"" << xml_escape(graph.nodes[e.a].id) << "\" target=\""
        << xml_escape(graph.nodes[e.b].id) << "\"><data key=\"eweight\">" << csv::number(e.weight)
        << "</data></edge>\n";
  out << "  </graph>\n</graphml>\n";
}

void write_dot(std::ostream& out, const WeightedGraph& graph) {
  out << "graph " << dot_quote(to_string(graph.kind)) << " {\n";
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const auto& n = graph.nodes[i];
    out << "  " << dot_quote(n.id) << " [label=" << dot_quote(n.label) << ", weight=" << csv::number(n.weight);
    if (!graph.clusters.empty()) out << ", cluster=" << graph.clusters[i];
    out << "];\n";
  }
  for (const auto& e : graph.edges)
    out << "  " << dot_quote(graph.nodes[e.a].id) << " -- " << dot_quote(graph.nodes[e.b].id)
        << " [weight=" << csv::number(e.weight) << "];\n";
  out << "}\n";
}

void write_nodes_csv(std::ostream& out, const WeightedGraph& graph) {
  csv::write_row(out, {"id", "label", "weight", "cluster"});
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const auto& n = graph.nodes[i];
    const std::string cluster = graph.clusters.empty() ? "" : std::to_string(graph.clusters[i]);
    csv::write_row(out, {n.id, n.label, csv::number(n.weight), cluster});
  }
}

void write_edges_csv(std::ostream& out, const WeightedGraph& graph) {
  csv::write_row(out, {"source", "target", "weight"});
  for (const auto& e : graph.edges)
    csv::write_row(out, {graph.nodes[e.a].id, graph.nodes[e.b].id, csv::number(e.weight)});
}

WeightedGraph read_graphml(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::Parse, std::string("GraphML: ") + e.what());
  }
  const auto& root = tree.get_child("graphml.graph");
  WeightedGraph graph;
  std::map<std::string, std::size_t> index;
  bool has_clusters = false;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (const auto& [tag, child] : root) {
    if (tag == "data") {
      const auto key = child.get<std::string>("<xmlattr>.key");
      if (key == "kind") graph.kind = parse_graph_kind(child.data());
      else if (key == "coverage") graph.reference_coverage = std::stod(child.data());
      else if (key == "notes") {
        std::istringstream lines(child.data());
        for (std::string line; std::getline(lines, line);) graph.notes.push_back(line);
      }
    } else if (tag == "node") {
      GraphNode node;
      node.id = child.get<std::string>("<xmlattr>.id");
      int cluster = 0;
      for (const auto& [dtag, data] : child) {
        if (dtag != "data") continue;
        const auto key = data.get<std::string>("<xmlattr>.key");
        if (key == "label") node.label = data.data();
        else if (key == "weight") node.weight = std::stod(data.data());
        else if (key == "cluster") {
          cluster = std::stoi(data.data());
          has_clusters = true;
        }
      }
      index[node.id] = graph.nodes.size();
      graph.nodes.push_back(std::move(node));
      graph.clusters.push_back(cluster);
    } else if (tag == "edge") {
      const auto source = child.get<std::string>("<xmlattr>.source");
      const auto target = child.get<std::string>("<xmlattr>.target");
      if (!index.count(source) || !index.count(target))
        throw Error(ErrorCode::Parse, "GraphML edge references unknown node");
      GraphEdge edge{std::min(index[source], index[target]), std::max(index[source], index[target]), 0.0};
      for (const auto& [dtag, data] : child)
        if (dtag == "data" && data.get<std::string>("<xmlattr>.key") == "eweight") edge.weight = std::stod(data.data());
      graph.edges.push_back(edge);
    }
  }
  if (!has_clusters) graph.clusters.clear();
  std::sort(graph.edges.begin(), graph.edges.end(),
            [](const GraphEdge& x, const GraphEdge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  return graph;
}

void to_json(nlohmann::json& j, const WeightedGraph& g) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    nlohmann::json node = {{"id", g.nodes[i].id}, {"label", g.nodes[i].label}, {"weight", g.nodes[i].weight}};
    if (!g.clusters.empty()) node["cluster"] = g.clusters[i];
    nodes.push_back(std::move(node));
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges) edges.push_back({{"source", e.a}, {"target", e.b}, {"weight", e.weight}});
  j = {{"kind", to_string(g.kind)}, {"nodes", nodes}, {"edges", edges}, {"notes", g.notes}};
  j["reference_coverage"] = g.reference_coverage ? nlohmann::json(*g.reference_coverage) : nlohmann::json();
}

void from_json(const nlohmann::json& j, WeightedGraph& g) {
  g = WeightedGraph{};
  g.kind = parse_graph_kind(j.at("kind").get<std::string>());
  bool has_clusters = false;
  for (const auto& n : j.at("nodes")) {
    g.nodes.push_back({n.at("id").get<std::string>(), n.at("label").get<std::string>(), n.at("weight").get<double>()});
    if (n.contains("cluster")) has_clusters = true;
    g.clusters.push_back(n.value("cluster", 0));
  }
  if (!has_clusters) g.clusters.clear();
  for (const auto& e : j.at("edges"))
    g.edges.push_back({e.at("source").get<std::size_t>(), e.at("target").get<std::size_t>(), e.at("weight").get<double>()});
  j.at("notes").get_to(g.notes);
  if (!j.at("reference_coverage").is_null()) g.reference_coverage = j.at("reference_coverage").get<double>();
}

}  // namespace biblio
