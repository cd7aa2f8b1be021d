#include <gtest/gtest.h>

#include <sstream>

#include "biblio/error.hpp"
#include "biblio/graph.hpp"

using namespace biblio;

namespace {

WeightedGraph sample() {
  WeightedGraph g;
  g.kind = GraphKind::AuthorCoupling;
  g.nodes = {{"perez, j.", "Pérez, J. & <co>", 3}, {"lopez, e.", "lopez, e.", 2}, {"iso", "iso \"quoted\"", 1}};
  g.edges = {{0, 1, 2.5}};
  g.reference_coverage = 0.75;
  g.notes = {"references available for 3 of 4 documents"};
  annotate_clusters(g);
  return g;
}

}  // namespace

TEST(Graph, ValidatorRejectsBrokenGraphs) {
  auto g = sample();
  EXPECT_NO_THROW(validate(g));
  auto loop = g;
  loop.edges = {{1, 1, 1.0}};
  EXPECT_THROW(validate(loop), Error);
  auto reversed = g;
  reversed.edges = {{1, 0, 1.0}};
  EXPECT_THROW(validate(reversed), Error);
  auto dangling = g;
  dangling.edges = {{0, 7, 1.0}};
  EXPECT_THROW(validate(dangling), Error);
  auto zero = g;
  zero.edges = {{0, 1, 0.0}};
  EXPECT_THROW(validate(zero), Error);
  auto dup = g;
  dup.edges = {{0, 1, 1.0}, {0, 1, 2.0}};
  EXPECT_THROW(validate(dup), Error);
  auto ids = g;
  ids.nodes[2].id = ids.nodes[0].id;
  EXPECT_THROW(validate(ids), Error);
}

TEST(Graph, ClustersCoverNodes) {
  const auto g = sample();
  ASSERT_EQ(g.clusters.size(), 3u);
  EXPECT_EQ(g.clusters[0], g.clusters[1]);
  EXPECT_NE(g.clusters[0], g.clusters[2]);
}

TEST(Graph, WeightedDegree) { EXPECT_EQ(sample().weighted_degree(), (std::vector<double>{2.5, 2.5, 0.0})); }

TEST(Graph, GraphmlRoundTrip) {
  const auto g = sample();
  std::stringstream s;
  write_graphml(s, g);
  const auto back = read_graphml(s);
  EXPECT_EQ(back, g);
}

TEST(Graph, JsonRoundTrip) {
  const auto g = sample();
  EXPECT_EQ(nlohmann::json(g).get<WeightedGraph>(), g);
}

TEST(Graph, DotAndCsv) {
  const auto g = sample();
  std::ostringstream dot, nodes, edges;
  write_dot(dot, g);
  write_nodes_csv(nodes, g);
  write_edges_csv(edges, g);
  EXPECT_NE(dot.str().find("graph"), std::string::npos);
  EXPECT_NE(dot.str().find("--"), std::string::npos);
  EXPECT_NE(dot.str().find("\\\"quoted\\\""), std::string::npos);
  const auto node_text = nodes.str(), edge_text = edges.str();
  EXPECT_EQ(std::count(node_text.begin(), node_text.end(), '\n'), 4);
  EXPECT_EQ(std::count(edge_text.begin(), edge_text.end(), '\n'), 2);
  EXPECT_NE(nodes.str().find("\"perez, j.\""), std::string::npos);
}

TEST(Graph, KindNames) {
  for (auto k : {GraphKind::Collaboration, GraphKind::AuthorCoupling, GraphKind::DocCoupling, GraphKind::Cocitation,
                 GraphKind::Cooccurrence})
    EXPECT_EQ(parse_graph_kind(to_string(k)), k);
  EXPECT_THROW(parse_graph_kind("nope"), Error);
}
