#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "biblio/clustering.hpp"

using namespace biblio;

namespace {

// Ward by exhaustive search: every step recomputes the increase in total
// within-cluster sum of squares for every pair of current clusters.
struct NaiveWard {
  std::vector<double> heights;
  std::vector<std::vector<std::set<std::size_t>>> partitions;  // after each merge
};

double ess(const Eigen::MatrixXd& pts, const std::set<std::size_t>& members) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(pts.cols());
  for (auto m : members) mean += pts.row(static_cast<Eigen::Index>(m)).transpose();
  mean /= static_cast<double>(members.size());
  double s = 0.0;
  for (auto m : members) s += (pts.row(static_cast<Eigen::Index>(m)).transpose() - mean).squaredNorm();
  return s;
}

NaiveWard naive_ward(const Eigen::MatrixXd& pts) {
  std::vector<std::set<std::size_t>> clusters;
  for (std::size_t i = 0; i < static_cast<std::size_t>(pts.rows()); ++i) clusters.push_back({i});
  NaiveWard out;
  while (clusters.size() > 1) {
    std::size_t ba = 0, bb = 1;
    double best = INFINITY;
    for (std::size_t a = 0; a < clusters.size(); ++a)
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        std::set<std::size_t> u = clusters[a];
        u.insert(clusters[b].begin(), clusters[b].end());
        const double cost = ess(pts, u) - ess(pts, clusters[a]) - ess(pts, clusters[b]);
        if (cost < best) {
          best = cost;
          ba = a;
          bb = b;
        }
      }
    clusters[ba].insert(clusters[bb].begin(), clusters[bb].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
    out.heights.push_back(std::sqrt(2.0 * std::max(0.0, best)));
    out.partitions.push_back(clusters);
  }
  return out;
}

std::set<std::set<std::size_t>> as_sets(const std::vector<int>& labels) {
  std::map<int, std::set<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].insert(i);
  std::set<std::set<std::size_t>> out;
  for (auto& [id, members] : groups) out.insert(members);
  return out;
}

}  // namespace

TEST(Ward, TwoSingletonsMergeAtDistance) {
  Eigen::MatrixXd p(2, 2);
  p << 0, 0, 3, 4;
  const auto l = ward_linkage(p);
  ASSERT_EQ(l.merges.size(), 1u);
  EXPECT_DOUBLE_EQ(l.merges[0].height, 5.0);
  EXPECT_EQ(l.merges[0].size, 2u);
}

TEST(Ward, CutExtremes) {
  Eigen::MatrixXd p(4, 2);
  p << 0, 0, 0, 1, 10, 0, 10, 1;
  const auto l = ward_linkage(p);
  EXPECT_EQ(l.cut(1), (std::vector<int>{1, 1, 1, 1}));
  EXPECT_EQ(l.cut(4), (std::vector<int>{1, 2, 3, 4}));
  EXPECT_EQ(l.cut(2), (std::vector<int>{1, 1, 2, 2}));
  EXPECT_THROW(l.cut(0), std::exception);
  EXPECT_THROW(l.cut(5), std::exception);
}

TEST(Ward, TiesMergeLowestPairFirst) {
  Eigen::MatrixXd p(4, 1);
  p << 0, 1, 2, 3;
  const auto l = ward_linkage(p);
  EXPECT_EQ(l.merges[0].left, 0u);
  EXPECT_EQ(l.merges[0].right, 1u);
  EXPECT_EQ(l.merges[1].left, 2u);
  EXPECT_EQ(l.merges[1].right, 3u);
}

TEST(Ward, IdenticalPointsMergeAtZero) {
  const auto l = ward_linkage(Eigen::MatrixXd::Zero(3, 2));
  for (const auto& m : l.merges) EXPECT_EQ(m.height, 0.0);
  EXPECT_EQ(l.cut(1), (std::vector<int>{1, 1, 1}));
}

TEST(Ward, LeafOrderIsPermutation) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Random(9, 2);
  auto order = ward_linkage(p).leaf_order();
  std::sort(order.begin(), order.end());
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(order[i], i);
}

class WardOracle : public ::testing::TestWithParam<int> {};

TEST_P(WardOracle, MatchesExhaustiveSearch) {
  std::mt19937 rng(static_cast<unsigned>(GetParam()));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Eigen::Index n = 3 + GetParam() % 12;
  Eigen::MatrixXd p(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) p.row(i) << u(rng), u(rng);

  const auto link = ward_linkage(p);
  const auto naive = naive_ward(p);
  ASSERT_EQ(link.merges.size(), naive.heights.size());
  for (std::size_t i = 0; i < link.merges.size(); ++i) {
    EXPECT_NEAR(link.merges[i].height, naive.heights[i], 1e-9);
    if (i > 0) EXPECT_GE(link.merges[i].height, link.merges[i - 1].height);
  }
  for (std::size_t k = 1; k <= static_cast<std::size_t>(n); ++k) {
    const auto labels = link.cut(k);
    EXPECT_EQ(std::set<int>(labels.begin(), labels.end()).size(), k);
    if (k < static_cast<std::size_t>(n)) {
      const auto& expected = naive.partitions[static_cast<std::size_t>(n) - k - 1];
      EXPECT_EQ(as_sets(labels), std::set<std::set<std::size_t>>(expected.begin(), expected.end())) << "k=" << k;
    }
    // Ids are numbered by first leaf.
    int next = 1;
    for (int id : labels) {
      EXPECT_LE(id, next);
      if (id == next) ++next;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, WardOracle, ::testing::Range(1, 41));

TEST(Modularity, TwoTrianglesWithBridge) {
  std::vector<WeightedEdge> e = {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {3, 4, 1}, {3, 5, 1}, {4, 5, 1}, {2, 3, 1}};
  const auto labels = greedy_modularity(6, e);
  EXPECT_EQ(labels, (std::vector<int>{1, 1, 1, 2, 2, 2}));
  // Hand value: m = 7, each side has 3 internal edges and degree sum 7.
  EXPECT_NEAR(modularity(6, e, labels), 2 * (3.0 / 7 - std::pow(7.0 / 14, 2)), 1e-12);
}

TEST(Modularity, TargetCountHonoured) {
  std::vector<WeightedEdge> e = {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {3, 4, 1}, {3, 5, 1}, {4, 5, 1}, {2, 3, 1}};
  for (std::size_t k = 1; k <= 6; ++k) {
    const auto labels = greedy_modularity(6, e, k);
    EXPECT_EQ(std::set<int>(labels.begin(), labels.end()).size(), k);
  }
}

TEST(Modularity, IsolatedNodesStaySeparateWithoutTarget) {
  const auto labels = greedy_modularity(3, {});
  EXPECT_EQ(labels, (std::vector<int>{1, 2, 3}));
}

TEST(Modularity, ScaleInvariant) {
  std::vector<WeightedEdge> e = {{0, 1, 2}, {1, 2, 1}, {2, 3, 3}, {3, 4, 1}, {0, 4, 0.5}};
  auto scaled = e;
  for (auto& x : scaled) x.weight *= 7;
  EXPECT_EQ(greedy_modularity(5, e), greedy_modularity(5, scaled));
  EXPECT_EQ(greedy_modularity(5, e, 2), greedy_modularity(5, scaled, 2));
}

class ModularityProperties : public ::testing::TestWithParam<int> {};

TEST_P(ModularityProperties, NeverWorseThanSingletons) {
  std::mt19937 rng(static_cast<unsigned>(GetParam()));
  const std::size_t n = 4 + static_cast<std::size_t>(GetParam()) % 15;
  std::bernoulli_distribution edge(0.3);
  std::uniform_real_distribution<double> w(0.1, 2.0);
  std::vector<WeightedEdge> e;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (edge(rng)) e.push_back({a, b, w(rng)});
  const auto labels = greedy_modularity(n, e);
  std::vector<int> singletons(n);
  for (std::size_t i = 0; i < n; ++i) singletons[i] = static_cast<int>(i) + 1;
  EXPECT_GE(modularity(n, e, labels) + 1e-12, modularity(n, e, singletons));
  EXPECT_EQ(labels, greedy_modularity(n, e));
}

INSTANTIATE_TEST_SUITE_P(Seeds, ModularityProperties, ::testing::Range(1, 31));
