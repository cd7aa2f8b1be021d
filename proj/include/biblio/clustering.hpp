#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace biblio {

/// One agglomeration step. Leaves are 0..n-1; the i-th merge creates node n+i.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double height = 0.0;
  std::size_t size = 0;

  bool operator==(const Merge&) const = default;
};

struct Linkage {
  std::size_t leaves = 0;
  std::vector<Merge> merges;

  /// Partition after the first leaves-k merges. Ids are 1..k, numbered by the
  /// first leaf (in index order) of each cluster.
  std::vector<int> cut(std::size_t k) const;
  /// Leaves in dendrogram drawing order (left subtree first).
  std::vector<std::size_t> leaf_order() const;
};

/// Ward agglomerative clustering of the rows of `points`. The merge cost is
/// the increase in within-cluster sum of squares; height = sqrt(2 * cost), so
/// two singletons merge at their Euclidean distance. Equal costs merge the
/// pair whose lowest member indices are smallest first.
Linkage ward_linkage(const Eigen::MatrixXd& points);

struct WeightedEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
};

/// Greedy modularity agglomeration (Clauset-Newman-Moore merge rule) with
/// fixed tie-breaking on the lowest node index of each community. Without a
/// target it stops when no merge increases modularity; with a target it keeps
/// merging the best pair until exactly `target_count` communities remain.
/// Returns 1-based community ids numbered by first node.
std::vector<int> greedy_modularity(std::size_t nodes, const std::vector<WeightedEdge>& edges,
                                   std::optional<std::size_t> target_count = std::nullopt);

/// Newman modularity of a partition (ids are arbitrary labels).
double modularity(std::size_t nodes, const std::vector<WeightedEdge>& edges, const std::vector<int>& labels);

}  // namespace biblio
