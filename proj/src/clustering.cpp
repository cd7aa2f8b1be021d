#include "biblio/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "biblio/error.hpp"

namespace biblio {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(b)] = find(a); }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<int> number_by_first_member(std::size_t n, const std::vector<std::size_t>& root) {
  std::unordered_map<std::size_t, int> ids;
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = ids.emplace(root[i], static_cast<int>(ids.size()) + 1);
    labels[i] = it->second;
  }
  return labels;
}

}  // namespace

std::vector<int> Linkage::cut(std::size_t k) const {
  if (k == 0 || k > leaves)
    throw Error(ErrorCode::InvalidArgument, "cut requires 1 <= k <= " + std::to_string(leaves));
  DisjointSets sets(leaves);
  std::vector<std::size_t> representative(leaves + merges.size());
  std::iota(representative.begin(), representative.begin() + static_cast<std::ptrdiff_t>(leaves), 0);
  for (std::size_t i = 0; i < leaves - k; ++i) {
    const auto& m = merges[i];
    const std::size_t a = representative[m.left];
    const std::size_t b = representative[m.right];
    sets.unite(a, b);
    representative[leaves + i] = a;
  }
  std::vector<std::size_t> root(leaves);
  for (std::size_t i = 0; i < leaves; ++i) root[i] = sets.find(i);
  return number_by_first_member(leaves, root);
}

std::vector<std::size_t> Linkage::leaf_order() const {
  std::vector<std::size_t> order;
  if (leaves == 0) return order;
  if (merges.empty()) {
    order.push_back(0);
    return order;
  }
  std::vector<std::size_t> stack{leaves + merges.size() - 1};
  while (!stack.empty()) {
    const std::size_t node = stack.back();
    stack.pop_back();
    if (node < leaves) {
      order.push_back(node);
      continue;
    }
    const auto& m = merges[node - leaves];
    stack.push_back(m.right);
    stack.push_back(m.left);
  }
  return order;
}

Linkage ward_linkage(const Eigen::MatrixXd& points) {
  const auto n = static_cast<std::size_t>(points.rows());
  Linkage linkage;
  linkage.leaves = n;
  if (n == 0) return linkage;

  struct Cluster {
    std::size_t node;
    std::size_t key;  // lowest leaf index
    std::size_t size;
    Eigen::VectorXd centroid;
  };
  std::vector<Cluster> active;
  active.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    active.push_back({i, i, 1, points.row(static_cast<Eigen::Index>(i)).transpose()});

  double previous = 0.0;
  while (active.size() > 1) {
    // active stays sorted by key, so the first strict minimum found is the
    // lexicographically lowest pair
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    std::size_t bj = 1;
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double na = static_cast<double>(active[i].size);
        const double nb = static_cast<double>(active[j].size);
        const double cost = na * nb / (na + nb) * (active[i].centroid - active[j].centroid).squaredNorm();
        if (cost < best) {
          best = cost;
          bi = i;
          bj = j;
        }
      }
    }
    Cluster& a = active[bi];
    Cluster& b = active[bj];
    const double height = std::max(previous, std::sqrt(2.0 * best));
    previous = height;
    const std::size_t size = a.size + b.size;
    linkage.merges.push_back({a.node, b.node, height, size});
    a.centroid = (static_cast<double>(a.size) * a.centroid + static_cast<double>(b.size) * b.centroid) /
                 static_cast<double>(size);
    a.size = size;
    a.node = n + linkage.merges.size() - 1;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return linkage;
}

std::vector<int> greedy_modularity(std::size_t nodes, const std::vector<WeightedEdge>& edges,
                                   std::optional<std::size_t> target_count) {
  if (target_count && (*target_count == 0 || *target_count > nodes))
    throw Error(ErrorCode::InvalidArgument, "community target must lie in 1.." + std::to_string(nodes));
  std::vector<std::size_t> root(nodes);
  std::iota(root.begin(), root.end(), 0);
  if (nodes == 0) return {};

  double total = 0.0;
  for (const auto& e : edges) total += e.weight;

  // between[i][j]: fraction of edge-ends linking community i to j (i != j);
  // degree[i]: fraction of all edge-ends inside community i.
  Eigen::MatrixXd between = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nodes), static_cast<Eigen::Index>(nodes));
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes));
  if (total > 0.0) {
    for (const auto& e : edges) {
      const double w = e.weight / (2.0 * total);
      const auto a = static_cast<Eigen::Index>(e.a);
      const auto b = static_cast<Eigen::Index>(e.b);
      if (a != b) {
        between(a, b) += w;
        between(b, a) += w;
      }
      degree(a) += w;
      degree(b) += w;
    }
  }

  std::vector<std::size_t> active(nodes);  // community slots, ascending = ascending key
  std::iota(active.begin(), active.end(), 0);
  DisjointSets sets(nodes);

  while (active.size() > 1) {
    if (target_count && active.size() <= *target_count) break;
    double best = -std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    std::size_t bj = 0;
    bool found = false;
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const auto ci = static_cast<Eigen::Index>(active[i]);
        const auto cj = static_cast<Eigen::Index>(active[j]);
        if (!target_count && between(ci, cj) <= 0.0) continue;
        const double gain = 2.0 * (between(ci, cj) - degree(ci) * degree(cj));
        if (!found || gain > best) {
          best = gain;
          bi = i;
          bj = j;
          found = true;
        }
      }
    }
    if (!found || (!target_count && best <= 0.0)) break;

    const auto keep = static_cast<Eigen::Index>(active[bi]);
    const auto gone = static_cast<Eigen::Index>(active[bj]);
    between.row(keep) += between.row(gone);
    between.col(keep) += between.col(gone);
    between(keep, keep) = 0.0;
    between.row(gone).setZero();
    between.col(gone).setZero();
    degree(keep) += degree(gone);
    degree(gone) = 0.0;
    sets.unite(active[bi], active[bj]);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
  }

  for (std::size_t i = 0; i < nodes; ++i) root[i] = sets.find(i);
  return number_by_first_member(nodes, root);
}

double modularity(std::size_t nodes, const std::vector<WeightedEdge>& edges, const std::vector<int>& labels) {
  double total = 0.0;
  for (const auto& e : edges) total += e.weight;
  if (total <= 0.0) return 0.0;
  std::unordered_map<int, double> inside;
  std::unordered_map<int, double> ends;
  for (const auto& e : edges) {
    if (labels[e.a] == labels[e.b]) inside[labels[e.a]] += e.weight;
    ends[labels[e.a]] += e.weight;
    ends[labels[e.b]] += e.weight;
  }
  (void)nodes;
  double q = 0.0;
  for (const auto& [label, sum] : ends) {
    const double a = sum / (2.0 * total);
    q += inside[label] / total - a * a;
  }
  return q;
}

}  // namespace biblio
