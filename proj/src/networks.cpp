#include "biblio/networks.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "biblio/error.hpp"
#include "biblio/metrics.hpp"

namespace biblio {
namespace {

void finish(WeightedGraph& graph) {
  std::sort(graph.edges.begin(), graph.edges.end(),
            [](const GraphEdge& x, const GraphEdge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  annotate_clusters(graph);
  validate(graph);
}

void require_references(const Corpus& corpus, std::string_view what) {
  for (const auto& r : corpus.records())
    if (!r.references.empty()) return;
  throw Error(ErrorCode::EmptyReferences, std::string(what) + " needs documents with references");
}

std::string coverage_note(const Corpus& corpus) {
  std::size_t with_refs = 0;
  int first_year = 0;
  for (const auto& r : corpus.records()) {
    if (r.references.empty()) continue;
    ++with_refs;
    if (first_year == 0 || r.year < first_year) first_year = r.year;
  }
  return fmt::format("references available for {} of {} documents ({:.1f}%), earliest {}", with_refs, corpus.size(),
                     100.0 * static_cast<double>(with_refs) / static_cast<double>(corpus.size()), first_year);
}

struct ReferenceIncidence {
  std::vector<std::string> references;  // column labels
  Eigen::MatrixXi cells;                // documents x references
};

// Columns ordered by descending citation count, then alphabetically.
ReferenceIncidence reference_incidence(const Corpus& corpus, std::size_t top_n) {
  std::map<std::string, int> counts;
  for (const auto& r : corpus.records())
    for (const auto& ref : std::set<std::string>(r.references.begin(), r.references.end())) ++counts[ref];
  std::vector<std::pair<std::string, int>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; });
  if (top_n != 0 && ranked.size() > top_n) ranked.resize(top_n);

  ReferenceIncidence inc;
  std::unordered_map<std::string, Eigen::Index> column;
  for (const auto& [ref, n] : ranked) {
    column.emplace(ref, static_cast<Eigen::Index>(inc.references.size()));
    inc.references.push_back(ref);
  }
  inc.cells = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(corpus.size()),
                                    static_cast<Eigen::Index>(inc.references.size()));
  for (std::size_t d = 0; d < corpus.size(); ++d)
    for (const auto& ref : corpus.records()[d].references)
      if (auto it = column.find(ref); it != column.end()) inc.cells(static_cast<Eigen::Index>(d), it->second) = 1;
  return inc;
}

void add_matrix_edges(WeightedGraph& graph, const Eigen::MatrixXi& m, std::size_t min_weight) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j)
      if (m(i, j) > 0 && static_cast<std::size_t>(m(i, j)) >= min_weight)
        graph.edges.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<double>(m(i, j))});
}

}  // namespace

double reference_coverage(const Corpus& corpus) {
  const auto with_refs = std::count_if(corpus.records().begin(), corpus.records().end(),
                                       [](const BibRecord& r) { return !r.references.empty(); });
  return static_cast<double>(with_refs) / static_cast<double>(corpus.size());
}

WeightedGraph collaboration_network(const Corpus& corpus, std::size_t top_n) {
  WeightedGraph graph;
  graph.kind = GraphKind::Collaboration;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& person : production_distribution(corpus, Entity::Author, top_n)) {
    index.emplace(person.name, graph.nodes.size());
    graph.nodes.push_back({person.name, person.name, static_cast<double>(person.count)});
  }
  std::map<std::pair<std::size_t, std::size_t>, double> pairs;
  for (const auto& r : corpus.records()) {
    std::vector<std::size_t> present;
    for (const auto& name : r.authors())
      if (auto it = index.find(name); it != index.end()) present.push_back(it->second);
    std::sort(present.begin(), present.end());
    present.erase(std::unique(present.begin(), present.end()), present.end());
    for (std::size_t i = 0; i < present.size(); ++i)
      for (std::size_t j = i + 1; j < present.size(); ++j) pairs[{present[i], present[j]}] += 1.0;
  }
  for (const auto& [ab, w] : pairs) graph.edges.push_back({ab.first, ab.second, w});
  finish(graph);
  return graph;
}

WeightedGraph author_coupling_network(const Corpus& corpus, std::size_t min_shared) {
  require_references(corpus, "author coupling");
  if (min_shared < 1) throw Error(ErrorCode::InvalidArgument, "min_shared must be >= 1");
  WeightedGraph graph;
  graph.kind = GraphKind::AuthorCoupling;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& person : production_distribution(corpus, Entity::Author, 0)) {
    index.emplace(person.name, graph.nodes.size());
    graph.nodes.push_back({person.name, person.name, static_cast<double>(person.count)});
  }
  std::vector<std::set<std::string>> oeuvre(graph.nodes.size());
  for (const auto& r : corpus.records())
    for (const auto& name : r.authors()) oeuvre[index.at(name)].insert(r.references.begin(), r.references.end());

  for (std::size_t i = 0; i < oeuvre.size(); ++i) {
    if (oeuvre[i].empty()) continue;
    for (std::size_t j = i + 1; j < oeuvre.size(); ++j) {
      if (oeuvre[j].empty()) continue;
      std::size_t shared = 0;
      auto a = oeuvre[i].begin();
      auto b = oeuvre[j].begin();
      while (a != oeuvre[i].end() && b != oeuvre[j].end()) {
        if (*a < *b) ++a;
        else if (*b < *a) ++b;
        else {
          ++shared;
          ++a;
          ++b;
        }
      }
      if (shared >= min_shared) graph.edges.push_back({i, j, static_cast<double>(shared)});
    }
  }
  graph.reference_coverage = reference_coverage(corpus);
  graph.notes.push_back(coverage_note(corpus));
  finish(graph);
  return graph;
}

WeightedGraph doc_coupling_network(const Corpus& corpus, std::size_t min_shared) {
  require_references(corpus, "document coupling");
  if (min_shared < 1) throw Error(ErrorCode::InvalidArgument, "min_shared must be >= 1");
  WeightedGraph graph;
  graph.kind = GraphKind::DocCoupling;
  for (const auto& r : corpus.records())
    graph.nodes.push_back({r.id, fmt::format("{} ({})", r.student, r.year), static_cast<double>(r.references.size())});
  const auto inc = reference_incidence(corpus, 0);
  const Eigen::MatrixXi coupling = inc.cells * inc.cells.transpose();
  add_matrix_edges(graph, coupling, min_shared);
  graph.reference_coverage = reference_coverage(corpus);
  graph.notes.push_back(coverage_note(corpus));
  finish(graph);
  return graph;
}

WeightedGraph cocitation_network(const Corpus& corpus, std::size_t top_n_refs) {
  require_references(corpus, "co-citation");
  WeightedGraph graph;
  graph.kind = GraphKind::Cocitation;
  const auto inc = reference_incidence(corpus, top_n_refs);
  const Eigen::MatrixXi joint = inc.cells.transpose() * inc.cells;
  for (std::size_t k = 0; k < inc.references.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    graph.nodes.push_back({inc.references[k], inc.references[k], static_cast<double>(joint(col, col))});
  }
  add_matrix_edges(graph, joint, 1);
  graph.reference_coverage = reference_coverage(corpus);
  graph.notes.push_back(coverage_note(corpus));
  finish(graph);
  return graph;
}

WeightedGraph cooccurrence_network(const CooccurrenceMatrix& coocc, std::size_t top_n, EdgeNormalization normalization) {
  if (top_n > coocc.size())
    throw Error(ErrorCode::InvalidArgument, fmt::format("top_n {} exceeds the {} available terms", top_n, coocc.size()));
  std::vector<std::size_t> order(coocc.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return coocc.frequency(a) != coocc.frequency(b) ? coocc.frequency(a) > coocc.frequency(b)
                                                    : coocc.terms[a] < coocc.terms[b];
  });
  if (top_n != 0) order.resize(top_n);

  const Eigen::MatrixXd w = edge_weights(coocc, normalization);
  WeightedGraph graph;
  graph.kind = GraphKind::Cooccurrence;
  for (std::size_t i : order) graph.nodes.push_back({coocc.terms[i], coocc.terms[i], static_cast<double>(coocc.frequency(i))});
  for (std::size_t a = 0; a < order.size(); ++a)
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const double weight = w(static_cast<Eigen::Index>(order[a]), static_cast<Eigen::Index>(order[b]));
      if (weight > 0.0) graph.edges.push_back({a, b, weight});
    }
  finish(graph);
  return graph;
}

}  // namespace biblio
