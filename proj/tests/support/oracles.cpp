#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace biblio::testing {

bool contains(const std::vector<std::string>& list, const std::string& item) {
  return std::find(list.begin(), list.end(), item) != list.end();
}

Eigen::MatrixXi brute_cooccurrence(const Corpus& corpus, TextField field, const std::vector<std::string>& terms,
                                   const NormalizationConfig& text) {
  const auto n = static_cast<Eigen::Index>(terms.size());
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(n, n);
  for (const auto& r : corpus.records()) {
    const auto doc = document_terms(r, field, text);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (contains(doc, terms[static_cast<std::size_t>(i)]) && contains(doc, terms[static_cast<std::size_t>(j)]))
          ++c(i, j);
  }
  return c;
}

Eigen::MatrixXi brute_doc_coupling(const Corpus& corpus) {
  const auto& recs = corpus.records();
  const auto n = static_cast<Eigen::Index>(recs.size());
  Eigen::MatrixXi b = Eigen::MatrixXi::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      std::vector<std::string> seen;
      for (const auto& ref : recs[static_cast<std::size_t>(i)].references)
        if (contains(recs[static_cast<std::size_t>(j)].references, ref) && !contains(seen, ref)) {
          seen.push_back(ref);
          ++b(i, j);
        }
    }
  return b;
}

Eigen::MatrixXi brute_cocitation(const Corpus& corpus, const std::vector<std::string>& refs) {
  const auto n = static_cast<Eigen::Index>(refs.size());
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (const auto& r : corpus.records())
        if (contains(r.references, refs[static_cast<std::size_t>(i)]) && contains(r.references, refs[static_cast<std::size_t>(j)]))
          ++c(i, j);
  return c;
}

std::map<std::pair<std::string, std::string>, int> brute_collaboration(const Corpus& corpus) {
  std::map<std::pair<std::string, std::string>, int> tally;
  for (const auto& r : corpus.records()) {
    std::vector<std::string> people{r.student};
    for (const auto& s : r.supervisors)
      if (!contains(people, s)) people.push_back(s);
    for (const auto& a : people)
      for (const auto& b : people)
        if (a < b) ++tally[{a, b}];
  }
  return tally;
}

FlowTally brute_flow(const Corpus& corpus, const FlowDiagram& diagram, const NormalizationConfig& text) {
  FlowTally tally;
  for (const auto& r : corpus.records())
    for (std::size_t s = 0; s + 1 < diagram.stages.size(); ++s) {
      const auto left = flow_values(r, diagram.stages[s], text);
      const auto right = flow_values(r, diagram.stages[s + 1], text);
      for (const auto& from : diagram.nodes[s])
        for (const auto& to : diagram.nodes[s + 1])
          if (contains(left, from.label) && contains(right, to.label)) ++tally[{s, from.label, to.label}];
    }
  return tally;
}

FlowTally tally_of(const FlowDiagram& diagram) {
  FlowTally tally;
  for (const auto& l : diagram.links)
    tally[{l.stage, diagram.nodes[l.stage][l.from].label, diagram.nodes[l.stage + 1][l.to].label}] += l.weight;
  return tally;
}

std::map<std::pair<std::string, std::string>, double> edges_by_id(const WeightedGraph& graph) {
  std::map<std::pair<std::string, std::string>, double> out;
  for (const auto& e : graph.edges) {
    auto a = graph.nodes[e.a].id;
    auto b = graph.nodes[e.b].id;
    if (b < a) std::swap(a, b);
    out[{a, b}] += e.weight;
  }
  return out;
}

SymmetricEigen jacobi_eigen(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  SymmetricEigen out;
  for (std::size_t k : order) {
    out.values.push_back(a[k][k]);
    std::vector<double> vec(n);
    for (std::size_t i = 0; i < n; ++i) vec[i] = v[i][k];
    out.vectors.push_back(vec);
  }
  return out;
}

std::vector<std::vector<double>> ca_rows_oracle(const std::vector<std::vector<double>>& table, std::size_t dims) {
  const std::size_t m = table.size();
  const std::size_t n = table.front().size();
  double total = 0.0;
  for (const auto& row : table)
    for (double x : row) total += x;
  std::vector<double> r(m, 0.0), c(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      r[i] += table[i][j] / total;
      c[j] += table[i][j] / total;
    }
  std::vector<std::vector<double>> s(m, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (c[j] > 0) s[i][j] = (table[i][j] / total - r[i] * c[j]) / std::sqrt(r[i] * c[j]);
  std::vector<std::vector<double>> sst(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < n; ++j) sst[i][k] += s[i][j] * s[k][j];
  const auto eig = jacobi_eigen(sst);
  std::vector<std::vector<double>> f(m, std::vector<double>(dims, 0.0));
  for (std::size_t d = 0; d < dims; ++d) {
    const double sigma = std::sqrt(std::max(0.0, eig.values[d]));
    for (std::size_t i = 0; i < m; ++i) f[i][d] = eig.vectors[d][i] * sigma / std::sqrt(r[i]);
  }
  return f;
}

}  // namespace biblio::testing
