#include "biblio/concepts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include <Eigen/SVD>

#include "biblio/error.hpp"

namespace biblio {
namespace {

struct Projection {
  CorrespondenceAnalysis ca;
  Eigen::MatrixXd plane;  // terms x 2
};

Projection project_terms(const TermDocumentMatrix& tdm) {
  if (tdm.term_count() < 3)
    throw Error(ErrorCode::InvalidArgument, "topic map needs at least 3 terms, got " + std::to_string(tdm.term_count()));
  const Eigen::Index used_docs = (tdm.cells.colwise().sum().array() > 0).count();
  if (used_docs < 3)
    throw Error(ErrorCode::InvalidArgument,
                "topic map needs at least 3 documents with retained terms, got " + std::to_string(used_docs));
  Projection p;
  p.ca = correspondence_analysis(tdm.cells.cast<double>());
  if (p.ca.rank < 2)
    throw Error(ErrorCode::DegenerateProjection,
                "term-document table has rank " + std::to_string(p.ca.rank) + ", a 2D projection needs rank >= 2");
  p.plane = p.ca.row_coordinates.leftCols(2);
  return p;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

TermDocumentMatrix term_document_matrix(const Corpus& corpus, TextField field, std::size_t min_doc_freq,
                                        std::size_t max_terms, const NormalizationConfig& text) {
  if (min_doc_freq < 1) throw Error(ErrorCode::InvalidArgument, "min_doc_freq must be >= 1");
  std::vector<std::vector<std::string>> doc_terms;
  std::map<std::string, int> df;
  TermDocumentMatrix tdm;
  tdm.field = field;
  for (const auto& r : corpus.records()) {
    tdm.doc_ids.push_back(r.id);
    doc_terms.push_back(document_terms(r, field, text));
    for (const auto& t : doc_terms.back()) ++df[t];
  }
  std::vector<std::pair<std::string, int>> ranked;
  for (const auto& [term, f] : df)
    if (static_cast<std::size_t>(f) >= min_doc_freq) ranked.emplace_back(term, f);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; });
  if (max_terms != 0 && ranked.size() > max_terms) ranked.resize(max_terms);
  if (ranked.empty())
    throw Error(ErrorCode::EmptyVocabulary, "no " + std::string(to_string(field)) + " term occurs in at least " +
                                                std::to_string(min_doc_freq) + " documents");

  std::unordered_map<std::string, Eigen::Index> row;
  for (const auto& [term, f] : ranked) {
    row.emplace(term, static_cast<Eigen::Index>(tdm.terms.size()));
    tdm.terms.push_back(term);
  }
  tdm.cells = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(tdm.terms.size()),
                                    static_cast<Eigen::Index>(tdm.doc_ids.size()));
  for (std::size_t d = 0; d < doc_terms.size(); ++d)
    for (const auto& t : doc_terms[d])
      if (auto it = row.find(t); it != row.end()) tdm.cells(it->second, static_cast<Eigen::Index>(d)) = 1;
  return tdm;
}

CooccurrenceMatrix cooccurrence(const TermDocumentMatrix& tdm) {
  CooccurrenceMatrix c;
  c.terms = tdm.terms;
  c.counts = tdm.cells * tdm.cells.transpose();
  return c;
}

std::string_view to_string(EdgeNormalization n) { return n == EdgeNormalization::Association ? "association" : "raw"; }

EdgeNormalization parse_edge_normalization(std::string_view name) {
  if (name == "association" || name == "equivalence") return EdgeNormalization::Association;
  if (name == "raw") return EdgeNormalization::Raw;
  throw Error(ErrorCode::InvalidArgument, "unknown normalization '" + std::string(name) + "'");
}

Eigen::MatrixXd edge_weights(const CooccurrenceMatrix& coocc, EdgeNormalization normalization) {
  const Eigen::Index n = coocc.counts.rows();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double cij = coocc.counts(i, j);
      if (normalization == EdgeNormalization::Raw) {
        w(i, j) = cij;
      } else {
        const double denom = static_cast<double>(coocc.counts(i, i)) * coocc.counts(j, j);
        w(i, j) = denom > 0.0 ? cij * cij / denom : 0.0;
      }
    }
  }
  return w;
}

CorrespondenceAnalysis correspondence_analysis(const Eigen::MatrixXd& table) {
  if (table.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty table");
  if ((table.array() < 0.0).any()) throw Error(ErrorCode::InvalidArgument, "table has negative entries");
  const Eigen::VectorXd row_sums = table.rowwise().sum();
  if ((row_sums.array() <= 0.0).any()) throw Error(ErrorCode::InvalidArgument, "table has an all-zero row");

  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < table.cols(); ++j)
    if (table.col(j).sum() > 0.0) kept.push_back(j);

  const Eigen::Index rows = table.rows();
  const auto cols = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd n(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) n.col(j) = table.col(kept[static_cast<std::size_t>(j)]);

  const double grand = n.sum();
  const Eigen::MatrixXd p = n / grand;
  const Eigen::VectorXd r = p.rowwise().sum();
  const Eigen::VectorXd c = p.colwise().sum().transpose();
  const Eigen::VectorXd r_isqrt = r.array().rsqrt();
  const Eigen::VectorXd c_isqrt = c.array().rsqrt();
  const Eigen::MatrixXd residuals = r_isqrt.asDiagonal() * (p - r * c.transpose()) * c_isqrt.asDiagonal();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(residuals, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();

  CorrespondenceAnalysis out;
  out.row_masses = r;
  out.total_inertia = sigma.squaredNorm();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double tolerance = std::max(1e-12, static_cast<double>(std::max(rows, cols)) *
                                               std::numeric_limits<double>::epsilon() * sigma_max);
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > tolerance) ++out.rank;

  const auto rank = static_cast<Eigen::Index>(out.rank);
  const Eigen::Index dims = std::max<Eigen::Index>(2, rank);
  out.principal_inertias = sigma.head(rank).array().square();
  out.row_coordinates = Eigen::MatrixXd::Zero(rows, dims);
  out.column_coordinates = Eigen::MatrixXd::Zero(table.cols(), dims);
  for (Eigen::Index d = 0; d < rank; ++d) {
    Eigen::VectorXd f = r_isqrt.cwiseProduct(svd.matrixU().col(d)) * sigma(d);
    Eigen::VectorXd g = c_isqrt.cwiseProduct(svd.matrixV().col(d)) * sigma(d);
    Eigen::Index pivot = 0;
    for (Eigen::Index i = 1; i < rows; ++i)
      if (std::abs(f(i)) > std::abs(f(pivot))) pivot = i;
    if (f(pivot) < 0.0) {
      f = -f;
      g = -g;
    }
    out.row_coordinates.col(d) = f;
    for (Eigen::Index j = 0; j < cols; ++j) out.column_coordinates(kept[static_cast<std::size_t>(j)], d) = g(j);
  }
  return out;
}

TopicMap mca_topic_map(const TermDocumentMatrix& tdm, std::size_t k) {
  if (k < 1 || k > tdm.term_count())
    throw Error(ErrorCode::InvalidArgument, "k must lie in 1.." + std::to_string(tdm.term_count()));
  const Projection p = project_terms(tdm);
  const auto partition = ward_linkage(p.plane).cut(k);

  TopicMap map;
  map.field = tdm.field;
  map.k = k;
  map.explained_dim1 = p.ca.principal_inertias(0) / p.ca.total_inertia;
  map.explained_dim2 = p.ca.principal_inertias(1) / p.ca.total_inertia;
  for (std::size_t i = 0; i < tdm.term_count(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    map.points.push_back({tdm.terms[i], p.plane(row, 0), p.plane(row, 1), partition[i]});
  }
  return map;
}

Dendrogram dendrogram(const TermDocumentMatrix& tdm, std::size_t cut_k) {
  if (cut_k < 1 || cut_k > tdm.term_count())
    throw Error(ErrorCode::InvalidArgument, "cut_k must lie in 1.." + std::to_string(tdm.term_count()));
  const Projection p = project_terms(tdm);
  Dendrogram d;
  d.field = tdm.field;
  d.labels = tdm.terms;
  d.linkage = ward_linkage(p.plane);
  d.cut_k = cut_k;
  d.partition = d.linkage.cut(cut_k);
  return d;
}

std::string_view to_string(Quadrant q) {
  switch (q) {
    case Quadrant::Motor: return "motor";
    case Quadrant::Niche: return "niche";
    case Quadrant::EmergingOrDeclining: return "emerging_or_declining";
    case Quadrant::Basic: return "basic";
  }
  return "motor";
}

ThematicMap thematic_map(const CooccurrenceMatrix& coocc, std::size_t cluster_count, EdgeNormalization normalization) {
  const std::size_t n = coocc.size();
  if (cluster_count < 2) throw Error(ErrorCode::InvalidArgument, "thematic map needs at least 2 clusters");
  if (cluster_count > n)
    throw Error(ErrorCode::InvalidArgument, "cannot form " + std::to_string(cluster_count) + " themes from " +
                                                std::to_string(n) + " terms");
  const Eigen::MatrixXd w = edge_weights(coocc, normalization);
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double weight = w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (weight > 0.0) edges.push_back({i, j, weight});
    }
  const auto labels = greedy_modularity(n, edges, cluster_count);

  double all_frequency = 0.0;
  for (std::size_t i = 0; i < n; ++i) all_frequency += coocc.frequency(i);

  ThematicMap map;
  map.normalization = normalization;
  map.themes.resize(cluster_count);
  std::vector<std::vector<std::size_t>> members(cluster_count);
  for (std::size_t i = 0; i < n; ++i) members[static_cast<std::size_t>(labels[i] - 1)].push_back(i);

  for (std::size_t t = 0; t < cluster_count; ++t) {
    auto& ids = members[t];
    std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
      return coocc.frequency(a) != coocc.frequency(b) ? coocc.frequency(a) > coocc.frequency(b)
                                                      : coocc.terms[a] < coocc.terms[b];
    });
    Theme& theme = map.themes[t];
    double external = 0.0;
    double internal = 0.0;
    double frequency = 0.0;
    for (std::size_t i : ids) {
      theme.members.push_back(coocc.terms[i]);
      frequency += coocc.frequency(i);
      for (std::size_t j = 0; j < n; ++j) {
        const double weight = w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (labels[j] != labels[i]) external += weight;
        else if (j > i) internal += weight;
      }
    }
    theme.label = theme.members.front();
    theme.centrality = 10.0 * external;
    theme.density = 100.0 * internal / static_cast<double>(ids.size());
    theme.doc_share = all_frequency > 0.0 ? frequency / all_frequency : 0.0;
  }

  std::vector<double> centralities;
  std::vector<double> densities;
  for (const auto& t : map.themes) {
    centralities.push_back(t.centrality);
    densities.push_back(t.density);
  }
  map.centrality_median = median(centralities);
  map.density_median = median(densities);
  for (auto& t : map.themes) {
    const bool central = t.centrality >= map.centrality_median;
    const bool dense = t.density >= map.density_median;
    t.quadrant = central ? (dense ? Quadrant::Motor : Quadrant::Basic)
                         : (dense ? Quadrant::Niche : Quadrant::EmergingOrDeclining);
  }
  return map;
}

void to_json(nlohmann::json& j, const TopicMap& m) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : m.points)
    points.push_back({{"term", p.term}, {"x", p.x}, {"y", p.y}, {"cluster", p.cluster}});
  j = {{"field", to_string(m.field)},
       {"k", m.k},
       {"explained_inertia", {m.explained_dim1, m.explained_dim2}},
       {"points", points}};
}

void from_json(const nlohmann::json& j, TopicMap& m) {
  m.field = parse_text_field(j.at("field").get<std::string>());
  j.at("k").get_to(m.k);
  m.explained_dim1 = j.at("explained_inertia").at(0).get<double>();
  m.explained_dim2 = j.at("explained_inertia").at(1).get<double>();
  m.points.clear();
  for (const auto& p : j.at("points"))
    m.points.push_back({p.at("term").get<std::string>(), p.at("x").get<double>(), p.at("y").get<double>(),
                        p.at("cluster").get<int>()});
}

void to_json(nlohmann::json& j, const Dendrogram& d) {
  nlohmann::json merges = nlohmann::json::array();
  for (const auto& m : d.linkage.merges)
    merges.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
  j = {{"field", to_string(d.field)}, {"labels", d.labels}, {"merges", merges},
       {"cut_k", d.cut_k},           {"partition", d.partition}};
}

void from_json(const nlohmann::json& j, Dendrogram& d) {
  d.field = parse_text_field(j.at("field").get<std::string>());
  j.at("labels").get_to(d.labels);
  d.linkage.leaves = d.labels.size();
  d.linkage.merges.clear();
  for (const auto& m : j.at("merges"))
    d.linkage.merges.push_back({m.at("left").get<std::size_t>(), m.at("right").get<std::size_t>(),
                                m.at("height").get<double>(), m.at("size").get<std::size_t>()});
  j.at("cut_k").get_to(d.cut_k);
  j.at("partition").get_to(d.partition);
}

void to_json(nlohmann::json& j, const ThematicMap& m) {
  nlohmann::json themes = nlohmann::json::array();
  for (const auto& t : m.themes)
    themes.push_back({{"label", t.label},
                      {"members", t.members},
                      {"centrality", t.centrality},
                      {"density", t.density},
                      {"doc_share", t.doc_share},
                      {"quadrant", to_string(t.quadrant)}});
  j = {{"normalization", to_string(m.normalization)},
       {"centrality_median", m.centrality_median},
       {"density_median", m.density_median},
       {"themes", themes}};
}

void from_json(const nlohmann::json& j, ThematicMap& m) {
  m.normalization = parse_edge_normalization(j.at("normalization").get<std::string>());
  j.at("centrality_median").get_to(m.centrality_median);
  j.at("density_median").get_to(m.density_median);
  m.themes.clear();
  for (const auto& t : j.at("themes")) {
    Theme theme;
    t.at("label").get_to(theme.label);
    t.at("members").get_to(theme.members);
    t.at("centrality").get_to(theme.centrality);
    t.at("density").get_to(theme.density);
    t.at("doc_share").get_to(theme.doc_share);
    const auto q = t.at("quadrant").get<std::string>();
    theme.quadrant = q == "motor" ? Quadrant::Motor
                     : q == "niche" ? Quadrant::Niche
                     : q == "basic" ? Quadrant::Basic
                                    : Quadrant::EmergingOrDeclining;
    m.themes.push_back(std::move(theme));
  }
}

}  // namespace biblio
