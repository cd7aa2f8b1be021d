#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "biblio/clustering.hpp"
#include "biblio/corpus.hpp"
#include "biblio/text.hpp"

namespace biblio {

/// Binary term x document incidence. Terms are ordered by descending document
/// frequency, then alphabetically; documents follow corpus order.
struct TermDocumentMatrix {
  TextField field = TextField::AuthorKeywords;
  std::vector<std::string> terms;
  std::vector<std::string> doc_ids;
  Eigen::MatrixXi cells;

  std::size_t term_count() const { return terms.size(); }
  std::size_t doc_count() const { return doc_ids.size(); }
  Eigen::VectorXi doc_frequency() const { return cells.rowwise().sum(); }
};

/// Throws Error{EmptyVocabulary} when no term reaches min_doc_freq.
/// max_terms == 0 keeps every surviving term.
TermDocumentMatrix term_document_matrix(const Corpus& corpus, TextField field, std::size_t min_doc_freq,
                                        std::size_t max_terms,
                                        const NormalizationConfig& text = default_normalization());

/// c_ij = documents containing both i and j; c_ii = document frequency.
struct CooccurrenceMatrix {
  std::vector<std::string> terms;
  Eigen::MatrixXi counts;

  std::size_t size() const { return terms.size(); }
  int frequency(std::size_t i) const {
    return counts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
  }
};

CooccurrenceMatrix cooccurrence(const TermDocumentMatrix& tdm);

enum class EdgeNormalization {
  /// e_ij = c_ij^2 / (c_ii * c_jj)
  Association,
  Raw,
};

std::string_view to_string(EdgeNormalization n);
EdgeNormalization parse_edge_normalization(std::string_view name);

/// Off-diagonal edge weights under the chosen normalization (diagonal 0).
Eigen::MatrixXd edge_weights(const CooccurrenceMatrix& coocc, EdgeNormalization normalization);

/// Simple correspondence analysis of a non-negative table whose rows are all
/// non-zero. Columns summing to zero are ignored.
struct CorrespondenceAnalysis {
  /// Principal coordinates, one row per table row, one column per dimension
  /// with non-zero inertia (at least 2 columns, zero-padded).
  Eigen::MatrixXd row_coordinates;
  Eigen::MatrixXd column_coordinates;
  Eigen::VectorXd row_masses;
  /// Squared singular values, descending.
  Eigen::VectorXd principal_inertias;
  double total_inertia = 0.0;
  std::size_t rank = 0;
};

/// Each dimension is oriented so the row coordinate of largest magnitude is
/// positive (ties go to the lowest row).
CorrespondenceAnalysis correspondence_analysis(const Eigen::MatrixXd& table);

struct TopicPoint {
  std::string term;
  double x = 0.0;
  double y = 0.0;
  int cluster = 0;
};

struct TopicMap {
  TextField field = TextField::AuthorKeywords;
  std::vector<TopicPoint> points;
  /// Share of total inertia carried by the first and second dimension.
  double explained_dim1 = 0.0;
  double explained_dim2 = 0.0;
  std::size_t k = 0;
};

/// Correspondence analysis of the term x document table, terms placed at their
/// first two principal coordinates and grouped by Ward clustering cut at k.
/// Needs >= 3 terms, >= 3 documents with a retained term and 1 <= k <= terms;
/// throws Error{DegenerateProjection} when the table has rank < 2.
TopicMap mca_topic_map(const TermDocumentMatrix& tdm, std::size_t k);

struct Dendrogram {
  TextField field = TextField::AuthorKeywords;
  std::vector<std::string> labels;
  Linkage linkage;
  std::size_t cut_k = 0;
  /// linkage.cut(cut_k)
  std::vector<int> partition;
};

/// Same coordinates and linkage as mca_topic_map, so cutting at the topic
/// map's k yields its partition.
Dendrogram dendrogram(const TermDocumentMatrix& tdm, std::size_t cut_k);

enum class Quadrant {
  Motor,                ///< high centrality, high density
  Niche,                ///< low centrality, high density
  EmergingOrDeclining,  ///< low centrality, low density
  Basic,                ///< high centrality, low density
};

std::string_view to_string(Quadrant q);

struct Theme {
  std::string label;
  std::vector<std::string> members;
  double centrality = 0.0;
  double density = 0.0;
  /// Member document frequencies over the sum of all term frequencies.
  double doc_share = 0.0;
  Quadrant quadrant = Quadrant::Motor;
};

struct ThematicMap {
  std::vector<Theme> themes;
  double centrality_median = 0.0;
  double density_median = 0.0;
  EdgeNormalization normalization = EdgeNormalization::Association;
};

/// Themes are communities of the keyword network (greedy modularity merged
/// down to cluster_count). Centrality = 10 * sum of weights leaving the theme;
/// density = 100 * sum of internal weights / member count. A theme is "high"
/// on an axis when its value is >= the median over themes.
ThematicMap thematic_map(const CooccurrenceMatrix& coocc, std::size_t cluster_count,
                         EdgeNormalization normalization = EdgeNormalization::Association);

void to_json(nlohmann::json& j, const TopicMap& m);
void from_json(const nlohmann::json& j, TopicMap& m);
void to_json(nlohmann::json& j, const Dendrogram& d);
void from_json(const nlohmann::json& j, Dendrogram& d);
void to_json(nlohmann::json& j, const ThematicMap& m);
void from_json(const nlohmann::json& j, ThematicMap& m);

}  // namespace biblio
