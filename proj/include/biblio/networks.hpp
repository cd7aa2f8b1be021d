#pragma once

#include <cstddef>

#include "biblio/concepts.hpp"
#include "biblio/corpus.hpp"
#include "biblio/graph.hpp"

namespace biblio {

/// Co-authorship among students and supervisors. Node weight = documents,
/// edge weight = co-authored documents. top_n keeps the most prolific people
/// (0 keeps all) before edges are built.
WeightedGraph collaboration_network(const Corpus& corpus, std::size_t top_n = 0);

/// Authors linked by references shared across their oeuvres (the union of
/// references over every document they authored or supervised). Edges with
/// fewer than min_shared shared references are dropped. Throws
/// Error{EmptyReferences} when no record has references.
WeightedGraph author_coupling_network(const Corpus& corpus, std::size_t min_shared = 1);

/// Documents linked by shared references: B = A * A^T over the document x
/// reference incidence, diagonal dropped.
WeightedGraph doc_coupling_network(const Corpus& corpus, std::size_t min_shared = 1);

/// References linked by joint citation: C = A^T * A over the top_n_refs most
/// cited references (0 keeps all). Node weight = citing documents.
WeightedGraph cocitation_network(const Corpus& corpus, std::size_t top_n_refs);

/// Keyword network over the top_n most frequent terms (0 keeps all; must not
/// exceed the term count). Zero-weight edges are omitted.
WeightedGraph cooccurrence_network(const CooccurrenceMatrix& coocc, std::size_t top_n,
                                   EdgeNormalization normalization = EdgeNormalization::Association);

/// Reference-based networks need at least one document with references.
double reference_coverage(const Corpus& corpus);

}  // namespace biblio
