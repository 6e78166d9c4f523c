#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "s2n/graph.hpp"
#include "s2n/translate.hpp"

namespace s2n {

// Adjacency plus per-node labels. Borrowed; the referenced data must outlive
// the view.
struct LabeledGraphView {
  const CsrAdjacency& adjacency;
  const LabelSet& labels;
};

// Fraction of directed edges (u, v) with y_u == y_v.
double edge_homophily(const LabeledGraphView& view);

// Mean over non-isolated nodes of the same-label fraction of neighbors.
double node_homophily(const LabeledGraphView& view);

// Mean Jaccard of label sets over directed edges. A single-label view is
// treated as singletons.
double edge_homophily_ml(const LabeledGraphView& view);

// Mean over non-isolated nodes of the mean neighbor Jaccard.
double node_homophily_ml(const LabeledGraphView& view);

// |a ∩ b| / |a ∪ b| over sorted sets; 0 when both are empty.
double jaccard(std::span<const int> a, std::span<const int> b);

std::size_t count_isolated(const CsrAdjacency& adjacency);

struct StatsRow {
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  double density = 0.0;
  std::size_t num_classes = 0;
  std::optional<double> node_homophily;
  std::optional<double> edge_homophily;
  // Nodes left out of the node-homophily mean because they have no neighbors.
  std::size_t isolated_excluded = 0;
};

struct DatasetStats {
  StatsRow before;
  StatsRow after;
};

// `coarse` must be built from every subgraph of `dataset` (see build_full).
// The before row describes the global graph, which carries no labels, so its
// homophily fields stay empty.
DatasetStats dataset_stats(const SubgraphDataset& dataset, const S2NGraph& coarse);

}  // namespace s2n
