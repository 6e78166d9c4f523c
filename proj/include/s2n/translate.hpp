#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "s2n/graph.hpp"

namespace s2n {

// A coarse graph whose nodes are subgraphs of a global graph. Two coarse
// nodes are adjacent iff their member sets intersect. Train nodes occupy the
// prefix [0, train_count).
struct S2NGraph {
  std::vector<std::vector<NodeId>> members;
  CsrAdjacency adjacency;
  std::size_t train_count = 0;
  // Index of each coarse node in the subgraph list it was built from.
  std::vector<std::size_t> origin_index;

  std::size_t num_nodes() const noexcept { return members.size(); }
  std::size_t num_edges() const noexcept { return adjacency.num_undirected_edges(); }
  bool is_train(std::size_t i) const noexcept { return i < train_count; }
};

// Coarse-node member set: the subgraph's node ids, sorted and deduplicated.
// Internal edges are ignored.
std::vector<NodeId> translate_node(const Subgraph& subgraph);

// |a ∩ b| for sorted inputs.
std::size_t overlap_size(std::span<const NodeId> a, std::span<const NodeId> b);

inline int edge_predicate(std::span<const NodeId> a, std::span<const NodeId> b) {
  return overlap_size(a, b) != 0 ? 1 : 0;
}

// One coarse node per subgraph, train subgraphs first (stable within each
// group). Edges come from an inverted node -> coarse-node index, so the cost
// is linear in the number of touching pairs rather than M^2.
S2NGraph build_s2n(std::span<const Subgraph> subgraphs, const std::vector<bool>& train_flags);

struct StagewiseGraphs {
  S2NGraph train_graph;
  S2NGraph eval_graph;
  // alignment[i] is the eval-graph node of train-graph node i.
  std::vector<std::size_t> alignment;
};

// Inductive split: the train graph holds train subgraphs only; the eval graph
// holds train and eval subgraphs with the train nodes as the same prefix.
// origin_index of both graphs refers to dataset subgraph indices.
StagewiseGraphs build_stagewise(const SubgraphDataset& dataset, Split eval_split);

// Coarse graph over every subgraph of the dataset, train first.
S2NGraph build_full(const SubgraphDataset& dataset);

// Labels of the coarse nodes, in coarse-node order.
LabelSet coarse_labels(const S2NGraph& graph, const LabelSet& labels);

}  // namespace s2n
