#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "s2n/types.hpp"

namespace s2n {

// Global graph over dense node ids 0..N-1. No self-loops.
struct GlobalGraph {
  std::size_t num_nodes = 0;
  CsrAdjacency adjacency;

  std::size_t num_undirected_edges() const noexcept { return adjacency.num_undirected_edges(); }

  bool operator==(const GlobalGraph&) const = default;
};

// Row u holds the feature vector of global node u.
using FeatureMatrix = MatrixXd;

struct Subgraph {
  std::vector<NodeId> node_ids;
  std::vector<std::pair<NodeId, NodeId>> internal_edges;

  bool operator==(const Subgraph&) const = default;
};

enum class LabelKind { Single, Multi };

struct LabelSet {
  LabelKind kind = LabelKind::Single;
  std::size_t num_classes = 0;
  // Single-label: one entry per subgraph. Multi-label: sorted class ids.
  std::vector<int> single;
  std::vector<std::vector<int>> multi;

  std::size_t size() const noexcept {
    return kind == LabelKind::Single ? single.size() : multi.size();
  }

  // Subset of labels, in the order given by `indices`.
  LabelSet gather(std::span<const std::size_t> indices) const;

  // Multi-label view of the same labels; single labels become singletons.
  LabelSet as_multi() const;

  bool operator==(const LabelSet&) const = default;
};

enum class Split { Train, Valid, Test };

std::string to_string(Split split);
std::optional<Split> parse_split(std::string_view text);

struct SubgraphDataset {
  GlobalGraph graph;
  FeatureMatrix features;
  std::vector<Subgraph> subgraphs;
  LabelSet labels;
  std::vector<Split> split;

  std::size_t num_subgraphs() const noexcept { return subgraphs.size(); }
  std::vector<std::size_t> indices_of(Split s) const;

  bool operator==(const SubgraphDataset& other) const;
};

struct Violation {
  std::string where;  // "graph", "features", "subgraph[3]", ...
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::string summary() const;
};

// Checks every invariant of the dataset and the types it contains.
ValidationReport validate(const SubgraphDataset& dataset);

// Undirected density 2|E| / (N (N - 1)).
double density(std::size_t num_nodes, std::size_t num_undirected_edges);

// Fallback features for structure-only datasets: one-hot over 16 buckets of
// floor(log2(degree + 1)), saturating at the last bucket.
inline constexpr std::size_t kDegreeBuckets = 16;
FeatureMatrix degree_bucket_features(const GlobalGraph& graph);

}  // namespace s2n
