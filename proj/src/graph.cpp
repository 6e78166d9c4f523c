#include "s2n/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "s2n/error.hpp"

namespace s2n {

bool CsrAdjacency::has_edge(std::size_t u, std::size_t v) const {
  if (u >= num_nodes()) return false;
  const auto row = neighbors_of(u);
  return std::binary_search(row.begin(), row.end(), static_cast<NodeId>(v));
}

CsrAdjacency CsrAdjacency::from_pairs(std::size_t num_nodes,
                                      std::span<const std::pair<NodeId, NodeId>> pairs) {
  std::vector<std::size_t> degree(num_nodes + 1, 0);
  for (const auto& [u, v] : pairs) {
    ++degree[u + 1];
    ++degree[v + 1];
  }
  CsrAdjacency adj;
  adj.offsets.assign(num_nodes + 1, 0);
  for (std::size_t u = 0; u < num_nodes; ++u) adj.offsets[u + 1] = adj.offsets[u] + degree[u + 1];
  adj.neighbors.resize(adj.offsets.back());
  std::vector<std::size_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  for (const auto& [u, v] : pairs) {
    adj.neighbors[cursor[u]++] = v;
    adj.neighbors[cursor[v]++] = u;
  }
  // Sort and collapse duplicates row by row, then compact.
  std::vector<std::size_t> offsets{0};
  offsets.reserve(num_nodes + 1);
  std::size_t out = 0;
  for (std::size_t u = 0; u < num_nodes; ++u) {
    auto first = adj.neighbors.begin() + static_cast<std::ptrdiff_t>(adj.offsets[u]);
    auto last = adj.neighbors.begin() + static_cast<std::ptrdiff_t>(adj.offsets[u + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    for (auto it = first; it != last; ++it) adj.neighbors[out++] = *it;
    offsets.push_back(out);
  }
  adj.neighbors.resize(out);
  adj.offsets = std::move(offsets);
  return adj;
}

std::vector<std::pair<NodeId, NodeId>> CsrAdjacency::undirected_edges() const {
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(num_undirected_edges());
  for (std::size_t u = 0; u < num_nodes(); ++u)
    for (NodeId v : neighbors_of(u))
      if (u < v) edges.emplace_back(static_cast<NodeId>(u), v);
  return edges;
}

MatrixXd CsrAdjacency::to_dense() const {
  const auto n = static_cast<Eigen::Index>(num_nodes());
  MatrixXd dense = MatrixXd::Zero(n, n);
  for (std::size_t u = 0; u < num_nodes(); ++u)
    for (NodeId v : neighbors_of(u)) dense(static_cast<Eigen::Index>(u), v) = 1.0;
  return dense;
}

LabelSet LabelSet::gather(std::span<const std::size_t> indices) const {
  LabelSet out;
  out.kind = kind;
  out.num_classes = num_classes;
  for (std::size_t i : indices) {
    if (kind == LabelKind::Single)
      out.single.push_back(single[i]);
    else
      out.multi.push_back(multi[i]);
  }
  return out;
}

LabelSet LabelSet::as_multi() const {
  if (kind == LabelKind::Multi) return *this;
  LabelSet out;
  out.kind = LabelKind::Multi;
  out.num_classes = num_classes;
  out.multi.reserve(single.size());
  for (int y : single) out.multi.push_back({y});
  return out;
}

std::string to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Valid: return "valid";
    case Split::Test: return "test";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view text) {
  if (text == "train") return Split::Train;
  if (text == "valid") return Split::Valid;
  if (text == "test") return Split::Test;
  return std::nullopt;
}

std::vector<std::size_t> SubgraphDataset::indices_of(Split s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < split.size(); ++i)
    if (split[i] == s) out.push_back(i);
  return out;
}

bool SubgraphDataset::operator==(const SubgraphDataset& other) const {
  return graph == other.graph && features.rows() == other.features.rows() &&
         features.cols() == other.features.cols() && features == other.features &&
         subgraphs == other.subgraphs && labels == other.labels && split == other.split;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v.where << ": " << v.message << '\n';
  return out.str();
}

ValidationReport validate(const SubgraphDataset& dataset) {
  ValidationReport report;
  auto flag = [&](std::string where, std::string message) {
    report.violations.push_back({std::move(where), std::move(message)});
  };

  const auto& graph = dataset.graph;
  const auto& adj = graph.adjacency;
  if (adj.offsets.size() != graph.num_nodes + 1) {
    flag("graph", "offset array does not match node count");
  } else {
    for (std::size_t u = 0; u < graph.num_nodes; ++u) {
      const auto row = adj.neighbors_of(u);
      for (std::size_t k = 0; k < row.size(); ++k) {
        const NodeId v = row[k];
        if (v >= graph.num_nodes) {
          flag("graph", "neighbor id out of range at node " + std::to_string(u));
          continue;
        }
        if (v == u) flag("graph", "self-loop at node " + std::to_string(u));
        if (k > 0 && row[k - 1] >= v) flag("graph", "neighbor list not strictly ascending at node " + std::to_string(u));
        if (!adj.has_edge(v, u)) flag("graph", "asymmetric edge " + std::to_string(u) + "-" + std::to_string(v));
      }
    }
    if (adj.neighbors.size() % 2 != 0) flag("graph", "odd number of directed edges");
  }

  if (static_cast<std::size_t>(dataset.features.rows()) != graph.num_nodes)
    flag("features", "row count differs from node count");
  if (!dataset.features.allFinite()) flag("features", "non-finite entry");

  const std::size_t m = dataset.subgraphs.size();
  if (dataset.labels.size() != m) flag("labels", "label count differs from subgraph count");
  if (dataset.split.size() != m) flag("split", "split count differs from subgraph count");

  for (std::size_t i = 0; i < m; ++i) {
    const std::string where = "subgraph[" + std::to_string(i) + "]";
    const auto& s = dataset.subgraphs[i];
    if (s.node_ids.empty()) flag(where, "empty node set");
    bool in_range = true;
    for (NodeId u : s.node_ids)
      if (u >= graph.num_nodes) in_range = false;
    if (!in_range) flag(where, "node id out of range");
    std::vector<NodeId> sorted = s.node_ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) flag(where, "duplicate node id");
    else if (sorted != s.node_ids) flag(where, "node ids not sorted");
    for (const auto& [u, v] : s.internal_edges) {
      if (!std::binary_search(sorted.begin(), sorted.end(), u) || !std::binary_search(sorted.begin(), sorted.end(), v))
        flag(where, "internal edge endpoint not in node set");
      else if (!adj.has_edge(u, v))
        flag(where, "internal edge not in global graph");
    }
  }

  const auto& labels = dataset.labels;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string where = "label[" + std::to_string(i) + "]";
    if (labels.kind == LabelKind::Single) {
      const int y = labels.single[i];
      if (y < 0 || static_cast<std::size_t>(y) >= labels.num_classes) flag(where, "class id out of range");
    } else {
      const auto& set = labels.multi[i];
      for (std::size_t k = 0; k < set.size(); ++k) {
        if (set[k] < 0 || static_cast<std::size_t>(set[k]) >= labels.num_classes) flag(where, "class id out of range");
        if (k > 0 && set[k - 1] >= set[k]) flag(where, "label set not strictly ascending");
      }
    }
  }
  return report;
}

double density(std::size_t num_nodes, std::size_t num_undirected_edges) {
  if (num_nodes < 2) throw Error(ErrorCode::DegenerateGraph, "density needs at least two nodes");
  const double n = static_cast<double>(num_nodes);
  return 2.0 * static_cast<double>(num_undirected_edges) / (n * (n - 1.0));
}

FeatureMatrix degree_bucket_features(const GlobalGraph& graph) {
  FeatureMatrix x = FeatureMatrix::Zero(static_cast<Eigen::Index>(graph.num_nodes), kDegreeBuckets);
  for (std::size_t u = 0; u < graph.num_nodes; ++u) {
    const auto bucket = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(graph.adjacency.degree(u)) + 1.0)));
    x(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(std::min(bucket, kDegreeBuckets - 1))) = 1.0;
  }
  return x;
}

}  // namespace s2n
