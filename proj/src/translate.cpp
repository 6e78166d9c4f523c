#include "s2n/translate.hpp"

#include <algorithm>
#include <limits>

#include "s2n/error.hpp"

namespace s2n {

std::vector<NodeId> translate_node(const Subgraph& subgraph) {
  std::vector<NodeId> members = subgraph.node_ids;
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return members;
}

std::size_t overlap_size(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

S2NGraph build_s2n(std::span<const Subgraph> subgraphs, const std::vector<bool>& train_flags) {
  if (subgraphs.empty()) throw Error(ErrorCode::EmptyInput, "no subgraphs to translate");
  if (train_flags.size() != subgraphs.size())
    throw Error(ErrorCode::ShapeMismatch, "train flag count differs from subgraph count");

  S2NGraph g;
  for (std::size_t i = 0; i < subgraphs.size(); ++i)
    if (train_flags[i]) g.origin_index.push_back(i);
  g.train_count = g.origin_index.size();
  for (std::size_t i = 0; i < subgraphs.size(); ++i)
    if (!train_flags[i]) g.origin_index.push_back(i);

  g.members.reserve(subgraphs.size());
  NodeId max_id = 0;
  for (std::size_t origin : g.origin_index) {
    g.members.push_back(translate_node(subgraphs[origin]));
    if (!g.members.back().empty()) max_id = std::max(max_id, g.members.back().back());
  }

  // Inverted index: global node -> coarse nodes containing it (ascending).
  const std::size_t m = g.members.size();
  std::vector<std::size_t> bucket_offsets(static_cast<std::size_t>(max_id) + 2, 0);
  for (const auto& members : g.members)
    for (NodeId u : members) ++bucket_offsets[u + 1];
  for (std::size_t u = 1; u < bucket_offsets.size(); ++u) bucket_offsets[u] += bucket_offsets[u - 1];
  std::vector<std::uint32_t> buckets(bucket_offsets.back());
  {
    std::vector<std::size_t> cursor(bucket_offsets.begin(), bucket_offsets.end() - 1);
    for (std::size_t i = 0; i < m; ++i)
      for (NodeId u : g.members[i]) buckets[cursor[u]++] = static_cast<std::uint32_t>(i);
  }

  // For each coarse node, collect every other coarse node sharing a member;
  // `stamp` deduplicates within a row.
  constexpr auto kUnseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> stamp(m, kUnseen);
  g.adjacency.offsets.assign(1, 0);
  g.adjacency.offsets.reserve(m + 1);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t row_start = g.adjacency.neighbors.size();
    for (NodeId u : g.members[i])
      for (std::size_t k = bucket_offsets[u]; k < bucket_offsets[u + 1]; ++k) {
        const std::uint32_t j = buckets[k];
        if (j == i || stamp[j] == i) continue;
        stamp[j] = i;
        g.adjacency.neighbors.push_back(j);
      }
    std::sort(g.adjacency.neighbors.begin() + static_cast<std::ptrdiff_t>(row_start), g.adjacency.neighbors.end());
    g.adjacency.offsets.push_back(g.adjacency.neighbors.size());
  }
  return g;
}

StagewiseGraphs build_stagewise(const SubgraphDataset& dataset, Split eval_split) {
  if (eval_split == Split::Train) throw Error(ErrorCode::EmptySplit, "evaluation split must be valid or test");
  std::vector<Subgraph> train_only;
  std::vector<Subgraph> combined;
  std::vector<std::size_t> train_origin, combined_origin;
  std::vector<bool> combined_flags;
  for (std::size_t i = 0; i < dataset.num_subgraphs(); ++i) {
    const Split s = dataset.split[i];
    if (s == Split::Train) {
      train_only.push_back(dataset.subgraphs[i]);
      train_origin.push_back(i);
    }
    if (s == Split::Train || s == eval_split) {
      combined.push_back(dataset.subgraphs[i]);
      combined_origin.push_back(i);
      combined_flags.push_back(s == Split::Train);
    }
  }
  if (train_only.empty()) throw Error(ErrorCode::EmptySplit, "train split is empty");
  if (combined.size() == train_only.size())
    throw Error(ErrorCode::EmptySplit, to_string(eval_split) + " split is empty");

  StagewiseGraphs out;
  out.train_graph = build_s2n(train_only, std::vector<bool>(train_only.size(), true));
  out.eval_graph = build_s2n(combined, combined_flags);
  for (auto& o : out.train_graph.origin_index) o = train_origin[o];
  for (auto& o : out.eval_graph.origin_index) o = combined_origin[o];
  out.alignment.resize(out.train_graph.num_nodes());
  for (std::size_t i = 0; i < out.alignment.size(); ++i) out.alignment[i] = i;
  return out;
}

S2NGraph build_full(const SubgraphDataset& dataset) {
  std::vector<bool> flags(dataset.num_subgraphs());
  for (std::size_t i = 0; i < flags.size(); ++i) flags[i] = dataset.split[i] == Split::Train;
  return build_s2n(dataset.subgraphs, flags);
}

LabelSet coarse_labels(const S2NGraph& graph, const LabelSet& labels) {
  return labels.gather(graph.origin_index);
}

}  // namespace s2n
