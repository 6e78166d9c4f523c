#include "s2n/homophily.hpp"

#include <cmath>

#include "s2n/error.hpp"

namespace s2n {
namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

void check_view(const LabeledGraphView& view) {
  if (view.labels.size() != view.adjacency.num_nodes())
    throw Error(ErrorCode::ShapeMismatch, "label count differs from node count");
}

void require_single(const LabeledGraphView& view) {
  if (view.labels.kind != LabelKind::Single)
    throw Error(ErrorCode::WrongLabelKind, "single-label homophily on a multi-label view");
}

std::span<const int> label_set(const LabelSet& labels, std::size_t v) {
  if (labels.kind == LabelKind::Single) return {&labels.single[v], 1};
  return labels.multi[v];
}

template <typename PairScore>
double edge_mean(const LabeledGraphView& view, PairScore score) {
  const auto& adj = view.adjacency;
  if (adj.num_directed_edges() == 0) throw Error(ErrorCode::NoEdges, "homophily of a graph without edges");
  CompensatedSum total;
  for (std::size_t u = 0; u < adj.num_nodes(); ++u)
    for (NodeId v : adj.neighbors_of(u)) total.add(score(u, v));
  return total.value() / static_cast<double>(adj.num_directed_edges());
}

template <typename PairScore>
double node_mean(const LabeledGraphView& view, PairScore score) {
  const auto& adj = view.adjacency;
  CompensatedSum total;
  std::size_t counted = 0;
  for (std::size_t v = 0; v < adj.num_nodes(); ++v) {
    const auto deg = adj.degree(v);
    if (deg == 0) continue;
    CompensatedSum local;
    for (NodeId u : adj.neighbors_of(v)) local.add(score(v, u));
    total.add(local.value() / static_cast<double>(deg));
    ++counted;
  }
  if (counted == 0) throw Error(ErrorCode::AllNodesIsolated, "node homophily with every node isolated");
  return total.value() / static_cast<double>(counted);
}

}  // namespace

double jaccard(std::span<const int> a, std::span<const int> b) {
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t united = a.size() + b.size() - common;
  return united == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(united);
}

std::size_t count_isolated(const CsrAdjacency& adjacency) {
  std::size_t count = 0;
  for (std::size_t v = 0; v < adjacency.num_nodes(); ++v) count += adjacency.degree(v) == 0;
  return count;
}

double edge_homophily(const LabeledGraphView& view) {
  check_view(view);
  require_single(view);
  const auto& y = view.labels.single;
  return edge_mean(view, [&](std::size_t u, std::size_t v) { return y[u] == y[v] ? 1.0 : 0.0; });
}

double node_homophily(const LabeledGraphView& view) {
  check_view(view);
  require_single(view);
  const auto& y = view.labels.single;
  return node_mean(view, [&](std::size_t u, std::size_t v) { return y[u] == y[v] ? 1.0 : 0.0; });
}

double edge_homophily_ml(const LabeledGraphView& view) {
  check_view(view);
  return edge_mean(view, [&](std::size_t u, std::size_t v) {
    return jaccard(label_set(view.labels, u), label_set(view.labels, v));
  });
}

double node_homophily_ml(const LabeledGraphView& view) {
  check_view(view);
  return node_mean(view, [&](std::size_t u, std::size_t v) {
    return jaccard(label_set(view.labels, u), label_set(view.labels, v));
  });
}

DatasetStats dataset_stats(const SubgraphDataset& dataset, const S2NGraph& coarse) {
  if (coarse.num_nodes() != dataset.num_subgraphs())
    throw Error(ErrorCode::ShapeMismatch, "coarse graph must cover every subgraph of the dataset");
  DatasetStats stats;
  stats.before.num_nodes = dataset.graph.num_nodes;
  stats.before.num_edges = dataset.graph.num_undirected_edges();
  stats.before.density = density(stats.before.num_nodes, stats.before.num_edges);
  stats.before.num_classes = dataset.labels.num_classes;
  stats.before.isolated_excluded = count_isolated(dataset.graph.adjacency);

  stats.after.num_nodes = coarse.num_nodes();
  stats.after.num_edges = coarse.num_edges();
  stats.after.density = density(stats.after.num_nodes, stats.after.num_edges);
  stats.after.num_classes = dataset.labels.num_classes;
  stats.after.isolated_excluded = count_isolated(coarse.adjacency);
  const LabelSet labels = coarse_labels(coarse, dataset.labels);
  const LabeledGraphView view{coarse.adjacency, labels};
  if (coarse.num_edges() > 0) {
    const bool multi = labels.kind == LabelKind::Multi;
    stats.after.node_homophily = multi ? node_homophily_ml(view) : node_homophily(view);
    stats.after.edge_homophily = multi ? edge_homophily_ml(view) : edge_homophily(view);
  }
  return stats;
}

}  // namespace s2n
