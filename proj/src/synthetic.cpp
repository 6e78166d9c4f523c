#include "s2n/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "s2n/error.hpp"

namespace s2n {

SynthConfig synth_preset(std::string_view name) {
  SynthConfig config;
  if (name == "separable") return config;
  if (name == "hard") {
    config.overlap = 0.8;
    config.separation = 1.0;
    return config;
  }
  if (name == "multilabel") {
    config.label_kind = LabelKind::Multi;
    config.overlap = 0.2;
    config.separation = 3.0;
    return config;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown preset '" + std::string(name) + "' (separable|hard|multilabel)");
}

namespace {

void check(const SynthConfig& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InfeasibleConfig, what); };
  if (c.num_classes == 0 || c.num_nodes < c.num_classes) fail("need 1 <= num_classes <= num_nodes");
  if (c.min_size == 0 || c.min_size > c.max_size) fail("need 1 <= min_size <= max_size");
  if (c.max_size > c.num_nodes / c.num_classes) fail("subgraph size exceeds class pool size");
  if (c.overlap < 0.0 || c.overlap > 1.0) fail("overlap must lie in [0, 1]");
  if (c.edge_probability < 0.0 || c.edge_probability > 1.0) fail("edge probability must lie in [0, 1]");
  if (c.feature_dim == 0) fail("feature_dim must be positive");
  if (c.num_subgraphs == 0) fail("num_subgraphs must be positive");
  if (c.train_fraction <= 0.0 || c.valid_fraction < 0.0 || c.train_fraction + c.valid_fraction >= 1.0)
    fail("split fractions must leave room for every split");
}

// k distinct draws from `pool` excluding anything already in `taken`.
void draw_from(std::vector<NodeId>& taken, const std::vector<NodeId>& pool, std::size_t k, std::mt19937_64& rng) {
  std::vector<NodeId> candidates;
  candidates.reserve(pool.size());
  for (NodeId u : pool)
    if (std::find(taken.begin(), taken.end(), u) == taken.end()) candidates.push_back(u);
  k = std::min(k, candidates.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, candidates.size() - 1);
    std::swap(candidates[i], candidates[pick(rng)]);
    taken.push_back(candidates[i]);
  }
}

}  // namespace

SubgraphDataset generate_synthetic(const SynthConfig& config, std::uint64_t seed) {
  check(config);
  std::mt19937_64 rng(seed);
  const std::size_t n = config.num_nodes;
  const std::size_t classes = config.num_classes;
  const std::size_t pool_size = n / classes;

  // Class c owns nodes [c * pool_size, (c + 1) * pool_size); leftovers belong to no pool.
  std::vector<std::vector<NodeId>> pools(classes);
  for (std::size_t c = 0; c < classes; ++c)
    for (std::size_t k = 0; k < pool_size; ++k) pools[c].push_back(static_cast<NodeId>(c * pool_size + k));
  std::vector<NodeId> everyone(n);
  std::iota(everyone.begin(), everyone.end(), NodeId{0});

  SubgraphDataset ds;
  ds.graph.num_nodes = n;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::bernoulli_distribution coin(config.edge_probability);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (coin(rng)) edges.emplace_back(u, v);
  ds.graph.adjacency = CsrAdjacency::from_pairs(n, edges);

  // Class means: scaled axis directions when there is room, random unit
  // directions otherwise.
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXd means = MatrixXd::Zero(static_cast<Eigen::Index>(classes), static_cast<Eigen::Index>(config.feature_dim));
  for (std::size_t c = 0; c < classes; ++c) {
    if (config.feature_dim >= classes) {
      means(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c)) = config.separation;
    } else {
      for (Eigen::Index k = 0; k < means.cols(); ++k) means(static_cast<Eigen::Index>(c), k) = gauss(rng);
      means.row(static_cast<Eigen::Index>(c)) *= config.separation / means.row(static_cast<Eigen::Index>(c)).norm();
    }
  }
  ds.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(config.feature_dim));
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t owner = u / std::max<std::size_t>(pool_size, 1);
    for (Eigen::Index k = 0; k < ds.features.cols(); ++k) {
      const double mean = owner < classes ? means(static_cast<Eigen::Index>(owner), k) : 0.0;
      ds.features(static_cast<Eigen::Index>(u), k) = mean + gauss(rng);
    }
  }

  ds.labels.kind = config.label_kind;
  ds.labels.num_classes = classes;
  std::vector<std::size_t> primary(config.num_subgraphs);
  std::uniform_int_distribution<std::size_t> pick_class(0, classes - 1);
  std::uniform_int_distribution<std::size_t> pick_size(config.min_size, config.max_size);
  std::bernoulli_distribution second(config.second_label_probability);
  for (std::size_t i = 0; i < config.num_subgraphs; ++i) {
    // Balanced primary classes, in a seeded order.
    primary[i] = i % classes;
  }
  std::shuffle(primary.begin(), primary.end(), rng);

  for (std::size_t i = 0; i < config.num_subgraphs; ++i) {
    std::vector<int> label_set{static_cast<int>(primary[i])};
    if (config.label_kind == LabelKind::Multi && classes > 1 && second(rng)) {
      std::size_t other = pick_class(rng);
      while (other == primary[i]) other = pick_class(rng);
      label_set.push_back(static_cast<int>(other));
      std::sort(label_set.begin(), label_set.end());
    }
    const std::size_t size = pick_size(rng);
    const auto own = static_cast<std::size_t>(std::ceil((1.0 - config.overlap) * static_cast<double>(size) - 1e-9));
    std::vector<NodeId> nodes;
    // Own-pool share is spread over the subgraph's classes.
    for (std::size_t k = 0; k < label_set.size(); ++k) {
      const std::size_t share = own / label_set.size() + (k < own % label_set.size() ? 1 : 0);
      draw_from(nodes, pools[static_cast<std::size_t>(label_set[k])], share, rng);
    }
    draw_from(nodes, everyone, size - nodes.size(), rng);
    std::sort(nodes.begin(), nodes.end());

    Subgraph s;
    s.node_ids = std::move(nodes);
    for (std::size_t a = 0; a < s.node_ids.size(); ++a)
      for (std::size_t b = a + 1; b < s.node_ids.size(); ++b)
        if (ds.graph.adjacency.has_edge(s.node_ids[a], s.node_ids[b]))
          s.internal_edges.emplace_back(s.node_ids[a], s.node_ids[b]);
    ds.subgraphs.push_back(std::move(s));
    if (config.label_kind == LabelKind::Single)
      ds.labels.single.push_back(label_set.front());
    else
      ds.labels.multi.push_back(std::move(label_set));
  }

  // Stratified by primary class.
  ds.split.assign(config.num_subgraphs, Split::Test);
  for (std::size_t c = 0; c < classes; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < config.num_subgraphs; ++i)
      if (primary[i] == c) members.push_back(i);
    std::shuffle(members.begin(), members.end(), rng);
    const auto total = static_cast<double>(members.size());
    const auto n_train = static_cast<std::size_t>(std::llround(config.train_fraction * total));
    const auto n_valid = static_cast<std::size_t>(std::llround(config.valid_fraction * total));
    for (std::size_t k = 0; k < members.size(); ++k)
      ds.split[members[k]] = k < n_train ? Split::Train : (k < n_train + n_valid ? Split::Valid : Split::Test);
  }
  return ds;
}

}  // namespace s2n
