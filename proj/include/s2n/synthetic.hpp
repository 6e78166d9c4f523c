#pragma once

#include <cstdint>
#include <string_view>

#include "s2n/graph.hpp"

namespace s2n {

struct SynthConfig {
  std::size_t num_nodes = 400;
  std::size_t num_classes = 4;
  std::size_t num_subgraphs = 200;
  std::size_t min_size = 5;
  std::size_t max_size = 12;
  // Fraction of each subgraph's nodes that may come from outside its class
  // pool. 0 keeps classes on disjoint node pools; 1 ignores the pools.
  double overlap = 0.0;
  double edge_probability = 0.02;
  std::size_t feature_dim = 8;
  double separation = 5.0;
  LabelKind label_kind = LabelKind::Single;
  // Multi-label only: probability that a subgraph carries a second class.
  double second_label_probability = 0.5;
  double train_fraction = 0.8;
  double valid_fraction = 0.1;
};

// Named configurations: "separable", "hard", "multilabel".
SynthConfig synth_preset(std::string_view name);

// Deterministic in (config, seed).
SubgraphDataset generate_synthetic(const SynthConfig& config, std::uint64_t seed);

}  // namespace s2n
