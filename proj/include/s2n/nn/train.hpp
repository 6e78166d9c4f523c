#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "s2n/graph.hpp"
#include "s2n/nn/forward.hpp"
#include "s2n/nn/model.hpp"

namespace s2n::nn {

struct ModelConfig {
  EncoderKind encoder = EncoderKind::Gcn;
  Pool pool = Pool::Sum;
  std::size_t set_layers = 2;
  std::size_t graph_layers = 2;
  std::size_t hidden_dim = 32;

  bool operator==(const ModelConfig&) const = default;
};

struct TrainConfig {
  double learning_rate = 0.01;
  double weight_decay = 1e-7;  // [1e-9, 1e-6]
  double dropout = 0.0;        // channel dropout, {0.0, 0.1, ..., 0.5}
  double clip = 0.0;           // global gradient-norm clip, {0.0, ..., 0.5}; 0 = off
  std::size_t epochs = 200;
  std::uint64_t seed = 0;

  // Throws InvalidConfig when a value is outside its range.
  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double loss = 0.0;       // training loss before this epoch's update
  double valid_f1 = 0.0;   // micro-F1 on the validation split after the update

  bool operator==(const EpochRecord&) const = default;
};

using History = std::vector<EpochRecord>;

struct TrainResult {
  ModelBundle<double> model;
  History history;
};

ModelShape make_shape(const ModelConfig& config, const SubgraphDataset& dataset, std::size_t train_nodes);

// Full-batch gradient descent on the train-only coarse graph. Deterministic
// in config.seed.
TrainResult train(const SubgraphDataset& dataset, const ModelConfig& model_config, const TrainConfig& config);

// One optimizer step in place; returns the loss before the step.
double train_step(ModelBundle<double>& model, const GraphContext<double>& ctx, const LabelSet& labels,
                  const TrainConfig& config, std::size_t epoch);

struct MicroF1Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  // 2 TP / (2 TP + FP + FN); 0 when the denominator is 0.
  double f1() const noexcept;
};

MicroF1Counts micro_f1_counts(std::span<const int> predicted, std::span<const int> truth);
MicroF1Counts micro_f1_counts(const std::vector<std::vector<int>>& predicted,
                              const std::vector<std::vector<int>>& truth);

// Argmax per row (single-label) or classes with sigmoid > 0.5 (multi-label).
LabelSet predict(const MatrixXd& logits, LabelKind kind);

// Micro-F1 of the logits of rows [first_row, end) against `truth`.
double micro_f1(const MatrixXd& logits, std::size_t first_row, const LabelSet& truth);

// Rebuilds the stagewise graphs for `split` and scores the split's nodes.
double evaluate(const ModelBundle<double>& model, const SubgraphDataset& dataset, Split split);

}  // namespace s2n::nn
