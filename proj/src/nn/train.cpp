#include "s2n/nn/train.hpp"

#include <algorithm>
#include <cmath>

#include "s2n/translate.hpp"

namespace s2n::nn {
namespace {

bool on_tenth_grid(double value, double max) {
  if (!(value >= 0.0 && value <= max + 1e-12)) return false;
  return std::abs(value * 10.0 - std::round(value * 10.0)) < 1e-9;
}

LabelSet rows_from(const LabelSet& labels, std::size_t first) {
  std::vector<std::size_t> idx;
  for (std::size_t i = first; i < labels.size(); ++i) idx.push_back(i);
  return labels.gather(idx);
}

}  // namespace

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (!std::isfinite(learning_rate) || learning_rate < 0.0) fail("learning rate must be finite and >= 0");
  if (weight_decay < 1e-9 * (1 - 1e-9) || weight_decay > 1e-6 * (1 + 1e-9)) fail("weight decay must lie in [1e-9, 1e-6]");
  if (!on_tenth_grid(dropout, 0.5)) fail("dropout must be one of 0.0, 0.1, ..., 0.5");
  if (!on_tenth_grid(clip, 0.5)) fail("clip must be one of 0.0, 0.1, ..., 0.5");
  if (epochs == 0) fail("epochs must be positive");
}

ModelShape make_shape(const ModelConfig& config, const SubgraphDataset& dataset, std::size_t train_nodes) {
  ModelShape shape;
  shape.encoder = config.encoder;
  shape.pool = config.pool;
  shape.set_layers = config.set_layers;
  shape.graph_layers = config.graph_layers;
  shape.input_dim = static_cast<std::size_t>(dataset.features.cols());
  shape.hidden_dim = config.hidden_dim;
  shape.num_classes = dataset.labels.num_classes;
  shape.label_kind = dataset.labels.kind;
  shape.train_nodes = config.encoder == EncoderKind::LinkxI ? train_nodes : 0;
  shape.validate();
  return shape;
}

double train_step(ModelBundle<double>& model, const GraphContext<double>& ctx, const LabelSet& labels,
                  const TrainConfig& config, std::size_t epoch) {
  const DropoutPlan plan{config.dropout, config.seed, epoch, true};
  ModelBundle<double> grad;
  const double value = loss_and_gradient(model, ctx, labels, config.weight_decay, plan, &grad);
  if (config.learning_rate == 0.0) return value;
  double scale = config.learning_rate;
  if (config.clip > 0.0) {
    const double norm = global_norm(grad);
    if (norm > config.clip) scale *= config.clip / norm;
  }
  axpy(model, -scale, grad);
  return value;
}

TrainResult train(const SubgraphDataset& dataset, const ModelConfig& model_config, const TrainConfig& config) {
  config.validate();
  const StagewiseGraphs graphs = build_stagewise(dataset, Split::Valid);
  const auto train_ctx = make_context<double>(graphs.train_graph, dataset.features);
  const auto eval_ctx = make_context<double>(graphs.eval_graph, dataset.features);
  const LabelSet train_labels = coarse_labels(graphs.train_graph, dataset.labels);
  const LabelSet valid_labels = rows_from(coarse_labels(graphs.eval_graph, dataset.labels), graphs.eval_graph.train_count);

  TrainResult result;
  result.model = initialize(make_shape(model_config, dataset, graphs.train_graph.num_nodes()), config.seed);
  result.history.reserve(config.epochs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    EpochRecord record;
    record.epoch = epoch;
    record.loss = train_step(result.model, train_ctx, train_labels, config, epoch);
    record.valid_f1 = micro_f1(forward(result.model, eval_ctx), graphs.eval_graph.train_count, valid_labels);
    result.history.push_back(record);
  }
  return result;
}

double MicroF1Counts::f1() const noexcept {
  const std::size_t denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

MicroF1Counts micro_f1_counts(std::span<const int> predicted, std::span<const int> truth) {
  require_shape(predicted.size() == truth.size(), "prediction count vs truth count");
  MicroF1Counts counts;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == truth[i]) {
      ++counts.tp;
    } else {
      ++counts.fp;
      ++counts.fn;
    }
  }
  return counts;
}

MicroF1Counts micro_f1_counts(const std::vector<std::vector<int>>& predicted,
                              const std::vector<std::vector<int>>& truth) {
  require_shape(predicted.size() == truth.size(), "prediction count vs truth count");
  MicroF1Counts counts;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto& p = predicted[i];
    const auto& t = truth[i];
    for (int c : p) {
      if (std::find(t.begin(), t.end(), c) != t.end())
        ++counts.tp;
      else
        ++counts.fp;
    }
    for (int c : t)
      if (std::find(p.begin(), p.end(), c) == p.end()) ++counts.fn;
  }
  return counts;
}

LabelSet predict(const MatrixXd& logits, LabelKind kind) {
  LabelSet out;
  out.kind = kind;
  out.num_classes = static_cast<std::size_t>(logits.cols());
  for (Index i = 0; i < logits.rows(); ++i) {
    if (kind == LabelKind::Single) {
      Index best = 0;
      logits.row(i).maxCoeff(&best);
      out.single.push_back(static_cast<int>(best));
    } else {
      std::vector<int> set;
      for (Index c = 0; c < logits.cols(); ++c)
        if (logits(i, c) > 0.0) set.push_back(static_cast<int>(c));
      out.multi.push_back(std::move(set));
    }
  }
  return out;
}

double micro_f1(const MatrixXd& logits, std::size_t first_row, const LabelSet& truth) {
  require_shape(static_cast<std::size_t>(logits.rows()) == first_row + truth.size(), "logit rows vs scored rows");
  const LabelSet predicted =
      predict(logits.bottomRows(static_cast<Index>(truth.size())), truth.kind);
  const MicroF1Counts counts = truth.kind == LabelKind::Single ? micro_f1_counts(predicted.single, truth.single)
                                                                : micro_f1_counts(predicted.multi, truth.multi);
  return counts.f1();
}

double evaluate(const ModelBundle<double>& model, const SubgraphDataset& dataset, Split split) {
  const StagewiseGraphs graphs = build_stagewise(dataset, split);
  if (model.shape.encoder == EncoderKind::LinkxI && model.shape.train_nodes != graphs.train_graph.num_nodes())
    throw Error(ErrorCode::ShapeMismatch, "model was trained for a different number of train subgraphs");
  if (model.shape.input_dim != static_cast<std::size_t>(dataset.features.cols()))
    throw Error(ErrorCode::ShapeMismatch, "feature width differs from the model input width");
  const auto ctx = make_context<double>(graphs.eval_graph, dataset.features);
  const LabelSet truth = rows_from(coarse_labels(graphs.eval_graph, dataset.labels), graphs.eval_graph.train_count);
  return micro_f1(forward(model, ctx), graphs.eval_graph.train_count, truth);
}

}  // namespace s2n::nn
