#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "s2n/graph.hpp"
#include "s2n/nn/layers.hpp"

namespace s2n::nn {

enum class EncoderKind { Gcn, LinkxI };

std::string_view to_string(EncoderKind kind);
std::string_view to_string(Pool pool);
EncoderKind parse_encoder(std::string_view text);
Pool parse_pool(std::string_view text);

// Architecture choices; everything needed to allocate parameters.
struct ModelShape {
  EncoderKind encoder = EncoderKind::Gcn;
  Pool pool = Pool::Sum;
  std::size_t set_layers = 2;    // 2 or 4, split evenly between phi and rho
  std::size_t graph_layers = 2;  // 1 or 2
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 32;
  std::size_t num_classes = 0;
  LabelKind label_kind = LabelKind::Single;
  // LINKX-I only: rows of the adjacency weight matrix.
  std::size_t train_nodes = 0;

  void validate() const;
  bool operator==(const ModelShape&) const = default;
};

// rho(pool(phi(x_u))). phi layers are each followed by ReLU; rho layers are
// separated by ReLU and the last one is linear.
template <typename Scalar>
struct DeepSetsParams {
  std::vector<Dense<Scalar>> phi;
  std::vector<Dense<Scalar>> rho;
};

// Layer l computes P (h W_l) + b_l with P the normalized propagation matrix.
template <typename Scalar>
struct GcnParams {
  std::vector<Dense<Scalar>> layers;
};

// H_A = A (*) W_A + b_A, H_X = H W_X + b_X,
// logits = head(ReLU([H_A | H_X] W_f^T + b_f + H_A + H_X)).
template <typename Scalar>
struct LinkxParams {
  Matrix<Scalar> adj_weight;      // train_nodes x F
  Matrix<Scalar> adj_bias;        // 1 x F
  Dense<Scalar> feature_layer;    // F -> F
  Matrix<Scalar> combine_weight;  // F x 2F
  Matrix<Scalar> combine_bias;    // 1 x F
  std::vector<Dense<Scalar>> head;
};

template <typename Scalar>
struct ModelBundle {
  ModelShape shape;
  DeepSetsParams<Scalar> set_encoder;
  std::variant<GcnParams<Scalar>, LinkxParams<Scalar>> graph_encoder;
};

// Visits every parameter tensor as f(name, matrix, is_weight). Biases report
// is_weight = false and are excluded from weight decay. Order is fixed.
template <typename Bundle, typename F>
void for_each_param(Bundle& bundle, F&& f) {
  auto dense = [&](const std::string& prefix, auto& layer) {
    f(prefix + ".weight", layer.weight, true);
    f(prefix + ".bias", layer.bias, false);
  };
  for (std::size_t i = 0; i < bundle.set_encoder.phi.size(); ++i)
    dense("set.phi" + std::to_string(i), bundle.set_encoder.phi[i]);
  for (std::size_t i = 0; i < bundle.set_encoder.rho.size(); ++i)
    dense("set.rho" + std::to_string(i), bundle.set_encoder.rho[i]);
  std::visit(
      [&](auto& enc) {
        if constexpr (requires { enc.layers; }) {
          for (std::size_t i = 0; i < enc.layers.size(); ++i) dense("gcn" + std::to_string(i), enc.layers[i]);
        } else {
          f(std::string("linkx.adj.weight"), enc.adj_weight, true);
          f(std::string("linkx.adj.bias"), enc.adj_bias, false);
          dense("linkx.feature", enc.feature_layer);
          f(std::string("linkx.combine.weight"), enc.combine_weight, true);
          f(std::string("linkx.combine.bias"), enc.combine_bias, false);
          for (std::size_t i = 0; i < enc.head.size(); ++i) dense("linkx.head" + std::to_string(i), enc.head[i]);
        }
      },
      bundle.graph_encoder);
}

template <typename Scalar>
std::size_t param_count(const ModelBundle<Scalar>& bundle) {
  std::size_t total = 0;
  for_each_param(bundle, [&](const std::string&, const auto& m, bool) { total += static_cast<std::size_t>(m.size()); });
  return total;
}

// Same structure as the shape would allocate, every entry zero.
template <typename Scalar>
ModelBundle<Scalar> allocate(const ModelShape& shape) {
  shape.validate();
  const auto dense = [](std::size_t in, std::size_t out) {
    return Dense<Scalar>{Matrix<Scalar>::Zero(static_cast<Index>(in), static_cast<Index>(out)),
                         Matrix<Scalar>::Zero(1, static_cast<Index>(out))};
  };
  const std::size_t f = shape.hidden_dim;
  ModelBundle<Scalar> bundle;
  bundle.shape = shape;
  const std::size_t half = shape.set_layers / 2;
  for (std::size_t i = 0; i < half; ++i) bundle.set_encoder.phi.push_back(dense(i == 0 ? shape.input_dim : f, f));
  for (std::size_t i = 0; i < half; ++i) bundle.set_encoder.rho.push_back(dense(f, f));
  if (shape.encoder == EncoderKind::Gcn) {
    GcnParams<Scalar> gcn;
    for (std::size_t i = 0; i < shape.graph_layers; ++i)
      gcn.layers.push_back(dense(f, i + 1 == shape.graph_layers ? shape.num_classes : f));
    bundle.graph_encoder = std::move(gcn);
  } else {
    LinkxParams<Scalar> linkx;
    linkx.adj_weight = Matrix<Scalar>::Zero(static_cast<Index>(shape.train_nodes), static_cast<Index>(f));
    linkx.adj_bias = Matrix<Scalar>::Zero(1, static_cast<Index>(f));
    linkx.feature_layer = dense(f, f);
    linkx.combine_weight = Matrix<Scalar>::Zero(static_cast<Index>(f), static_cast<Index>(2 * f));
    linkx.combine_bias = Matrix<Scalar>::Zero(1, static_cast<Index>(f));
    for (std::size_t i = 0; i < shape.graph_layers; ++i)
      linkx.head.push_back(dense(f, i + 1 == shape.graph_layers ? shape.num_classes : f));
    bundle.graph_encoder = std::move(linkx);
  }
  return bundle;
}

template <typename Scalar>
ModelBundle<Scalar> zeros_like(const ModelBundle<Scalar>& bundle) {
  return allocate<Scalar>(bundle.shape);
}

// Glorot-uniform weights and zero biases, deterministic in the seed.
ModelBundle<double> initialize(const ModelShape& shape, std::uint64_t seed);

template <typename To, typename From>
ModelBundle<To> cast(const ModelBundle<From>& bundle) {
  ModelBundle<To> out = allocate<To>(bundle.shape);
  std::vector<const Matrix<From>*> src;
  for_each_param(bundle, [&](const std::string&, const Matrix<From>& m, bool) { src.push_back(&m); });
  std::size_t i = 0;
  for_each_param(out, [&](const std::string&, Matrix<To>& m, bool) { m = src[i++]->template cast<To>(); });
  return out;
}

// Sum of squared entries of every weight matrix (biases excluded).
template <typename Scalar>
Scalar squared_weight_norm(const ModelBundle<Scalar>& bundle) {
  Scalar total(0);
  for_each_param(bundle, [&](const std::string&, const Matrix<Scalar>& m, bool is_weight) {
    if (is_weight) total += m.squaredNorm();
  });
  return total;
}

// a += scale * b over every parameter.
template <typename Scalar>
void axpy(ModelBundle<Scalar>& a, Scalar scale, const ModelBundle<Scalar>& b) {
  std::vector<const Matrix<Scalar>*> rhs;
  for_each_param(b, [&](const std::string&, const Matrix<Scalar>& m, bool) { rhs.push_back(&m); });
  std::size_t i = 0;
  for_each_param(a, [&](const std::string&, Matrix<Scalar>& m, bool) { m += scale * *rhs[i++]; });
}

template <typename Scalar>
Scalar global_norm(const ModelBundle<Scalar>& bundle) {
  Scalar total(0);
  for_each_param(bundle, [&](const std::string&, const Matrix<Scalar>& m, bool) { total += m.squaredNorm(); });
  return std::sqrt(total);
}

}  // namespace s2n::nn
