#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "s2n/graph.hpp"
#include "s2n/nn/layers.hpp"
#include "s2n/nn/loss.hpp"
#include "s2n/nn/model.hpp"
#include "s2n/translate.hpp"

namespace s2n::nn {

// Everything the model needs from one coarse graph, prepared once.
template <typename Scalar>
struct GraphContext {
  std::size_t num_nodes = 0;
  std::size_t train_prefix = 0;
  CsrAdjacency adjacency;
  // Features of every global node that appears in some member set, one row
  // per distinct node, ascending by node id.
  Matrix<Scalar> member_features;
  SetIndex sets;
  SparseMatrix<Scalar> propagation;      // GCN
  SparseMatrix<Scalar> train_neighbors;  // LINKX-I
};

template <typename Scalar>
GraphContext<Scalar> make_context(const S2NGraph& graph, const FeatureMatrix& features) {
  GraphContext<Scalar> ctx;
  ctx.num_nodes = graph.num_nodes();
  ctx.train_prefix = graph.train_count;
  ctx.adjacency = graph.adjacency;
  std::vector<NodeId> used;
  for (const auto& m : graph.members) used.insert(used.end(), m.begin(), m.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  ctx.member_features.resize(static_cast<Index>(used.size()), features.cols());
  for (std::size_t r = 0; r < used.size(); ++r) {
    require_shape(used[r] < static_cast<std::size_t>(features.rows()), "member id outside feature rows");
    ctx.member_features.row(static_cast<Index>(r)) = features.row(used[r]).template cast<Scalar>();
  }
  ctx.sets.resize(graph.num_nodes());
  for (std::size_t i = 0; i < graph.num_nodes(); ++i)
    for (NodeId u : graph.members[i])
      ctx.sets[i].push_back(std::lower_bound(used.begin(), used.end(), u) - used.begin());
  ctx.propagation = gcn_propagation<Scalar>(graph.adjacency);
  ctx.train_neighbors = train_neighbor_matrix<Scalar>(graph.adjacency, graph.train_count);
  return ctx;
}

template <typename Scalar>
struct SetTrace {
  std::vector<Matrix<Scalar>> phi_in, phi_pre;
  ArgmaxTable argmax;
  std::vector<Matrix<Scalar>> rho_in, rho_pre;
};

template <typename Scalar>
Matrix<Scalar> set_encoder_forward(const DeepSetsParams<Scalar>& p, Pool pool, const Matrix<Scalar>& member_features,
                                   const SetIndex& sets, SetTrace<Scalar>* trace = nullptr) {
  Matrix<Scalar> a = member_features;
  for (const auto& layer : p.phi) {
    Matrix<Scalar> pre = dense_forward(layer, a);
    if (trace) {
      trace->phi_in.push_back(std::move(a));
      trace->phi_pre.push_back(pre);
    }
    a = relu(pre);
  }
  ArgmaxTable argmax;
  Matrix<Scalar> b = pool_forward(a, sets, pool, &argmax);
  if (trace) trace->argmax = std::move(argmax);
  for (std::size_t l = 0; l < p.rho.size(); ++l) {
    Matrix<Scalar> pre = dense_forward(p.rho[l], b);
    if (trace) {
      trace->rho_in.push_back(std::move(b));
      trace->rho_pre.push_back(pre);
    }
    b = l + 1 < p.rho.size() ? relu(pre) : std::move(pre);
  }
  return b;
}

template <typename Scalar>
void set_encoder_backward(const DeepSetsParams<Scalar>& p, Pool pool, const SetIndex& sets,
                          const SetTrace<Scalar>& trace, Matrix<Scalar> grad, DeepSetsParams<Scalar>& out) {
  for (std::size_t l = p.rho.size(); l-- > 0;) {
    if (l + 1 < p.rho.size()) grad = relu_backward(trace.rho_pre[l], grad);
    grad = dense_backward(p.rho[l], trace.rho_in[l], grad, out.rho[l]);
  }
  const Index member_rows = trace.phi_pre.back().rows();
  grad = pool_backward(grad, sets, pool, trace.argmax, member_rows);
  for (std::size_t l = p.phi.size(); l-- > 0;) {
    grad = relu_backward(trace.phi_pre[l], grad);
    grad = dense_backward(p.phi[l], trace.phi_in[l], grad, out.phi[l]);
  }
}

// Representation of one member set: rho(pool(phi(x_u))).
template <typename Scalar>
RowVector<Scalar> deepsets_forward(std::span<const NodeId> members, const FeatureMatrix& features,
                                   const DeepSetsParams<Scalar>& p, Pool pool) {
  if (members.empty()) throw Error(ErrorCode::EmptyMemberSet, "set encoder got an empty member set");
  Matrix<Scalar> rows(static_cast<Index>(members.size()), features.cols());
  SetIndex sets(1);
  for (std::size_t i = 0; i < members.size(); ++i) {
    require_shape(members[i] < static_cast<std::size_t>(features.rows()), "member id outside feature rows");
    rows.row(static_cast<Index>(i)) = features.row(members[i]).template cast<Scalar>();
    sets[0].push_back(static_cast<Index>(i));
  }
  return set_encoder_forward(p, pool, rows, sets);
}

template <typename Scalar>
struct GcnTrace {
  std::vector<Matrix<Scalar>> masks, inputs, pre;
};

template <typename Scalar>
Matrix<Scalar> gcn_encoder_forward(const GcnParams<Scalar>& p, const SparseMatrix<Scalar>& propagation,
                                   const Matrix<Scalar>& h_in, const DropoutPlan& plan,
                                   GcnTrace<Scalar>* trace = nullptr) {
  require_shape(h_in.rows() == propagation.rows(), "representation rows vs graph nodes");
  Matrix<Scalar> mask = dropout_mask<Scalar>(h_in.rows(), h_in.cols(), plan, 0);
  Matrix<Scalar> h = h_in.cwiseProduct(mask);
  if (trace) trace->masks.push_back(std::move(mask));
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    require_shape(h.cols() == p.layers[l].in_dim(), "gcn layer input width");
    Matrix<Scalar> pre = propagation * (h * p.layers[l].weight);
    pre.rowwise() += p.layers[l].bias.row(0);
    if (trace) {
      trace->inputs.push_back(std::move(h));
      trace->pre.push_back(pre);
    }
    if (l + 1 == p.layers.size()) return pre;
    mask = dropout_mask<Scalar>(pre.rows(), pre.cols(), plan, l + 1);
    h = relu(pre).cwiseProduct(mask);
    if (trace) trace->masks.push_back(std::move(mask));
  }
  return h;
}

template <typename Scalar>
Matrix<Scalar> gcn_encoder_backward(const GcnParams<Scalar>& p, const SparseMatrix<Scalar>& propagation,
                                    const GcnTrace<Scalar>& trace, Matrix<Scalar> grad, GcnParams<Scalar>& out) {
  for (std::size_t l = p.layers.size(); l-- > 0;) {
    out.layers[l].bias += grad.colwise().sum();
    const Matrix<Scalar> grad_xw = propagation.transpose() * grad;
    out.layers[l].weight.noalias() += trace.inputs[l].transpose() * grad_xw;
    Matrix<Scalar> grad_h = grad_xw * p.layers[l].weight.transpose();
    grad_h = grad_h.cwiseProduct(trace.masks[l]);
    grad = l > 0 ? relu_backward(trace.pre[l - 1], grad_h) : std::move(grad_h);
  }
  return grad;
}

// Symmetric-normalized GCN over the coarse graph; self-loops are added here.
template <typename Scalar>
Matrix<Scalar> gcn_forward(const Matrix<Scalar>& h, const CsrAdjacency& adjacency, const GcnParams<Scalar>& p,
                           const DropoutPlan& plan = {}) {
  require_shape(static_cast<std::size_t>(h.rows()) == adjacency.num_nodes(), "representation rows vs graph nodes");
  return gcn_encoder_forward(p, gcn_propagation<Scalar>(adjacency), h, plan);
}

template <typename Scalar>
struct LinkxTrace {
  Matrix<Scalar> input_mask, input, adj_out, feat_out, concat, combined;
  std::vector<Matrix<Scalar>> head_masks, head_in, head_pre;
};

template <typename Scalar>
Matrix<Scalar> linkx_encoder_forward(const LinkxParams<Scalar>& p, const SparseMatrix<Scalar>& train_neighbors,
                                     const Matrix<Scalar>& h_in, const DropoutPlan& plan,
                                     LinkxTrace<Scalar>* trace = nullptr) {
  require_shape(h_in.rows() == train_neighbors.rows(), "representation rows vs graph nodes");
  require_shape(p.adj_weight.rows() == train_neighbors.cols(), "adjacency weight rows vs train prefix");
  const Index f = p.adj_weight.cols();
  Matrix<Scalar> mask = dropout_mask<Scalar>(h_in.rows(), h_in.cols(), plan, 0);
  Matrix<Scalar> h = h_in.cwiseProduct(mask);
  Matrix<Scalar> adj_out = train_neighbors * p.adj_weight;
  adj_out.rowwise() += p.adj_bias.row(0);
  Matrix<Scalar> feat_out = dense_forward(p.feature_layer, h);
  Matrix<Scalar> concat(h.rows(), 2 * f);
  concat << adj_out, feat_out;
  Matrix<Scalar> combined = concat * p.combine_weight.transpose() + adj_out + feat_out;
  combined.rowwise() += p.combine_bias.row(0);
  Matrix<Scalar> a = relu(combined);
  if (trace) {
    trace->input_mask = std::move(mask);
    trace->input = std::move(h);
    trace->adj_out = std::move(adj_out);
    trace->feat_out = std::move(feat_out);
    trace->concat = std::move(concat);
    trace->combined = std::move(combined);
  }
  for (std::size_t l = 0; l < p.head.size(); ++l) {
    Matrix<Scalar> head_mask = dropout_mask<Scalar>(a.rows(), a.cols(), plan, l + 1);
    a = a.cwiseProduct(head_mask);
    Matrix<Scalar> pre = dense_forward(p.head[l], a);
    if (trace) {
      trace->head_masks.push_back(std::move(head_mask));
      trace->head_in.push_back(std::move(a));
      trace->head_pre.push_back(pre);
    }
    a = l + 1 < p.head.size() ? relu(pre) : std::move(pre);
  }
  return a;
}

template <typename Scalar>
Matrix<Scalar> linkx_encoder_backward(const LinkxParams<Scalar>& p, const SparseMatrix<Scalar>& train_neighbors,
                                      const LinkxTrace<Scalar>& trace, Matrix<Scalar> grad,
                                      LinkxParams<Scalar>& out) {
  for (std::size_t l = p.head.size(); l-- > 0;) {
    grad = dense_backward(p.head[l], trace.head_in[l], grad, out.head[l]);
    grad = grad.cwiseProduct(trace.head_masks[l]);
    grad = l > 0 ? relu_backward(trace.head_pre[l - 1], grad) : relu_backward(trace.combined, grad);
  }
  const Index f = p.adj_weight.cols();
  out.combine_bias += grad.colwise().sum();
  out.combine_weight.noalias() += grad.transpose() * trace.concat;
  const Matrix<Scalar> grad_concat = grad * p.combine_weight;
  const Matrix<Scalar> grad_adj = grad_concat.leftCols(f) + grad;
  const Matrix<Scalar> grad_feat = grad_concat.rightCols(f) + grad;
  out.adj_weight.noalias() += train_neighbors.transpose() * grad_adj;
  out.adj_bias += grad_adj.colwise().sum();
  Matrix<Scalar> grad_h = dense_backward(p.feature_layer, trace.input, grad_feat, out.feature_layer);
  return grad_h.cwiseProduct(trace.input_mask);
}

// LINKX-I over a coarse graph whose first `train_prefix` nodes are the nodes
// the adjacency weights were trained for.
template <typename Scalar>
Matrix<Scalar> linkxi_forward(const Matrix<Scalar>& h, const CsrAdjacency& adjacency, std::size_t train_prefix,
                              const LinkxParams<Scalar>& p, const DropoutPlan& plan = {}) {
  require_shape(static_cast<std::size_t>(h.rows()) == adjacency.num_nodes(), "representation rows vs graph nodes");
  require_shape(static_cast<std::size_t>(p.adj_weight.rows()) == train_prefix,
                "adjacency weight rows must equal the train prefix");
  return linkx_encoder_forward(p, train_neighbor_matrix<Scalar>(adjacency, train_prefix), h, plan);
}

template <typename Scalar>
struct ForwardTrace {
  SetTrace<Scalar> set;
  GcnTrace<Scalar> gcn;
  LinkxTrace<Scalar> linkx;
};

// Logits for every coarse node of the context.
template <typename Scalar>
Matrix<Scalar> forward(const ModelBundle<Scalar>& model, const GraphContext<Scalar>& ctx, const DropoutPlan& plan = {},
                       ForwardTrace<Scalar>* trace = nullptr) {
  const Matrix<Scalar> h = set_encoder_forward(model.set_encoder, model.shape.pool, ctx.member_features, ctx.sets,
                                               trace ? &trace->set : nullptr);
  if (const auto* gcn = std::get_if<GcnParams<Scalar>>(&model.graph_encoder))
    return gcn_encoder_forward(*gcn, ctx.propagation, h, plan, trace ? &trace->gcn : nullptr);
  const auto& linkx = std::get<LinkxParams<Scalar>>(model.graph_encoder);
  return linkx_encoder_forward(linkx, ctx.train_neighbors, h, plan, trace ? &trace->linkx : nullptr);
}

// grad += weight_decay * W for every weight matrix; biases untouched.
template <typename Scalar>
void add_weight_decay(ModelBundle<Scalar>& grad, const ModelBundle<Scalar>& model, Scalar weight_decay) {
  if (weight_decay == Scalar(0)) return;
  std::vector<const Matrix<Scalar>*> weights;
  for_each_param(model, [&](const std::string&, const Matrix<Scalar>& m, bool) { weights.push_back(&m); });
  std::size_t i = 0;
  for_each_param(grad, [&](const std::string&, Matrix<Scalar>& g, bool is_weight) {
    if (is_weight) g += weight_decay * *weights[i];
    ++i;
  });
}

// Loss on the first labels.size() nodes plus weight decay. When `grad` is
// given it is overwritten with the gradient of that loss.
template <typename Scalar>
Scalar loss_and_gradient(const ModelBundle<Scalar>& model, const GraphContext<Scalar>& ctx, const LabelSet& labels,
                         Scalar weight_decay, const DropoutPlan& plan, ModelBundle<Scalar>* grad) {
  ForwardTrace<Scalar> trace;
  const Matrix<Scalar> logits = forward(model, ctx, plan, grad ? &trace : nullptr);
  LossResult<Scalar> data = data_loss(logits, labels);
  const Scalar total = data.value + weight_decay * Scalar(0.5) * squared_weight_norm(model);
  if (!grad) return total;

  *grad = zeros_like(model);
  Matrix<Scalar> grad_h;
  if (const auto* gcn = std::get_if<GcnParams<Scalar>>(&model.graph_encoder)) {
    grad_h = gcn_encoder_backward(*gcn, ctx.propagation, trace.gcn, std::move(data.grad),
                                  std::get<GcnParams<Scalar>>(grad->graph_encoder));
  } else {
    grad_h = linkx_encoder_backward(std::get<LinkxParams<Scalar>>(model.graph_encoder), ctx.train_neighbors,
                                    trace.linkx, std::move(data.grad),
                                    std::get<LinkxParams<Scalar>>(grad->graph_encoder));
  }
  set_encoder_backward(model.set_encoder, model.shape.pool, ctx.sets, trace.set, std::move(grad_h),
                       grad->set_encoder);
  add_weight_decay(*grad, model, weight_decay);
  return total;
}

}  // namespace s2n::nn
