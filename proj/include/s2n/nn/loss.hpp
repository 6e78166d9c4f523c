#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "s2n/graph.hpp"
#include "s2n/nn/layers.hpp"
#include "s2n/nn/model.hpp"

namespace s2n::nn {

template <typename Scalar>
struct LossResult {
  Scalar value = Scalar(0);
  Matrix<Scalar> grad;  // dL/dlogits
};

// Mean softmax cross-entropy over rows.
template <typename Scalar>
LossResult<Scalar> softmax_cross_entropy(const Matrix<Scalar>& logits, std::span<const int> labels) {
  require_shape(static_cast<std::size_t>(logits.rows()) == labels.size(), "logit rows vs labels");
  using std::exp;
  using std::log1p;
  const Index n = logits.rows();
  LossResult<Scalar> out;
  out.grad.resize(n, logits.cols());
  for (Index i = 0; i < n; ++i) {
    Index top = 0;
    const Scalar peak = logits.row(i).maxCoeff(&top);
    // log-sum-exp as peak + log1p(sum of the other terms) keeps tiny losses exact.
    Scalar rest(0);
    for (Index c = 0; c < logits.cols(); ++c)
      if (c != top) rest += exp(logits(i, c) - peak);
    const Scalar lse = peak + log1p(rest);
    const int y = labels[static_cast<std::size_t>(i)];
    require_shape(y >= 0 && y < logits.cols(), "label out of range");
    out.value += (peak - logits(i, y)) + log1p(rest);
    for (Index c = 0; c < logits.cols(); ++c) out.grad(i, c) = exp(logits(i, c) - lse);
    out.grad(i, y) -= Scalar(1);
  }
  out.value /= Scalar(n);
  out.grad /= Scalar(n);
  return out;
}

// Mean per-class sigmoid binary cross-entropy over all (row, class) pairs.
template <typename Scalar>
LossResult<Scalar> sigmoid_binary_cross_entropy(const Matrix<Scalar>& logits,
                                                const std::vector<std::vector<int>>& labels) {
  require_shape(static_cast<std::size_t>(logits.rows()) == labels.size(), "logit rows vs labels");
  using std::abs;
  using std::exp;
  using std::log1p;
  const Index n = logits.rows();
  const Index classes = logits.cols();
  Matrix<Scalar> target = Matrix<Scalar>::Zero(n, classes);
  for (Index i = 0; i < n; ++i)
    for (int c : labels[static_cast<std::size_t>(i)]) {
      require_shape(c >= 0 && c < classes, "label out of range");
      target(i, c) = Scalar(1);
    }
  LossResult<Scalar> out;
  out.grad.resize(n, classes);
  const Scalar count = Scalar(n * classes);
  for (Index i = 0; i < n; ++i)
    for (Index c = 0; c < classes; ++c) {
      const Scalar x = logits(i, c);
      const Scalar y = target(i, c);
      out.value += (x > Scalar(0) ? x : Scalar(0)) - x * y + log1p(exp(-abs(x)));
      const Scalar sig = x >= Scalar(0) ? Scalar(1) / (Scalar(1) + exp(-x)) : exp(x) / (Scalar(1) + exp(x));
      out.grad(i, c) = (sig - y) / count;
    }
  out.value /= count;
  return out;
}

// Dispatches on the label kind. `labels` covers the first labels.size() rows.
template <typename Scalar>
LossResult<Scalar> data_loss(const Matrix<Scalar>& logits, const LabelSet& labels) {
  require_shape(static_cast<std::size_t>(logits.rows()) >= labels.size(), "fewer logit rows than labels");
  const Matrix<Scalar> head = logits.topRows(static_cast<Index>(labels.size()));
  LossResult<Scalar> out = labels.kind == LabelKind::Single
                               ? softmax_cross_entropy<Scalar>(head, labels.single)
                               : sigmoid_binary_cross_entropy<Scalar>(head, labels.multi);
  if (out.grad.rows() != logits.rows()) {
    Matrix<Scalar> full = Matrix<Scalar>::Zero(logits.rows(), logits.cols());
    full.topRows(out.grad.rows()) = out.grad;
    out.grad = std::move(full);
  }
  return out;
}

// Data loss plus weight_decay * 0.5 * ||weights||^2.
template <typename Scalar>
Scalar loss(const Matrix<Scalar>& logits, const LabelSet& labels, const ModelBundle<Scalar>& params,
            Scalar weight_decay) {
  return data_loss(logits, labels).value + weight_decay * Scalar(0.5) * squared_weight_norm(params);
}

}  // namespace s2n::nn
