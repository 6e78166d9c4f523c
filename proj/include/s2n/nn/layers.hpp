#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "s2n/error.hpp"
#include "s2n/types.hpp"

namespace s2n::nn {

using Index = Eigen::Index;

template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

// y = x W + b, with b stored as a 1 x out matrix.
template <typename Scalar>
struct Dense {
  Matrix<Scalar> weight;
  Matrix<Scalar> bias;

  Index in_dim() const { return weight.rows(); }
  Index out_dim() const { return weight.cols(); }
};

inline void require_shape(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::ShapeMismatch, what);
}

template <typename Scalar, typename Derived>
Matrix<Scalar> dense_forward(const Dense<Scalar>& layer, const Eigen::MatrixBase<Derived>& x) {
  require_shape(x.cols() == layer.in_dim(), "dense layer input width");
  Matrix<Scalar> y = x * layer.weight;
  y.rowwise() += layer.bias.row(0);
  return y;
}

// Accumulates into `grad` and returns dL/dx.
template <typename Scalar>
Matrix<Scalar> dense_backward(const Dense<Scalar>& layer, const Matrix<Scalar>& input,
                              const Matrix<Scalar>& grad_out, Dense<Scalar>& grad) {
  grad.weight.noalias() += input.transpose() * grad_out;
  grad.bias += grad_out.colwise().sum();
  return grad_out * layer.weight.transpose();
}

template <typename Scalar>
Matrix<Scalar> relu(const Matrix<Scalar>& x) {
  return x.cwiseMax(Scalar(0));
}

// Gradient of ReLU at `pre`; zero at the kink.
template <typename Scalar>
Matrix<Scalar> relu_backward(const Matrix<Scalar>& pre, const Matrix<Scalar>& grad_out) {
  return (pre.array() > Scalar(0)).select(grad_out, Scalar(0));
}

// Counter-based uniform in [0, 1), keyed by (seed, epoch, layer, element).
double keyed_uniform(std::uint64_t seed, std::uint64_t epoch, std::uint64_t layer,
                     std::uint64_t element);

// Inverted-dropout schedule. Masks are a pure function of the key, so the
// same step always drops the same channels.
struct DropoutPlan {
  double rate = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  bool training = false;

  bool active() const noexcept { return training && rate > 0.0; }
};

// Entries are 0 or 1/(1-rate). All ones when the plan is inactive.
template <typename Scalar>
Matrix<Scalar> dropout_mask(Index rows, Index cols, const DropoutPlan& plan, std::uint64_t layer) {
  Matrix<Scalar> mask = Matrix<Scalar>::Ones(rows, cols);
  if (!plan.active()) return mask;
  const Scalar keep = Scalar(1) / Scalar(1.0 - plan.rate);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      const auto element = static_cast<std::uint64_t>(r * cols + c);
      mask(r, c) = keyed_uniform(plan.seed, plan.epoch, layer, element) < plan.rate ? Scalar(0) : keep;
    }
  return mask;
}

enum class Pool { Sum, Max };

// Rows of the member matrix that belong to each set, in ascending node order.
using SetIndex = std::vector<std::vector<Index>>;

using ArgmaxTable = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic>;

// Pools member rows into one row per set. For Max, `argmax` receives the
// winning member row per (set, channel); ties go to the first member.
template <typename Scalar>
Matrix<Scalar> pool_forward(const Matrix<Scalar>& members, const SetIndex& sets, Pool pool,
                            ArgmaxTable* argmax = nullptr) {
  const Index n = static_cast<Index>(sets.size());
  Matrix<Scalar> out = Matrix<Scalar>::Zero(n, members.cols());
  if (pool == Pool::Max && argmax != nullptr) argmax->resize(n, members.cols());
  for (Index i = 0; i < n; ++i) {
    const auto& rows = sets[static_cast<std::size_t>(i)];
    if (rows.empty()) throw Error(ErrorCode::EmptyMemberSet, "set encoder got an empty member set");
    if (pool == Pool::Sum) {
      for (Index r : rows) out.row(i) += members.row(r);
      continue;
    }
    for (Index c = 0; c < members.cols(); ++c) {
      Index best = rows.front();
      for (Index r : rows)
        if (members(r, c) > members(best, c)) best = r;
      out(i, c) = members(best, c);
      if (argmax != nullptr) (*argmax)(i, c) = best;
    }
  }
  return out;
}

template <typename Scalar>
Matrix<Scalar> pool_backward(const Matrix<Scalar>& grad_out, const SetIndex& sets, Pool pool,
                             const ArgmaxTable& argmax, Index member_rows) {
  Matrix<Scalar> grad = Matrix<Scalar>::Zero(member_rows, grad_out.cols());
  for (Index i = 0; i < grad_out.rows(); ++i) {
    if (pool == Pool::Sum) {
      for (Index r : sets[static_cast<std::size_t>(i)]) grad.row(r) += grad_out.row(i);
    } else {
      for (Index c = 0; c < grad_out.cols(); ++c) grad(argmax(i, c), c) += grad_out(i, c);
    }
  }
  return grad;
}

// D^{-1/2} (A + I) D^{-1/2} with D the row degree of A + I.
template <typename Scalar>
SparseMatrix<Scalar> gcn_propagation(const CsrAdjacency& adjacency) {
  const std::size_t n = adjacency.num_nodes();
  std::vector<Scalar> inv_sqrt(n);
  for (std::size_t u = 0; u < n; ++u)
    inv_sqrt[u] = Scalar(1) / std::sqrt(Scalar(adjacency.degree(u) + 1));
  std::vector<Eigen::Triplet<Scalar>> entries;
  entries.reserve(adjacency.num_directed_edges() + n);
  for (std::size_t u = 0; u < n; ++u) {
    entries.emplace_back(u, u, inv_sqrt[u] * inv_sqrt[u]);
    for (NodeId v : adjacency.neighbors_of(u)) entries.emplace_back(u, v, inv_sqrt[u] * inv_sqrt[v]);
  }
  SparseMatrix<Scalar> out(static_cast<Index>(n), static_cast<Index>(n));
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

// Binary adjacency restricted to columns [0, train_prefix): row i selects the
// training neighbors of node i.
template <typename Scalar>
SparseMatrix<Scalar> train_neighbor_matrix(const CsrAdjacency& adjacency, std::size_t train_prefix) {
  const std::size_t n = adjacency.num_nodes();
  require_shape(train_prefix <= n, "train prefix exceeds node count");
  std::vector<Eigen::Triplet<Scalar>> entries;
  for (std::size_t u = 0; u < n; ++u)
    for (NodeId v : adjacency.neighbors_of(u)) {
      if (v >= train_prefix) break;
      entries.emplace_back(u, v, Scalar(1));
    }
  SparseMatrix<Scalar> out(static_cast<Index>(n), static_cast<Index>(train_prefix));
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

// out[i, k] = sum of adj_weight[j, k] over neighbors j of i with j < train_prefix.
// The same weights therefore apply to a train-only graph and to a larger
// graph that appends evaluation nodes after the train prefix.
template <typename Scalar>
Matrix<Scalar> masked_adj_multiply(const CsrAdjacency& adjacency, const Matrix<Scalar>& adj_weight,
                                   std::size_t train_prefix) {
  require_shape(static_cast<std::size_t>(adj_weight.rows()) == train_prefix,
                "adjacency weight rows must equal the train prefix");
  require_shape(adjacency.num_nodes() >= train_prefix, "train prefix exceeds node count");
  Matrix<Scalar> out = Matrix<Scalar>::Zero(static_cast<Index>(adjacency.num_nodes()), adj_weight.cols());
  for (std::size_t i = 0; i < adjacency.num_nodes(); ++i)
    for (NodeId j : adjacency.neighbors_of(i)) {
      if (j >= train_prefix) break;
      out.row(static_cast<Index>(i)) += adj_weight.row(j);
    }
  return out;
}

}  // namespace s2n::nn
