#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace s2n {

using NodeId = std::uint32_t;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using MatrixXd = Matrix<double>;

// Undirected adjacency in CSR form. Both orientations of every edge are
// stored; neighbor lists are sorted ascending without duplicates.
struct CsrAdjacency {
  std::vector<std::size_t> offsets{0};
  std::vector<NodeId> neighbors;

  std::size_t num_nodes() const noexcept { return offsets.size() - 1; }
  std::size_t num_directed_edges() const noexcept { return neighbors.size(); }
  std::size_t num_undirected_edges() const noexcept { return neighbors.size() / 2; }

  std::span<const NodeId> neighbors_of(std::size_t u) const noexcept {
    return {neighbors.data() + offsets[u], offsets[u + 1] - offsets[u]};
  }
  std::size_t degree(std::size_t u) const noexcept { return offsets[u + 1] - offsets[u]; }

  bool has_edge(std::size_t u, std::size_t v) const;

  // Builds from a list of undirected pairs (any orientation). Pairs must be
  // free of self-loops; duplicates are collapsed.
  static CsrAdjacency from_pairs(std::size_t num_nodes,
                                 std::span<const std::pair<NodeId, NodeId>> pairs);

  // Canonical list of undirected edges (u < v), ascending.
  std::vector<std::pair<NodeId, NodeId>> undirected_edges() const;

  MatrixXd to_dense() const;

  bool operator==(const CsrAdjacency&) const = default;
};

}  // namespace s2n
