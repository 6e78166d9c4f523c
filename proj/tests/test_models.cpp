#include <doctest.h>

#include <numeric>

#include "oracles.hpp"
#include "s2n/error.hpp"
#include "s2n/nn/forward.hpp"

using namespace s2n;
using namespace s2n::nn;

namespace {

MatrixXd random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXd m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = g(rng);
  return m;
}

Dense<double> identity_layer(Index f) { return {MatrixXd::Identity(f, f), MatrixXd::Zero(1, f)}; }

Dense<double> random_layer(Index in, Index out, std::mt19937_64& rng) {
  return {random_matrix(in, out, rng), random_matrix(1, out, rng)};
}

CsrAdjacency graph_of(std::size_t n, std::vector<std::pair<NodeId, NodeId>> edges) {
  return CsrAdjacency::from_pairs(n, edges);
}

}  // namespace

TEST_CASE("deepsets forward") {
  std::mt19937_64 rng(1);
  const MatrixXd x = random_matrix(6, 3, rng);
  DeepSetsParams<double> p;
  p.phi = {random_layer(3, 4, rng), random_layer(4, 4, rng)};
  p.rho = {random_layer(4, 4, rng), random_layer(4, 2, rng)};

  SUBCASE("a singleton pools to itself") {
    for (Pool pool : {Pool::Sum, Pool::Max}) {
      const std::vector<NodeId> one{3};
      const RowVector<double> got = deepsets_forward<double>(one, x, p, pool);
      // rho(phi(x_3)) computed layer by layer.
      MatrixXd a = x.row(3);
      for (const auto& l : p.phi) a = ((a * l.weight).rowwise() + l.bias.row(0)).cwiseMax(0.0);
      a = ((a * p.rho[0].weight).rowwise() + p.rho[0].bias.row(0)).cwiseMax(0.0);
      a = (a * p.rho[1].weight).rowwise() + p.rho[1].bias.row(0);
      CHECK((got - a.row(0)).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
  SUBCASE("member order does not matter") {
    std::vector<NodeId> members{0, 2, 3, 5};
    const auto max_ref = deepsets_forward<double>(members, x, p, Pool::Max);
    const auto sum_ref = deepsets_forward<double>(members, x, p, Pool::Sum);
    for (int trial = 0; trial < 10; ++trial) {
      std::shuffle(members.begin(), members.end(), rng);
      CHECK(deepsets_forward<double>(members, x, p, Pool::Max) == max_ref);
      CHECK((deepsets_forward<double>(members, x, p, Pool::Sum) - sum_ref).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  SUBCASE("identity layers with sum pooling add the member features") {
    DeepSetsParams<double> id;
    id.phi = {identity_layer(3)};
    id.rho = {identity_layer(3)};
    const MatrixXd nonneg = x.cwiseAbs();  // phi is followed by ReLU
    const std::vector<NodeId> members{1, 4};
    const RowVector<double> got = deepsets_forward<double>(members, nonneg, id, Pool::Sum);
    CHECK(got == nonneg.row(1) + nonneg.row(4));
  }
  SUBCASE("empty member set") {
    CHECK_THROWS_AS(deepsets_forward<double>(std::vector<NodeId>{}, x, p, Pool::Sum), Error);
  }
}

TEST_CASE("max pool ties go to the first member") {
  MatrixXd members(3, 1);
  members << 2.0, 2.0, 1.0;
  const SetIndex sets{{0, 1, 2}};
  ArgmaxTable argmax;
  pool_forward(members, sets, Pool::Max, &argmax);
  CHECK(argmax(0, 0) == 0);
  const MatrixXd grad = pool_backward(MatrixXd(MatrixXd::Ones(1, 1)), sets, Pool::Max, argmax, 3);
  CHECK(grad(0, 0) == 1.0);
  CHECK(grad(1, 0) == 0.0);
  CHECK(grad(2, 0) == 0.0);
}

TEST_CASE("gcn forward") {
  std::mt19937_64 rng(2);
  GcnParams<double> one;
  one.layers = {identity_layer(3)};
  const MatrixXd h = random_matrix(4, 3, rng);

  SUBCASE("edgeless graph propagates nothing") {
    CHECK((gcn_forward(h, graph_of(4, {}), one) - h).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("K2 averages the two rows") {
    const MatrixXd h2 = h.topRows(2);
    const MatrixXd out = gcn_forward(h2, graph_of(2, {{0, 1}}), one);
    const RowVector<double> mean = (h2.row(0) + h2.row(1)) / 2.0;
    CHECK((out.row(0) - mean).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((out.row(1) - mean).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("permutation equivariance") {
    GcnParams<double> two;
    two.layers = {random_layer(3, 5, rng), random_layer(5, 2, rng)};
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 12;
      const auto adj = oracle::random_graph(n, 0.3, rng);
      const MatrixXd x = random_matrix(static_cast<Index>(n), 3, rng);
      std::vector<NodeId> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      // Node u of the original graph becomes perm[u].
      std::vector<std::pair<NodeId, NodeId>> moved;
      for (const auto& [u, v] : adj.undirected_edges()) moved.emplace_back(perm[u], perm[v]);
      MatrixXd px(x.rows(), x.cols());
      for (std::size_t u = 0; u < n; ++u) px.row(perm[u]) = x.row(static_cast<Index>(u));
      const MatrixXd out = gcn_forward(x, adj, two);
      const MatrixXd pout = gcn_forward(px, CsrAdjacency::from_pairs(n, moved), two);
      for (std::size_t u = 0; u < n; ++u)
        CHECK((pout.row(perm[u]) - out.row(static_cast<Index>(u))).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(gcn_forward(h, graph_of(3, {}), one), Error);
  }
}

TEST_CASE("masked adjacency multiply") {
  std::mt19937_64 rng(3);
  SUBCASE("path graph with a two-node train prefix") {
    const auto path = graph_of(3, {{0, 1}, {1, 2}});
    MatrixXd w(2, 2);
    w << 1, 2, 3, 4;
    MatrixXd expected(3, 2);
    expected << 3, 4, 1, 2, 3, 4;
    CHECK(masked_adj_multiply(path, w, 2) == expected);
    CHECK(MatrixXd(train_neighbor_matrix<double>(path, 2) * w) == expected);
  }
  SUBCASE("no train neighbors gives a zero row") {
    const auto g = graph_of(4, {{0, 1}, {2, 3}});
    const MatrixXd w = random_matrix(2, 3, rng);
    const MatrixXd out = masked_adj_multiply(g, w, 2);
    CHECK(out.row(2).isZero(0));
    CHECK(out.row(3).isZero(0));
  }
  SUBCASE("full train prefix equals the dense product") {
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 1 + rng() % 30;
      const auto adj = oracle::random_graph(n, 0.3, rng);
      const MatrixXd w = random_matrix(static_cast<Index>(n), 1 + static_cast<Index>(rng() % 6), rng);
      CHECK((masked_adj_multiply(adj, w, n) - adj.to_dense() * w).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(masked_adj_multiply(graph_of(3, {}), MatrixXd(MatrixXd::Zero(3, 2)), 2), Error);
  }
}

TEST_CASE("linkx-i forward") {
  std::mt19937_64 rng(4);
  SUBCASE("hand-evaluated three-node case") {
    // H_A = [w1, w0, w1], H_X = H, W_f = [I | I], head = I:
    // logits = ReLU(2 (H_A + H_X)).
    LinkxParams<double> p;
    p.adj_weight.resize(2, 2);
    p.adj_weight << 1, -2, 0.5, 1;
    p.adj_bias = MatrixXd::Zero(1, 2);
    p.feature_layer = identity_layer(2);
    p.combine_weight.resize(2, 4);
    p.combine_weight << 1, 0, 1, 0, 0, 1, 0, 1;
    p.combine_bias = MatrixXd::Zero(1, 2);
    p.head = {identity_layer(2)};
    MatrixXd h(3, 2);
    h << 1, 1, -1, 0, 0, -3;
    MatrixXd expected(3, 2);
    expected << 3, 4, 0, 0, 1, 0;
    CHECK(linkxi_forward(h, graph_of(3, {{0, 1}, {1, 2}}), 2, p) == expected);
  }

  LinkxParams<double> p;
  p.adj_weight = random_matrix(3, 4, rng);
  p.adj_bias = random_matrix(1, 4, rng);
  p.feature_layer = random_layer(4, 4, rng);
  p.combine_weight = random_matrix(4, 8, rng);
  p.combine_bias = random_matrix(1, 4, rng);
  p.head = {random_layer(4, 4, rng), random_layer(4, 2, rng)};

  SUBCASE("edgeless graph ignores the adjacency weights") {
    const MatrixXd h = random_matrix(5, 4, rng);
    const MatrixXd before = linkxi_forward(h, graph_of(5, {}), 3, p);
    LinkxParams<double> q = p;
    q.adj_weight = random_matrix(3, 4, rng);
    CHECK(linkxi_forward(h, graph_of(5, {}), 3, q) == before);
  }
  SUBCASE("train rows see train neighbors only") {
    // Train graph: nodes 0..2 with edges 0-1. Eval graph appends node 3
    // adjacent to train node 2 and node 4 adjacent to train node 0.
    const MatrixXd h = random_matrix(5, 4, rng);
    const MatrixXd train_out = linkxi_forward(MatrixXd(h.topRows(3)), graph_of(3, {{0, 1}}), 3, p);
    const MatrixXd eval_out = linkxi_forward(h, graph_of(5, {{0, 1}, {2, 3}, {0, 4}}), 3, p);
    // The masked sum skips eval neighbors, so train rows are unchanged...
    CHECK((eval_out.topRows(3) - train_out).cwiseAbs().maxCoeff() == 0.0);
    // ...while eval rows aggregate the weights of their train neighbors.
    const MatrixXd eval_alone = linkxi_forward(h, graph_of(5, {{0, 1}}), 3, p);
    CHECK((eval_out.row(3) - eval_alone.row(3)).cwiseAbs().maxCoeff() > 0.0);

    // GCN has no such mask: a train node gaining an eval neighbor changes.
    GcnParams<double> gcn;
    gcn.layers = {random_layer(4, 2, rng)};
    const MatrixXd g_train = gcn_forward(MatrixXd(h.topRows(3)), graph_of(3, {{0, 1}}), gcn);
    const MatrixXd g_eval = gcn_forward(h, graph_of(5, {{0, 1}, {2, 3}, {0, 4}}), gcn);
    CHECK((g_eval.row(2) - g_train.row(2)).cwiseAbs().maxCoeff() > 0.0);
  }
  SUBCASE("adjacency weights must match the train prefix") {
    CHECK_THROWS_AS(linkxi_forward(random_matrix(5, 4, rng), graph_of(5, {}), 2, p), Error);
  }
}

TEST_CASE("parameter counts") {
  ModelShape shape;
  shape.input_dim = 3;
  shape.hidden_dim = 2;
  shape.num_classes = 2;
  shape.set_layers = 2;
  shape.graph_layers = 1;
  // Set encoder: (3*2+2) + (2*2+2) = 14. One GCN layer 2 -> 2: 6.
  CHECK(param_count(allocate<double>(shape)) == 14 + 6);

  shape.input_dim = 4;
  shape.hidden_dim = 4;
  const std::size_t set4 = (4 * 4 + 4) * 2;
  // Two dense layers 4 -> 8 -> 2, and one 3 -> 2.
  Dense<double> a{MatrixXd::Zero(4, 8), MatrixXd::Zero(1, 8)};
  Dense<double> b{MatrixXd::Zero(8, 2), MatrixXd::Zero(1, 2)};
  CHECK(static_cast<std::size_t>(a.weight.size() + a.bias.size() + b.weight.size() + b.bias.size()) == 58);
  Dense<double> single{MatrixXd::Zero(3, 2), MatrixXd::Zero(1, 2)};
  CHECK(single.weight.size() + single.bias.size() == 8);

  shape.encoder = EncoderKind::LinkxI;
  shape.train_nodes = 10;
  shape.graph_layers = 2;
  // W_A 10*4 + 4, feature 4*4 + 4, W_f 4*8 + 4, head 4*4 + 4 and 4*2 + 2.
  CHECK(param_count(allocate<double>(shape)) == set4 + 44 + 20 + 36 + 20 + 10);

  shape.encoder = EncoderKind::Gcn;
  shape.graph_layers = 1;
  const auto one = param_count(allocate<double>(shape));
  shape.graph_layers = 2;
  CHECK(param_count(allocate<double>(shape)) >= one);
}

TEST_CASE("dropout masks are keyed and scaled") {
  DropoutPlan plan{0.5, 7, 3, true};
  const MatrixXd a = dropout_mask<double>(20, 10, plan, 1);
  CHECK(a == dropout_mask<double>(20, 10, plan, 1));
  CHECK_FALSE(a == dropout_mask<double>(20, 10, plan, 2));
  for (Index i = 0; i < a.size(); ++i) CHECK((a(i) == 0.0 || a(i) == 2.0));
  const double kept = (a.array() > 0).cast<double>().mean();
  CHECK(kept > 0.3);
  CHECK(kept < 0.7);
  plan.training = false;
  CHECK(dropout_mask<double>(4, 4, plan, 1).isOnes());
}
