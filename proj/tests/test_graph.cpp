#include <doctest.h>

#include "s2n/error.hpp"
#include "s2n/graph.hpp"

using namespace s2n;

namespace {

SubgraphDataset minimal() {
  SubgraphDataset ds;
  const std::vector<std::pair<NodeId, NodeId>> edges{{0, 1}, {1, 2}};
  ds.graph.num_nodes = 3;
  ds.graph.adjacency = CsrAdjacency::from_pairs(3, edges);
  ds.features = MatrixXd::Zero(3, 2);
  ds.subgraphs = {Subgraph{{0, 1}, {}}, Subgraph{{1, 2}, {{1, 2}}}};
  ds.labels.num_classes = 2;
  ds.labels.single = {0, 1};
  ds.split = {Split::Train, Split::Test};
  return ds;
}

}  // namespace

TEST_CASE("density uses the undirected convention") {
  // Published rows: 0.0022 and 0.0028 at four decimals.
  CHECK(std::abs(density(17080, 316951) - 0.0022) < 1e-4);
  CHECK(std::abs(density(57333, 4573417) - 0.0028) < 1e-4);
  CHECK(density(3, 3) == 1.0);
  for (std::size_t n = 2; n <= 50; ++n) CHECK(density(n, n * (n - 1) / 2) == 1.0);
  CHECK_THROWS_AS(density(1, 0), Error);
}

TEST_CASE("from_pairs builds a sorted symmetric CSR") {
  const std::vector<std::pair<NodeId, NodeId>> edges{{2, 0}, {0, 1}, {1, 0}, {3, 1}};
  const auto adj = CsrAdjacency::from_pairs(4, edges);
  CHECK(adj.num_undirected_edges() == 3);
  CHECK(adj.has_edge(0, 2));
  CHECK(adj.has_edge(2, 0));
  CHECK(adj.has_edge(1, 3));
  CHECK_FALSE(adj.has_edge(2, 3));
  for (std::size_t u = 0; u < adj.num_nodes(); ++u) {
    const auto row = adj.neighbors_of(u);
    CHECK(std::is_sorted(row.begin(), row.end()));
    for (NodeId v : row) CHECK(adj.has_edge(v, u));
  }
  const auto listed = adj.undirected_edges();
  CHECK(listed == std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {0, 2}, {1, 3}});
}

TEST_CASE("validate reports violations without throwing") {
  CHECK(validate(minimal()).ok());

  SUBCASE("duplicate node id names the subgraph") {
    auto ds = minimal();
    ds.subgraphs[1].node_ids = {1, 1, 2};
    const auto report = validate(ds);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].where == "subgraph[1]");
    CHECK(report.violations[0].message == "duplicate node id");
  }
  SUBCASE("internal edge absent from the global graph") {
    auto ds = minimal();
    ds.subgraphs[0].node_ids = {0, 2};
    ds.subgraphs[0].internal_edges = {{0, 2}};
    const auto report = validate(ds);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].message == "internal edge not in global graph");
  }
  SUBCASE("asymmetric adjacency and bad labels") {
    auto ds = minimal();
    ds.graph.adjacency.neighbors = {1, 0, 2, 0};
    ds.labels.single[0] = 5;
    ds.split.pop_back();
    const auto report = validate(ds);
    CHECK(report.violations.size() >= 3);
  }
  SUBCASE("empty subgraph and non-finite features") {
    auto ds = minimal();
    ds.subgraphs[0].node_ids.clear();
    ds.features(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK(validate(ds).violations.size() == 2);
  }
}

TEST_CASE("degree bucket features are one-hot over log2(degree + 1)") {
  const auto ds = minimal();
  const auto x = degree_bucket_features(ds.graph);
  CHECK(x.rows() == 3);
  CHECK(x.cols() == 16);
  CHECK(x(0, 1) == 1.0);  // degree 1 -> floor(log2 2) = 1
  CHECK(x(1, 1) == 1.0);  // degree 2 -> floor(log2 3) = 1
  CHECK(x.rowwise().sum().isOnes());
}

TEST_CASE("multi-label view of single labels is singletons") {
  LabelSet labels;
  labels.num_classes = 3;
  labels.single = {2, 0};
  const auto multi = labels.as_multi();
  CHECK(multi.kind == LabelKind::Multi);
  CHECK(multi.multi == std::vector<std::vector<int>>{{2}, {0}});
}
