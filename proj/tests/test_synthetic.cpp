#include <doctest.h>

#include "s2n/error.hpp"
#include "s2n/homophily.hpp"
#include "s2n/synthetic.hpp"
#include "s2n/translate.hpp"

using namespace s2n;

namespace {

double coarse_node_homophily(const SubgraphDataset& ds) {
  const auto g = build_full(ds);
  const auto labels = coarse_labels(g, ds.labels);
  return node_homophily({g.adjacency, labels});
}

}  // namespace

TEST_CASE("generation is deterministic in (config, seed)") {
  for (const char* preset : {"separable", "hard", "multilabel"}) {
    const auto config = synth_preset(preset);
    CHECK(generate_synthetic(config, 11) == generate_synthetic(config, 11));
    CHECK_FALSE(generate_synthetic(config, 11) == generate_synthetic(config, 12));
  }
}

TEST_CASE("generated datasets are valid with nonempty stratified splits") {
  for (const char* preset : {"separable", "hard", "multilabel"}) {
    CAPTURE(preset);
    const auto ds = generate_synthetic(synth_preset(preset), 5);
    CHECK(validate(ds).ok());
    CHECK(ds.num_subgraphs() == 200);
    for (Split s : {Split::Train, Split::Valid, Split::Test}) CHECK_FALSE(ds.indices_of(s).empty());
    if (ds.labels.kind == LabelKind::Single) {
      // 50 per class -> 40 / 5 / 5
      for (int c = 0; c < 4; ++c) {
        std::size_t train = 0;
        for (std::size_t i : ds.indices_of(Split::Train)) train += ds.labels.single[i] == c;
        CHECK(train == 40);
      }
    }
  }
}

TEST_CASE("disjoint pools give a homophilous coarse graph") {
  auto config = synth_preset("separable");
  CHECK(config.overlap == 0.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) CHECK(coarse_node_homophily(generate_synthetic(config, seed)) >= 0.95);
}

TEST_CASE("fully shared pools give chance-level homophily") {
  auto config = synth_preset("separable");
  config.overlap = 1.0;
  double mean = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) mean += coarse_node_homophily(generate_synthetic(config, seed)) / 10;
  // Balanced classes: sum_c p_c^2 = 4 * (1/4)^2.
  CHECK(std::abs(mean - 0.25) <= 0.1);
}

TEST_CASE("subgraphs draw from their class pool") {
  auto config = synth_preset("hard");
  const auto ds = generate_synthetic(config, 2);
  const std::size_t pool = config.num_nodes / config.num_classes;
  for (std::size_t i = 0; i < ds.num_subgraphs(); ++i) {
    const auto& nodes = ds.subgraphs[i].node_ids;
    std::size_t own = 0;
    for (NodeId u : nodes) own += u / pool == static_cast<std::size_t>(ds.labels.single[i]);
    CHECK(static_cast<double>(own) >= (1.0 - config.overlap) * static_cast<double>(nodes.size()) - 1e-9);
  }
}

TEST_CASE("infeasible configurations are rejected") {
  auto config = synth_preset("separable");
  config.max_size = 500;
  CHECK_THROWS_AS(generate_synthetic(config, 0), Error);
  config = synth_preset("separable");
  config.overlap = 1.5;
  CHECK_THROWS_AS(generate_synthetic(config, 0), Error);
  CHECK_THROWS_AS(synth_preset("unknown"), Error);
}
