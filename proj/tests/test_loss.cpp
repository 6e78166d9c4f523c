#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "s2n/nn/loss.hpp"

using namespace s2n;
using namespace s2n::nn;

TEST_CASE("softmax cross-entropy") {
  SUBCASE("a large margin gives a tiny positive loss") {
    MatrixXd logits(1, 3);
    logits << 50.0, 0.0, 0.0;
    const std::vector<int> y{0};
    const double l = softmax_cross_entropy<double>(logits, y).value;
    CHECK(l > 0.0);
    CHECK(l < 1e-20);
  }
  SUBCASE("uniform logits give log C") {
    for (int c : {2, 3, 7}) {
      const MatrixXd logits = MatrixXd::Constant(4, c, 1.5);
      const std::vector<int> y{0, 1, 1, 0};
      CHECK(std::abs(softmax_cross_entropy<double>(logits, y).value - std::log(static_cast<double>(c))) < 1e-14);
    }
  }
  SUBCASE("matches the scalar loop") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
      MatrixXd logits(6, 4);
      for (Index i = 0; i < logits.size(); ++i) logits(i) = g(rng);
      std::vector<int> y;
      for (int i = 0; i < 6; ++i) y.push_back(static_cast<int>(rng() % 4));
      const auto got = softmax_cross_entropy<double>(logits, y);
      CHECK(std::abs(got.value - oracle::naive_cross_entropy(logits, y)) < 1e-12);
      // Each gradient row sums to zero.
      CHECK(got.grad.rowwise().sum().cwiseAbs().maxCoeff() < 1e-15);
    }
  }
  SUBCASE("label out of range") {
    const std::vector<int> y{3};
    CHECK_THROWS(softmax_cross_entropy<double>(MatrixXd::Zero(1, 3), y));
  }
}

TEST_CASE("sigmoid binary cross-entropy") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    MatrixXd logits(5, 3);
    for (Index i = 0; i < logits.size(); ++i) logits(i) = g(rng);
    std::vector<std::vector<int>> y(5);
    for (auto& set : y)
      for (int c = 0; c < 3; ++c)
        if (rng() % 2) set.push_back(c);
    const auto got = sigmoid_binary_cross_entropy<double>(logits, y);
    CHECK(std::abs(got.value - oracle::naive_binary_cross_entropy(logits, y)) < 1e-12);
  }
  MatrixXd zero = MatrixXd::Zero(2, 2);
  const std::vector<std::vector<int>> y{{0}, {}};
  CHECK(std::abs(sigmoid_binary_cross_entropy<double>(zero, y).value - std::log(2.0)) < 1e-15);
}

TEST_CASE("data loss covers the labelled prefix only") {
  LabelSet labels;
  labels.kind = LabelKind::Single;
  labels.num_classes = 2;
  labels.single = {1, 0};
  MatrixXd logits(4, 2);
  logits << 0, 1, 2, 0, 9, 9, -3, 4;
  const auto got = data_loss<double>(logits, labels);
  CHECK(std::abs(got.value - oracle::naive_cross_entropy(logits.topRows(2), labels.single)) < 1e-15);
  CHECK(got.grad.rows() == 4);
  CHECK(got.grad.bottomRows(2).isZero(0));
}
