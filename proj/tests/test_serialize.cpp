#include <doctest.h>

#include <nlohmann/json.hpp>

#include "s2n/error.hpp"
#include "s2n/nn/serialize.hpp"
#include "s2n/synthetic.hpp"

using namespace s2n;
using namespace s2n::nn;

TEST_CASE("model json round trip") {
  const auto ds = generate_synthetic(synth_preset("multilabel"), 2);
  for (EncoderKind encoder : {EncoderKind::Gcn, EncoderKind::LinkxI}) {
    SavedModel saved;
    saved.model_config.encoder = encoder;
    saved.model_config.pool = Pool::Max;
    saved.model_config.set_layers = 4;
    saved.model_config.graph_layers = 1;
    saved.model_config.hidden_dim = 7;
    saved.train_config.epochs = 3;
    saved.train_config.dropout = 0.1;
    saved.train_config.seed = 12;
    auto result = train(ds, saved.model_config, saved.train_config);
    saved.model = std::move(result.model);
    saved.history = std::move(result.history);

    const std::string text = to_json(saved);
    const SavedModel back = from_json(text);
    CHECK(back.model.shape == saved.model.shape);
    CHECK(back.model_config == saved.model_config);
    CHECK(back.train_config == saved.train_config);
    CHECK(back.history == saved.history);
    CHECK(to_json(back) == text);
    std::vector<const MatrixXd*> a;
    for_each_param(saved.model, [&](const std::string&, const MatrixXd& m, bool) { a.push_back(&m); });
    std::size_t i = 0;
    for_each_param(back.model, [&](const std::string&, const MatrixXd& m, bool) { CHECK(m == *a[i++]); });
    CHECK(evaluate(back.model, ds, Split::Test) == evaluate(saved.model, ds, Split::Test));
  }
}

TEST_CASE("model json rejects damaged input") {
  const auto ds = generate_synthetic(synth_preset("separable"), 0);
  SavedModel saved;
  saved.train_config.epochs = 1;
  saved.model = train(ds, saved.model_config, saved.train_config).model;
  auto doc = nlohmann::json::parse(to_json(saved));

  CHECK_THROWS(from_json("not json"));
  auto wrong_format = doc;
  wrong_format["format"] = "other";
  CHECK_THROWS_AS(from_json(wrong_format.dump()), Error);
  auto short_data = doc;
  short_data["params"][0]["rows"] = short_data["params"][0]["rows"].get<int>() + 1;
  CHECK_THROWS_AS(from_json(short_data.dump()), Error);
  auto missing = doc;
  missing["params"].erase(missing["params"].size() - 1);
  CHECK_THROWS_AS(from_json(missing.dump()), Error);
}
