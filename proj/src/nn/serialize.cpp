#include "s2n/nn/serialize.hpp"

#include <bit>

#include <nlohmann/json.hpp>
#include <sodium.h>

namespace s2n::nn {
using nlohmann::json;

namespace {

constexpr int kBase64 = sodium_base64_VARIANT_ORIGINAL;

std::string encode(const MatrixXd& m) {
  std::string bytes;
  bytes.reserve(static_cast<std::size_t>(m.size()) * 8);
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) {
      const auto bits = std::bit_cast<std::uint64_t>(m(r, c));
      for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
    }
  std::string out(sodium_base64_encoded_len(bytes.size(), kBase64), '\0');
  sodium_bin2base64(out.data(), out.size(), reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(),
                    kBase64);
  out.resize(out.size() - 1);  // trailing NUL
  return out;
}

void decode(const std::string& text, MatrixXd& m) {
  const std::size_t expected = static_cast<std::size_t>(m.size()) * 8;
  std::string bytes(expected + 8, '\0');
  std::size_t len = 0;
  if (sodium_base642bin(reinterpret_cast<unsigned char*>(bytes.data()), bytes.size(), text.data(), text.size(),
                        nullptr, &len, nullptr, kBase64) != 0 ||
      len != expected)
    throw Error(ErrorCode::Parse, "model.json: parameter payload does not match its shape");
  std::size_t pos = 0;
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) {
      std::uint64_t bits = 0;
      for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[pos++])) << (8 * i);
      m(r, c) = std::bit_cast<double>(bits);
    }
}

}  // namespace

std::string to_json(const SavedModel& saved) {
  if (sodium_init() < 0) throw Error(ErrorCode::Io, "libsodium failed to initialize");
  const ModelShape& shape = saved.model.shape;
  json doc;
  doc["format"] = "s2n-model";
  doc["version"] = 1;
  doc["model"] = {{"encoder", to_string(saved.model_config.encoder)},
                  {"pool", to_string(saved.model_config.pool)},
                  {"set_layers", saved.model_config.set_layers},
                  {"graph_layers", saved.model_config.graph_layers},
                  {"hidden_dim", saved.model_config.hidden_dim}};
  doc["shape"] = {{"input_dim", shape.input_dim},
                  {"num_classes", shape.num_classes},
                  {"label_kind", shape.label_kind == LabelKind::Single ? "single" : "multi"},
                  {"train_nodes", shape.train_nodes}};
  const TrainConfig& t = saved.train_config;
  doc["train"] = {{"learning_rate", t.learning_rate}, {"weight_decay", t.weight_decay}, {"dropout", t.dropout},
                  {"clip", t.clip}, {"epochs", t.epochs}, {"seed", t.seed}};
  json params = json::array();
  for_each_param(saved.model, [&](const std::string& name, const MatrixXd& m, bool) {
    params.push_back({{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}, {"data", encode(m)}});
  });
  doc["params"] = std::move(params);
  json history = json::array();
  for (const auto& e : saved.history) history.push_back({{"epoch", e.epoch}, {"loss", e.loss}, {"valid_f1", e.valid_f1}});
  doc["history"] = std::move(history);
  return doc.dump(1) + "\n";
}

SavedModel from_json(const std::string& text) {
  if (sodium_init() < 0) throw Error(ErrorCode::Io, "libsodium failed to initialize");
  SavedModel saved;
  try {
    const json doc = json::parse(text);
    if (doc.at("format") != "s2n-model") throw Error(ErrorCode::Parse, "model.json: unknown format");
    const auto& m = doc.at("model");
    saved.model_config.encoder = parse_encoder(m.at("encoder").get<std::string>());
    saved.model_config.pool = parse_pool(m.at("pool").get<std::string>());
    saved.model_config.set_layers = m.at("set_layers").get<std::size_t>();
    saved.model_config.graph_layers = m.at("graph_layers").get<std::size_t>();
    saved.model_config.hidden_dim = m.at("hidden_dim").get<std::size_t>();
    const auto& s = doc.at("shape");
    ModelShape shape;
    shape.encoder = saved.model_config.encoder;
    shape.pool = saved.model_config.pool;
    shape.set_layers = saved.model_config.set_layers;
    shape.graph_layers = saved.model_config.graph_layers;
    shape.hidden_dim = saved.model_config.hidden_dim;
    shape.input_dim = s.at("input_dim").get<std::size_t>();
    shape.num_classes = s.at("num_classes").get<std::size_t>();
    shape.label_kind = s.at("label_kind") == "multi" ? LabelKind::Multi : LabelKind::Single;
    shape.train_nodes = s.at("train_nodes").get<std::size_t>();
    const auto& t = doc.at("train");
    saved.train_config.learning_rate = t.at("learning_rate").get<double>();
    saved.train_config.weight_decay = t.at("weight_decay").get<double>();
    saved.train_config.dropout = t.at("dropout").get<double>();
    saved.train_config.clip = t.at("clip").get<double>();
    saved.train_config.epochs = t.at("epochs").get<std::size_t>();
    saved.train_config.seed = t.at("seed").get<std::uint64_t>();

    saved.model = allocate<double>(shape);
    const auto& params = doc.at("params");
    std::size_t i = 0;
    for_each_param(saved.model, [&](const std::string& name, MatrixXd& value, bool) {
      if (i >= params.size()) throw Error(ErrorCode::ShapeMismatch, "model.json: missing parameter " + name);
      const auto& p = params[i++];
      if (p.at("name") != name || p.at("rows").get<Index>() != value.rows() || p.at("cols").get<Index>() != value.cols())
        throw Error(ErrorCode::ShapeMismatch, "model.json: parameter " + name + " does not match the declared shape");
      decode(p.at("data").get<std::string>(), value);
    });
    if (i != params.size()) throw Error(ErrorCode::ShapeMismatch, "model.json: unexpected extra parameters");
    for (const auto& e : doc.at("history"))
      saved.history.push_back({e.at("epoch").get<std::size_t>(), e.at("loss").get<double>(), e.at("valid_f1").get<double>()});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("model.json: ") + e.what());
  }
  return saved;
}

}  // namespace s2n::nn
