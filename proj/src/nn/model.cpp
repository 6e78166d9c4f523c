#include "s2n/nn/model.hpp"

#include <cmath>

namespace s2n::nn {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace

double keyed_uniform(std::uint64_t seed, std::uint64_t epoch, std::uint64_t layer, std::uint64_t element) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ epoch);
  h = splitmix64(h ^ layer);
  h = splitmix64(h ^ element);
  return to_unit(h);
}

std::string_view to_string(EncoderKind kind) { return kind == EncoderKind::Gcn ? "gcn" : "linkx-i"; }
std::string_view to_string(Pool pool) { return pool == Pool::Sum ? "sum" : "max"; }

EncoderKind parse_encoder(std::string_view text) {
  if (text == "gcn") return EncoderKind::Gcn;
  if (text == "linkx-i" || text == "linkx_i") return EncoderKind::LinkxI;
  throw Error(ErrorCode::InvalidConfig, "unknown encoder '" + std::string(text) + "' (gcn|linkx-i)");
}

Pool parse_pool(std::string_view text) {
  if (text == "sum") return Pool::Sum;
  if (text == "max") return Pool::Max;
  throw Error(ErrorCode::InvalidConfig, "unknown pool '" + std::string(text) + "' (sum|max)");
}

void ModelShape::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (set_layers != 2 && set_layers != 4) fail("set encoder layers must be 2 or 4");
  if (graph_layers != 1 && graph_layers != 2) fail("graph encoder layers must be 1 or 2");
  if (input_dim == 0 || hidden_dim == 0 || num_classes == 0) fail("model dimensions must be positive");
  if (encoder == EncoderKind::LinkxI && train_nodes == 0) fail("LINKX-I needs the train node count");
}

ModelBundle<double> initialize(const ModelShape& shape, std::uint64_t seed) {
  ModelBundle<double> bundle = allocate<double>(shape);
  std::uint64_t tensor = 0;
  for_each_param(bundle, [&](const std::string&, MatrixXd& m, bool is_weight) {
    ++tensor;
    if (!is_weight) return;
    // Glorot uniform: U(-a, a), a = sqrt(6 / (fan_in + fan_out)).
    const double limit = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
    for (Index r = 0; r < m.rows(); ++r)
      for (Index c = 0; c < m.cols(); ++c) {
        const double u = keyed_uniform(seed, ~std::uint64_t{0}, tensor, static_cast<std::uint64_t>(r * m.cols() + c));
        m(r, c) = (2.0 * u - 1.0) * limit;
      }
  });
  return bundle;
}

}  // namespace s2n::nn
