#include "s2n/dataset_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

#include "s2n/error.hpp"

namespace s2n {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, "missing file: " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

[[noreturn]] void parse_error(const std::string& file, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::Parse, file + ":" + std::to_string(line) + ": " + what);
}

std::uint64_t parse_uint(std::string_view text, const std::string& file, std::size_t line) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    parse_error(file, line, "expected a non-negative integer, got '" + std::string(text) + "'");
  return value;
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint64_t get_u64(const std::string& in, std::size_t pos) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  return v;
}

GlobalGraph parse_edges(const std::string& text, std::size_t num_nodes) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) parse_error("edges.tsv", line_no, "expected 'u<TAB>v'");
    const auto u = parse_uint(std::string_view(line).substr(0, tab), "edges.tsv", line_no);
    const auto v = parse_uint(std::string_view(line).substr(tab + 1), "edges.tsv", line_no);
    if (u >= num_nodes || v >= num_nodes)
      throw Error(ErrorCode::NodeIdOutOfRange,
                  "edges.tsv:" + std::to_string(line_no) + ": node id out of range (num_nodes=" +
                      std::to_string(num_nodes) + ")");
    if (u == v)
      throw Error(ErrorCode::SelfLoopRejected, "edges.tsv:" + std::to_string(line_no) + ": self-loop");
    if (u > v)
      throw Error(ErrorCode::AsymmetricEdgeList,
                  "edges.tsv:" + std::to_string(line_no) + ": edge must be listed once as u < v");
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  std::sort(edges.begin(), edges.end());
  if (const auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
    throw Error(ErrorCode::DuplicateEdge,
                "edges.tsv: duplicate edge " + std::to_string(dup->first) + "-" + std::to_string(dup->second));
  GlobalGraph graph;
  graph.num_nodes = num_nodes;
  graph.adjacency = CsrAdjacency::from_pairs(num_nodes, edges);
  return graph;
}

std::vector<NodeId> node_list(const json& value, std::size_t num_nodes, std::size_t line) {
  if (!value.is_array()) parse_error("subgraphs.jsonl", line, "'nodes' must be an array");
  std::vector<NodeId> out;
  for (const auto& id : value) {
    if (!id.is_number_unsigned()) parse_error("subgraphs.jsonl", line, "node ids must be non-negative integers");
    const auto u = id.get<std::uint64_t>();
    if (u >= num_nodes)
      throw Error(ErrorCode::NodeIdOutOfRange, "subgraphs.jsonl:" + std::to_string(line) + ": node id out of range");
    out.push_back(static_cast<NodeId>(u));
  }
  return out;
}

FeatureMatrix parse_features(const std::string& bytes, std::size_t num_nodes, std::size_t feature_dim) {
  if (bytes.size() < 16) throw Error(ErrorCode::Parse, "features.bin: truncated header");
  const auto rows = get_u64(bytes, 0);
  const auto cols = get_u64(bytes, 8);
  if (rows != num_nodes) throw Error(ErrorCode::Parse, "features.bin: row count differs from num_nodes");
  if (cols != feature_dim) throw Error(ErrorCode::Parse, "features.bin: column count differs from feature_dim");
  if (bytes.size() != 16 + rows * cols * 8) throw Error(ErrorCode::Parse, "features.bin: size does not match header");
  FeatureMatrix x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::size_t pos = 16;
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c, pos += 8) x(r, c) = std::bit_cast<double>(get_u64(bytes, pos));
  return x;
}

}  // namespace

SubgraphDataset load_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(ErrorCode::MissingFile, "not a dataset directory: " + root.string());

  json meta;
  try {
    meta = json::parse(read_file(root / "meta.json"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("meta.json: ") + e.what());
  }
  std::size_t num_nodes = 0, num_classes = 0, feature_dim = 0;
  std::string kind;
  try {
    num_nodes = meta.at("num_nodes").get<std::size_t>();
    num_classes = meta.at("num_classes").get<std::size_t>();
    kind = meta.at("label_kind").get<std::string>();
    feature_dim = meta.at("feature_dim").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("meta.json: ") + e.what());
  }
  if (kind != "single" && kind != "multi") throw Error(ErrorCode::Parse, "meta.json: label_kind must be single|multi");

  SubgraphDataset ds;
  ds.graph = parse_edges(read_file(root / "edges.tsv"), num_nodes);
  ds.labels.kind = kind == "single" ? LabelKind::Single : LabelKind::Multi;
  ds.labels.num_classes = num_classes;

  std::istringstream lines(read_file(root / "subgraphs.jsonl"));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::exception& e) {
      parse_error("subgraphs.jsonl", line_no, e.what());
    }
    if (!row.is_object() || !row.contains("nodes") || !row.contains("label") || !row.contains("split"))
      parse_error("subgraphs.jsonl", line_no, "expected {\"nodes\", \"label\", \"split\"}");
    Subgraph s;
    s.node_ids = node_list(row["nodes"], num_nodes, line_no);
    if (row.contains("internal_edges")) {
      for (const auto& e : row["internal_edges"]) {
        if (!e.is_array() || e.size() != 2) parse_error("subgraphs.jsonl", line_no, "internal edge must be [u, v]");
        const auto ends = node_list(e, num_nodes, line_no);
        s.internal_edges.emplace_back(ends[0], ends[1]);
      }
    }
    const auto& label = row["label"];
    if (ds.labels.kind == LabelKind::Single) {
      if (!label.is_number_integer()) parse_error("subgraphs.jsonl", line_no, "single-label 'label' must be an integer");
      ds.labels.single.push_back(label.get<int>());
    } else {
      if (!label.is_array()) parse_error("subgraphs.jsonl", line_no, "multi-label 'label' must be an array");
      std::vector<int> set;
      for (const auto& c : label) {
        if (!c.is_number_integer()) parse_error("subgraphs.jsonl", line_no, "class ids must be integers");
        set.push_back(c.get<int>());
      }
      ds.labels.multi.push_back(std::move(set));
    }
    const auto split = row["split"].is_string() ? parse_split(row["split"].get<std::string>()) : std::nullopt;
    if (!split) parse_error("subgraphs.jsonl", line_no, "split must be train|valid|test");
    ds.split.push_back(*split);
    ds.subgraphs.push_back(std::move(s));
  }

  if (fs::exists(root / "features.bin"))
    ds.features = parse_features(read_file(root / "features.bin"), num_nodes, feature_dim);
  else
    ds.features = degree_bucket_features(ds.graph);

  const auto report = validate(ds);
  if (!report.ok()) throw Error(ErrorCode::ValidationFailed, "invalid dataset:\n" + report.summary());
  return ds;
}

void save_dataset(const SubgraphDataset& dataset, const fs::path& root) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + root.string() + ": " + ec.message());

  json meta = {{"num_nodes", dataset.graph.num_nodes},
               {"num_classes", dataset.labels.num_classes},
               {"label_kind", dataset.labels.kind == LabelKind::Single ? "single" : "multi"},
               {"feature_dim", static_cast<std::size_t>(dataset.features.cols())}};
  write_file(root / "meta.json", meta.dump() + "\n");

  std::string edges;
  for (const auto& [u, v] : dataset.graph.adjacency.undirected_edges())
    edges += std::to_string(u) + "\t" + std::to_string(v) + "\n";
  write_file(root / "edges.tsv", edges);

  std::string rows;
  for (std::size_t i = 0; i < dataset.subgraphs.size(); ++i) {
    const auto& s = dataset.subgraphs[i];
    json row;
    row["nodes"] = s.node_ids;
    if (dataset.labels.kind == LabelKind::Single)
      row["label"] = dataset.labels.single[i];
    else
      row["label"] = dataset.labels.multi[i];
    row["split"] = to_string(dataset.split[i]);
    if (!s.internal_edges.empty()) {
      json pairs = json::array();
      for (const auto& [u, v] : s.internal_edges) pairs.push_back({u, v});
      row["internal_edges"] = std::move(pairs);
    }
    rows += row.dump() + "\n";
  }
  write_file(root / "subgraphs.jsonl", rows);

  std::string bytes;
  const auto& x = dataset.features;
  bytes.reserve(16 + static_cast<std::size_t>(x.size()) * 8);
  put_u64(bytes, static_cast<std::uint64_t>(x.rows()));
  put_u64(bytes, static_cast<std::uint64_t>(x.cols()));
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c) put_u64(bytes, std::bit_cast<std::uint64_t>(x(r, c)));
  write_file(root / "features.bin", bytes);
}

std::uint64_t dataset_checksum(const fs::path& root) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char* name : {"meta.json", "edges.tsv", "subgraphs.jsonl", "features.bin"}) {
    if (!fs::exists(root / name)) continue;
    for (char ch : read_file(root / name)) {
      hash ^= static_cast<unsigned char>(ch);
      hash *= 0x100000001b3ull;
    }
  }
  return hash;
}

}  // namespace s2n
