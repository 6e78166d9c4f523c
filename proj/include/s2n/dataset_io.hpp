#pragma once

#include <filesystem>

#include "s2n/graph.hpp"

namespace s2n {

// Directory layout:
//   meta.json        {"num_nodes", "num_classes", "label_kind", "feature_dim"}
//   edges.tsv        "u\tv" per line, u < v, ascending, no duplicates
//   subgraphs.jsonl  {"nodes", "label", "split", "internal_edges"?} per line
//   features.bin     optional; u64 rows, u64 cols, then row-major f64 (LE)
//
// Throws Error on missing files, malformed input, or when the loaded dataset
// fails validate().
SubgraphDataset load_dataset(const std::filesystem::path& root);

void save_dataset(const SubgraphDataset& dataset, const std::filesystem::path& root);

// FNV-1a over the dataset files, in fixed order. Used for provenance.
std::uint64_t dataset_checksum(const std::filesystem::path& root);

}  // namespace s2n
