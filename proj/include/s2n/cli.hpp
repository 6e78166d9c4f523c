#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace s2n::cli {

inline constexpr const char* kToolVersion = "s2n 0.1.0";

// Fully resolved settings of one invocation. Values come from the optional
// --config file and are overridden by explicit flags.
struct RunConfig {
  std::string command;
  std::string dataset;
  std::string model_path;
  std::string out;
  std::string preset = "separable";
  std::string eval_split = "valid";
  std::uint64_t seed = 0;
  std::string encoder = "gcn";
  std::string pool = "sum";
  std::size_t set_layers = 2;
  std::size_t graph_layers = 2;
  std::size_t hidden_dim = 32;
  double learning_rate = 0.01;
  double weight_decay = 1e-7;
  double dropout = 0.0;
  double clip = 0.0;
  std::size_t epochs = 200;
  bool json = false;
  bool table = false;
};

// Exit codes: 0 success, 1 failure (I/O, parse, validation, shape),
// 2 usage error. Errors go to `err` as "E_<KIND>: message".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace s2n::cli
