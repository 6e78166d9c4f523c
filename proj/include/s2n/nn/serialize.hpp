#pragma once

#include <string>

#include "s2n/nn/train.hpp"

namespace s2n::nn {

struct SavedModel {
  ModelBundle<double> model;
  ModelConfig model_config;
  TrainConfig train_config;
  History history;
};

// JSON with shapes, base64 little-endian float64 parameters, configs and
// history. Output is a pure function of the input.
std::string to_json(const SavedModel& saved);
SavedModel from_json(const std::string& text);

}  // namespace s2n::nn
