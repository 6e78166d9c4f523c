#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "s2n/graph.hpp"
#include "s2n/nn/train.hpp"

namespace s2n {

class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::chrono::nanoseconds now() = 0;
};

class SteadyClock final : public Clock {
 public:
  SteadyClock();
  std::chrono::nanoseconds now() override;
};

// Advances by a fixed step on every call.
class FakeClock final : public Clock {
 public:
  explicit FakeClock(std::chrono::nanoseconds step) : step_(step) {}
  std::chrono::nanoseconds now() override {
    current_ += step_;
    return current_;
  }

 private:
  std::chrono::nanoseconds step_;
  std::chrono::nanoseconds current_{0};
};

struct BenchReport {
  double train_throughput = 0.0;  // training subgraphs / second
  double infer_throughput = 0.0;  // validation subgraphs / second
  double train_latency = 0.0;     // seconds / forward pass
  double infer_latency = 0.0;
  std::size_t param_count = 0;
  std::size_t epochs_measured = 0;
  std::size_t train_samples = 0;
  std::size_t infer_samples = 0;
  // Full-batch: one batch per epoch.
  std::size_t train_batches = 0;
  std::size_t infer_batches = 0;
  double train_wall_time = 0.0;  // seconds, summed over measured epochs
  double infer_wall_time = 0.0;
  bool warmup_epoch = true;
};

// Throughput = samples / (wall / epochs); latency = wall / batches.
BenchReport make_report(std::size_t train_samples, std::size_t infer_samples, std::size_t epochs,
                        std::size_t train_batches, std::size_t infer_batches, double train_wall_time,
                        double infer_wall_time);

// Times `epochs` training steps on the train graph and as many inference
// passes on the validation graph, after one untimed warm-up epoch.
BenchReport measure(const SubgraphDataset& dataset, const nn::ModelConfig& model_config,
                    const nn::TrainConfig& train_config, std::size_t epochs, Clock& clock);

}  // namespace s2n
