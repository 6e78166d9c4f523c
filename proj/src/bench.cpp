#include "s2n/bench.hpp"

#include "s2n/error.hpp"
#include "s2n/translate.hpp"

namespace s2n {

SteadyClock::SteadyClock() {
  if (!std::chrono::steady_clock::is_steady)
    throw Error(ErrorCode::ClockUnavailable, "no monotonic clock on this platform");
}

std::chrono::nanoseconds SteadyClock::now() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now().time_since_epoch());
}

BenchReport make_report(std::size_t train_samples, std::size_t infer_samples, std::size_t epochs,
                        std::size_t train_batches, std::size_t infer_batches, double train_wall_time,
                        double infer_wall_time) {
  if (epochs == 0 || train_batches == 0 || infer_batches == 0)
    throw Error(ErrorCode::InvalidConfig, "benchmark needs at least one epoch and batch");
  if (!(train_wall_time > 0.0) || !(infer_wall_time > 0.0))
    throw Error(ErrorCode::ClockUnavailable, "clock did not advance during measurement");
  BenchReport r;
  r.epochs_measured = epochs;
  r.train_samples = train_samples;
  r.infer_samples = infer_samples;
  r.train_batches = train_batches;
  r.infer_batches = infer_batches;
  r.train_wall_time = train_wall_time;
  r.infer_wall_time = infer_wall_time;
  const double e = static_cast<double>(epochs);
  r.train_throughput = static_cast<double>(train_samples) / (train_wall_time / e);
  r.infer_throughput = static_cast<double>(infer_samples) / (infer_wall_time / e);
  r.train_latency = train_wall_time / static_cast<double>(train_batches);
  r.infer_latency = infer_wall_time / static_cast<double>(infer_batches);
  return r;
}

BenchReport measure(const SubgraphDataset& dataset, const nn::ModelConfig& model_config,
                    const nn::TrainConfig& train_config, std::size_t epochs, Clock& clock) {
  if (epochs == 0) throw Error(ErrorCode::InvalidConfig, "benchmark needs at least one epoch");
  train_config.validate();
  const StagewiseGraphs graphs = build_stagewise(dataset, Split::Valid);
  const auto train_ctx = nn::make_context<double>(graphs.train_graph, dataset.features);
  const auto eval_ctx = nn::make_context<double>(graphs.eval_graph, dataset.features);
  const LabelSet labels = coarse_labels(graphs.train_graph, dataset.labels);
  auto model = nn::initialize(nn::make_shape(model_config, dataset, graphs.train_graph.num_nodes()), train_config.seed);

  volatile double sink = 0.0;
  // Warm-up, untimed.
  nn::train_step(model, train_ctx, labels, train_config, 0);
  sink = sink + nn::forward(model, eval_ctx).sum();

  std::chrono::nanoseconds train_ns{0}, infer_ns{0};
  for (std::size_t epoch = 1; epoch <= epochs; ++epoch) {
    const auto t0 = clock.now();
    nn::train_step(model, train_ctx, labels, train_config, epoch);
    const auto t1 = clock.now();
    sink = sink + nn::forward(model, eval_ctx).sum();
    const auto t2 = clock.now();
    train_ns += t1 - t0;
    infer_ns += t2 - t1;
  }
  (void)sink;

  const auto seconds = [](std::chrono::nanoseconds ns) { return std::chrono::duration<double>(ns).count(); };
  const std::size_t valid_count = graphs.eval_graph.num_nodes() - graphs.eval_graph.train_count;
  BenchReport report = make_report(graphs.train_graph.num_nodes(), valid_count, epochs, epochs, epochs,
                                   seconds(train_ns), seconds(infer_ns));
  report.param_count = nn::param_count(model);
  return report;
}

}  // namespace s2n
