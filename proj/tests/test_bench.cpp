#include <doctest.h>

#include <cmath>

#include "s2n/bench.hpp"
#include "s2n/error.hpp"
#include "s2n/synthetic.hpp"

using namespace s2n;
using namespace std::chrono_literals;

namespace {

bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("report arithmetic") {
  const auto r = make_report(100, 20, 50, 50, 50, 10.0, 2.0);
  CHECK(r.train_throughput == doctest::Approx(500.0).epsilon(1e-12));
  CHECK(r.train_latency == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.infer_throughput == doctest::Approx(500.0).epsilon(1e-12));
  CHECK(r.infer_latency == doctest::Approx(0.04).epsilon(1e-12));
  CHECK_THROWS_AS(make_report(100, 20, 50, 50, 50, 0.0, 2.0), Error);
  CHECK_THROWS_AS(make_report(100, 20, 0, 0, 0, 1.0, 1.0), Error);
}

TEST_CASE("measure with a fake clock") {
  const auto ds = generate_synthetic(synth_preset("separable"), 0);
  nn::TrainConfig tc;
  for (auto encoder : {nn::EncoderKind::Gcn, nn::EncoderKind::LinkxI}) {
    nn::ModelConfig mc;
    mc.encoder = encoder;
    mc.hidden_dim = 16;
    FakeClock clock(1ms);
    const auto r = measure(ds, mc, tc, 10, clock);
    CHECK(r.epochs_measured == 10);
    CHECK(r.train_batches == 10);
    CHECK(r.warmup_epoch);
    // Each timed region spans one clock step.
    CHECK(rel_close(r.train_wall_time, 0.010, 1e-12));
    CHECK(rel_close(r.train_throughput, static_cast<double>(r.train_samples) / 0.001, 1e-9));
    CHECK(rel_close(r.infer_throughput, static_cast<double>(r.infer_samples) / 0.001, 1e-9));
    CHECK(rel_close(r.train_latency, 0.001, 1e-9));

    FakeClock again(1ms);
    const auto twice = measure(ds, mc, tc, 20, again);
    CHECK(rel_close(twice.train_wall_time, 2 * r.train_wall_time, 1e-12));
    CHECK(rel_close(twice.train_throughput, r.train_throughput, 1e-9));

    FakeClock same(1ms);
    const auto repeat = measure(ds, mc, tc, 10, same);
    CHECK(repeat.train_throughput == r.train_throughput);
    CHECK(repeat.param_count == r.param_count);
  }
}

TEST_CASE("self-consistency with the real clock") {
  const auto ds = generate_synthetic(synth_preset("separable"), 0);
  SteadyClock clock;
  const auto r = measure(ds, nn::ModelConfig{}, nn::TrainConfig{}, 5, clock);
  const double implied = static_cast<double>(r.train_samples) * static_cast<double>(r.epochs_measured) /
                         r.train_wall_time;
  CHECK(rel_close(r.train_throughput, implied, 0.01));
}

TEST_CASE("parameter count grows with graph layers") {
  const auto ds = generate_synthetic(synth_preset("separable"), 0);
  for (auto encoder : {nn::EncoderKind::Gcn, nn::EncoderKind::LinkxI}) {
    std::size_t previous = 0;
    for (std::size_t layers : {1, 2}) {
      nn::ModelConfig mc;
      mc.encoder = encoder;
      mc.graph_layers = layers;
      FakeClock clock(1ms);
      const auto count = measure(ds, mc, nn::TrainConfig{}, 1, clock).param_count;
      CHECK(count > previous);
      previous = count;
    }
  }
}

TEST_CASE("a clock that never advances") {
  const auto ds = generate_synthetic(synth_preset("separable"), 0);
  FakeClock stuck(0ns);
  try {
    measure(ds, nn::ModelConfig{}, nn::TrainConfig{}, 2, stuck);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ClockUnavailable);
  }
}
