// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "alesal/dsp/pipeline.hpp"
#include "alesal/synth/dataset.hpp"

namespace alesal::eval {

// The synthetic end-to-end benchmark: one labeled window per rendered
// session, streamed through the preprocessing pipeline so raw CSI never
// accumulates in memory. The validation split takes every k-th training
// window per class (k = round(1 / val_fraction)), deterministically.
struct BenchmarkConfig {
    int per_class_train = 300;
    int per_class_test = 100;
    double val_fraction = 0.1;
    std::uint64_t seed = 0;
    synth::ScenarioOptions scenario;
    dsp::PipelineParams pipeline;
    int threads = 1;
};

struct Benchmark {
    std::vector<dsp::WindowFeatures> train;
    std::vector<dsp::WindowFeatures> val;
    std::vector<dsp::WindowFeatures> test;
};

Benchmark make_benchmark(const BenchmarkConfig& config);

// One preprocessed window per class realization, without the split; used by
// diagnostics that need special scenarios (e.g. a forced weak pair).
std::vector<dsp::WindowFeatures> make_windows(int class_id, int count,
                                              const BenchmarkConfig& config,
                                              std::uint64_t stream_salt);

}  // namespace alesal::eval
