// SPDX-License-Identifier: Apache-2.0
#include "alesal/eval/benchmark.hpp"

#include "alesal/common/parallel.hpp"

namespace alesal::eval {

namespace {

// Renders one session and reduces it to its (single) preprocessed window.
dsp::WindowFeatures render_window(int class_id, const BenchmarkConfig& config, nn::Rng rng) {
    const auto session = synth::make_session(class_id, config.pipeline.window_sec,
                                             config.pipeline.rate_hz, config.scenario, rng);
    auto windows = dsp::preprocess_session(session.session, config.pipeline);
    if (windows.size() != 1)
        throw Error("benchmark: expected exactly one window per session, got " +
                    std::to_string(windows.size()));
    dsp::WindowFeatures w = std::move(windows.front());
    w.label = class_id;
    w.event_spans.assign(session.event_spans.begin(), session.event_spans.end());
    w.weak_pair = session.weak_pair;
    return w;
}

}  // namespace

std::vector<dsp::WindowFeatures> make_windows(int class_id, int count,
                                              const BenchmarkConfig& config,
                                              std::uint64_t stream_salt) {
    const nn::Rng root(config.seed);
    std::vector<dsp::WindowFeatures> out(static_cast<std::size_t>(count));
    parallel_for(static_cast<std::size_t>(count), config.threads, [&](std::size_t k) {
        nn::Rng rng = root.fork(stream_salt + static_cast<std::uint64_t>(class_id) * 0x100000ULL +
                                static_cast<std::uint64_t>(k));
        out[k] = render_window(class_id, config, rng);
    });
    return out;
}

Benchmark make_benchmark(const BenchmarkConfig& config) {
    if (config.per_class_train < 1 || config.per_class_test < 1)
        throw Error("benchmark: per-class counts must be >= 1");
    if (!(config.val_fraction >= 0.0) || config.val_fraction >= 1.0)
        throw Error("benchmark: val fraction must be in [0, 1)");

    Benchmark bench;
    const int val_every =
        config.val_fraction > 0 ? std::max(2, static_cast<int>(std::llround(1.0 / config.val_fraction)))
                                : 0;

    std::uint32_t next_id = 0;
    for (int c = 0; c < csi::kNumClasses; ++c) {
        auto windows = make_windows(c, config.per_class_train, config, 0x7261696eULL);
        for (int k = 0; k < static_cast<int>(windows.size()); ++k) {
            windows[static_cast<std::size_t>(k)].window_id = next_id++;
            if (val_every > 0 && (k + 1) % val_every == 0)
                bench.val.push_back(std::move(windows[static_cast<std::size_t>(k)]));
            else
                bench.train.push_back(std::move(windows[static_cast<std::size_t>(k)]));
        }
    }
    for (int c = 0; c < csi::kNumClasses; ++c) {
        auto windows = make_windows(c, config.per_class_test, config, 0x74657374ULL);
        for (auto& w : windows) {
            w.window_id = next_id++;
            bench.test.push_back(std::move(w));
        }
    }
    return bench;
}

}  // namespace alesal::eval
