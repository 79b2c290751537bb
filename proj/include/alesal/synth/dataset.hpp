// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "alesal/nn/rng.hpp"
#include "alesal/synth/render.hpp"

namespace alesal::synth {

// Knobs of the randomized scenario family. Parameter jitter ranges live in
// dataset.cpp next to the drawing code.
struct ScenarioOptions {
    int pairs = 4;
    int subcarriers = 114;
    double carrier_hz = 5e9;
    double subcarrier_spacing_hz = 312.5e3;
    double noise_std = 0.05;
    bool single_lambda = false;
    // Chance of rendering one pair with strongly attenuated chest
    // reflection (a "modest" pair); weak_pair forces the pair index, -1
    // leaves the draw random.
    double modest_pair_prob = 0.5;
    int weak_pair = -1;
    double weak_factor = 0.1;
};

// What the chest does and when limbs fire for one class realization.
SchedulePlan make_class_schedule(int class_id, double duration_sec, nn::Rng& rng);

// Randomized scenario of one session: static geometry, chest path per pair,
// limb paths per burst, schedule = the whole span labeled class_id.
ScenarioSpec make_scenario(int class_id, double duration_sec, const ScenarioOptions& options,
                           nn::Rng& rng, SchedulePlan* plan_out = nullptr,
                           int* modest_pair_out = nullptr);

struct SyntheticSession {
    csi::Session session;
    int class_id = 0;
    std::vector<std::pair<double, double>> event_spans;  // seconds from session start
    int weak_pair = -1;                                  // modest pair index, -1 if none
};

SyntheticSession make_session(int class_id, double duration_sec, double rate_hz,
                              const ScenarioOptions& options, nn::Rng rng);

struct DatasetConfig {
    std::array<int, 3> per_class{10, 10, 10};  // sessions per class
    double duration_sec = 20.0;
    double rate_hz = 10.0;
    ScenarioOptions scenario;
    std::uint64_t seed = 0;
};

// Deterministic under a fixed seed: session k of class c derives its own
// stream from (seed, c, k), so generation order does not matter.
std::vector<SyntheticSession> gen_dataset(const DatasetConfig& config);

}  // namespace alesal::synth
