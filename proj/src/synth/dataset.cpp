// SPDX-License-Identifier: Apache-2.0
#include "alesal/synth/dataset.hpp"

#include <cmath>

namespace alesal::synth {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// Jitter ranges emulating patient and furniture diversity. Breathing and
// burst timing are shared across pairs (one body); attenuations and path
// geometry are not.
constexpr double kBreathFreqLo = 0.2, kBreathFreqHi = 0.4;        // Hz
constexpr double kBreathAmpLo = 0.004, kBreathAmpHi = 0.008;      // m
constexpr int kStaticPathsPerPair = 3;
constexpr double kStaticDistLo = 2.0, kStaticDistHi = 8.0;        // m
constexpr double kStaticAttLo = 0.4, kStaticAttHi = 1.0;
constexpr double kChestDistLo = 2.5, kChestDistHi = 4.5;          // m
constexpr double kChestAttLo = 0.15, kChestAttHi = 0.4;
constexpr double kPairGainLo = 0.4, kPairGainHi = 1.0;
constexpr double kModestGainLo = 0.08, kModestGainHi = 0.2;
constexpr double kLimbDistLo = 2.0, kLimbDistHi = 6.0;            // m
constexpr double kLimbAttLo = 0.25, kLimbAttHi = 0.5;
constexpr double kBurstAmpLo = 0.02, kBurstAmpHi = 0.06;          // m
constexpr double kApneaRampSec = 1.5;
constexpr double kApneaHoldLo = 10.0, kApneaHoldHi = 13.0;        // s
constexpr double kApneaScaleLo = 0.02, kApneaScaleHi = 0.08;      // <= 10% of normal

std::complex<double> polar_attenuation(double mag, double phase) {
    return {mag * std::cos(phase), mag * std::sin(phase)};
}

}  // namespace

SchedulePlan make_class_schedule(int class_id, double duration_sec, nn::Rng& rng) {
    SchedulePlan plan;
    switch (class_id) {
        case csi::kClassNormal:
            return plan;

        case csi::kClassApnea: {
            if (duration_sec < 16.0)
                throw Error("schedule: apnea needs at least 16 s for a >= 10 s collapse");
            const double hold =
                rng.uniform(kApneaHoldLo, std::min(kApneaHoldHi, duration_sec - 2.0 * kApneaRampSec - 2.0));
            const double t0 = rng.uniform(1.0, duration_sec - hold - 2.0 * kApneaRampSec - 1.0);
            const double scale = rng.uniform(kApneaScaleLo, kApneaScaleHi);
            plan.chest_envelope.points = {{0.0, 1.0},
                                          {t0, 1.0},
                                          {t0 + kApneaRampSec, scale},
                                          {t0 + kApneaRampSec + hold, scale},
                                          {t0 + 2.0 * kApneaRampSec + hold, 1.0},
                                          {duration_sec, 1.0}};
            plan.event_spans.emplace_back(t0 + kApneaRampSec, t0 + kApneaRampSec + hold);
            return plan;
        }

        case csi::kClassPlmd: {
            const int bursts = rng.uniform_int(1, 3);
            for (int b = 0; b < bursts; ++b) {
                BurstWindow burst;
                burst.duration_s = rng.uniform(0.5, 2.0);
                burst.jerk_freq_hz = rng.uniform(1.0, 2.0);
                burst.onset_s = rng.uniform(0.25 * duration_sec, 0.65 * duration_sec);
                plan.limb_bursts.push_back(burst);
                plan.event_spans.emplace_back(burst.onset_s, burst.onset_s + burst.duration_s);
            }
            return plan;
        }

        default:
            throw Error("schedule: unknown class id " + std::to_string(class_id));
    }
}

ScenarioSpec make_scenario(int class_id, double duration_sec, const ScenarioOptions& options,
                           nn::Rng& rng, SchedulePlan* plan_out, int* modest_pair_out) {
    ScenarioSpec spec;
    spec.pairs = options.pairs;
    spec.subcarriers = options.subcarriers;
    spec.carrier_hz = options.carrier_hz;
    spec.subcarrier_spacing_hz = options.subcarrier_spacing_hz;
    spec.single_lambda = options.single_lambda;
    spec.noise_std = options.noise_std;
    spec.schedule = {{0.0, duration_sec, class_id}};

    SchedulePlan plan = make_class_schedule(class_id, duration_sec, rng);

    // Shared body parameters.
    const double breath_freq = rng.uniform(kBreathFreqLo, kBreathFreqHi);
    const double breath_amp = rng.uniform(kBreathAmpLo, kBreathAmpHi);
    std::vector<double> burst_amps;
    for (std::size_t b = 0; b < plan.limb_bursts.size(); ++b)
        burst_amps.push_back(rng.uniform(kBurstAmpLo, kBurstAmpHi));

    int modest_pair = options.weak_pair;
    if (modest_pair < 0 && rng.uniform() < options.modest_pair_prob)
        modest_pair = rng.uniform_int(0, options.pairs - 1);
    const double modest_gain = options.weak_pair >= 0
                                   ? options.weak_factor
                                   : rng.uniform(kModestGainLo, kModestGainHi);

    spec.pair_paths.resize(static_cast<std::size_t>(options.pairs));
    for (int p = 0; p < options.pairs; ++p) {
        PairPaths& pp = spec.pair_paths[static_cast<std::size_t>(p)];

        for (int s = 0; s < kStaticPathsPerPair; ++s) {
            PathComponent path;
            path.attenuation = polar_attenuation(rng.uniform(kStaticAttLo, kStaticAttHi),
                                                 rng.uniform(0.0, kTwoPi));
            path.base_distance_m = rng.uniform(kStaticDistLo, kStaticDistHi);
            pp.static_paths.push_back(path);
        }

        double gain = rng.uniform(kPairGainLo, kPairGainHi);
        if (p == modest_pair) gain *= modest_gain;
        PathComponent chest;
        chest.attenuation =
            polar_attenuation(rng.uniform(kChestAttLo, kChestAttHi) * gain, rng.uniform(0.0, kTwoPi));
        chest.base_distance_m = rng.uniform(kChestDistLo, kChestDistHi);
        SinusoidDisplacement breathing;
        breathing.amplitude_m = breath_amp;
        breathing.freq_hz = breath_freq;
        breathing.phase_rad = rng.uniform(0.0, kTwoPi);
        breathing.envelope = plan.chest_envelope;
        chest.displacement = breathing;
        pp.chest_paths.push_back(chest);

        for (std::size_t b = 0; b < plan.limb_bursts.size(); ++b) {
            PathComponent limb;
            limb.attenuation = polar_attenuation(rng.uniform(kLimbAttLo, kLimbAttHi),
                                                 rng.uniform(0.0, kTwoPi));
            limb.base_distance_m = rng.uniform(kLimbDistLo, kLimbDistHi);
            BurstDisplacement burst;
            burst.onset_s = plan.limb_bursts[b].onset_s;
            burst.duration_s = plan.limb_bursts[b].duration_s;
            burst.jerk_freq_hz = plan.limb_bursts[b].jerk_freq_hz;
            burst.amplitude_m = burst_amps[b];
            limb.displacement = burst;
            pp.limb_paths.push_back(limb);
        }
    }

    if (plan_out) *plan_out = std::move(plan);
    if (modest_pair_out) *modest_pair_out = modest_pair;
    return spec;
}

SyntheticSession make_session(int class_id, double duration_sec, double rate_hz,
                              const ScenarioOptions& options, nn::Rng rng) {
    SchedulePlan plan;
    int modest_pair = -1;
    const ScenarioSpec spec =
        make_scenario(class_id, duration_sec, options, rng, &plan, &modest_pair);
    SyntheticSession out;
    out.session = render_csi(spec, duration_sec, rate_hz, rng.next_u64());
    out.class_id = class_id;
    out.event_spans = plan.event_spans;
    out.weak_pair = modest_pair;
    return out;
}

std::vector<SyntheticSession> gen_dataset(const DatasetConfig& config) {
    for (int count : config.per_class)
        if (count < 1) throw Error("dataset: per-class counts must be >= 1");
    const nn::Rng root(config.seed);
    std::vector<SyntheticSession> out;
    for (int c = 0; c < csi::kNumClasses; ++c) {
        for (int k = 0; k < config.per_class[static_cast<std::size_t>(c)]; ++k) {
            nn::Rng rng = root.fork(static_cast<std::uint64_t>(c) * 0x10000000ULL +
                                    static_cast<std::uint64_t>(k));
            out.push_back(
                make_session(c, config.duration_sec, config.rate_hz, config.scenario, rng));
        }
    }
    return out;
}

}  // namespace alesal::synth
