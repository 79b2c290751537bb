// SPDX-License-Identifier: Apache-2.0
#include "alesal/synth/render.hpp"

#include <cmath>

#include "alesal/nn/rng.hpp"

namespace alesal::synth {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSpeedOfLight = 299792458.0;

void validate_path(const PathComponent& path, double rate_hz) {
    if (!(std::abs(path.attenuation) > 0))
        throw Error("render: path attenuation must be non-zero");
    if (!std::isfinite(path.attenuation.real()) || !std::isfinite(path.attenuation.imag()) ||
        !std::isfinite(path.base_distance_m) || path.base_distance_m <= 0)
        throw Error("render: non-finite or non-positive path parameters");
    const double fmax = displacement_max_freq(path.displacement);
    if (fmax > 0 && rate_hz < 2.0 * fmax)
        throw Error("render: rate " + std::to_string(rate_hz) +
                    " Hz is below twice the displacement frequency " + std::to_string(fmax) + " Hz");
}

}  // namespace

double displacement_at(const Displacement& d, double t) {
    if (std::holds_alternative<StaticDisplacement>(d)) return 0.0;
    if (const auto* s = std::get_if<SinusoidDisplacement>(&d))
        return s->envelope.at(t) * s->amplitude_m * std::sin(2.0 * kPi * s->freq_hz * t + s->phase_rad);
    const auto& b = std::get<BurstDisplacement>(d);
    if (t < b.onset_s || t >= b.onset_s + b.duration_s) return 0.0;
    return b.amplitude_m * std::sin(2.0 * kPi * b.jerk_freq_hz * (t - b.onset_s));
}

double displacement_max_freq(const Displacement& d) {
    if (const auto* s = std::get_if<SinusoidDisplacement>(&d)) return s->freq_hz;
    if (const auto* b = std::get_if<BurstDisplacement>(&d)) return b->jerk_freq_hz;
    return 0.0;
}

csi::Session render_csi(const ScenarioSpec& spec, double duration_sec, double rate_hz,
                        std::uint64_t seed) {
    if (!(duration_sec > 0) || !(rate_hz > 0))
        throw Error("render: duration and rate must be positive");
    if (spec.pairs < 1 || spec.subcarriers < 1)
        throw Error("render: need at least one pair and one subcarrier");
    if (static_cast<int>(spec.pair_paths.size()) != spec.pairs)
        throw Error("render: pair_paths size must equal the pair count");
    if (!(spec.carrier_hz > 0) || !std::isfinite(spec.carrier_hz) ||
        !std::isfinite(spec.subcarrier_spacing_hz) || !(spec.noise_std >= 0) ||
        !std::isfinite(spec.noise_std))
        throw Error("render: non-finite scenario values");
    for (const auto& pp : spec.pair_paths) {
        if (pp.total() == 0) throw Error("render: empty path set for a pair");
        for (const auto* group : {&pp.static_paths, &pp.chest_paths, &pp.limb_paths})
            for (const auto& path : *group) validate_path(path, rate_hz);
    }

    const int S = spec.subcarriers;
    std::vector<double> wavelength(static_cast<std::size_t>(S));
    for (int i = 0; i < S; ++i) {
        const double f = spec.single_lambda
                             ? spec.carrier_hz
                             : spec.carrier_hz + spec.subcarrier_spacing_hz * (i - S / 2.0);
        if (!(f > 0)) throw Error("render: non-positive subcarrier frequency");
        wavelength[static_cast<std::size_t>(i)] = kSpeedOfLight / f;
    }

    csi::Session session;
    session.meta.pairs = spec.pairs;
    session.meta.subcarriers = S;
    session.meta.nominal_rate = rate_hz;
    session.meta.label_track = spec.schedule;
    csi::validate_meta(session.meta);

    const int n_samples = static_cast<int>(std::llround(duration_sec * rate_hz));
    if (n_samples < 1) throw Error("render: duration too short for one sample");
    session.records.reserve(static_cast<std::size_t>(n_samples) * spec.pairs);

    nn::Rng noise_rng(seed);
    const double sigma = spec.noise_std / std::sqrt(2.0);

    for (int k = 0; k < n_samples; ++k) {
        const double t = k / rate_hz;
        for (int p = 0; p < spec.pairs; ++p) {
            const PairPaths& pp = spec.pair_paths[static_cast<std::size_t>(p)];
            csi::CsiRecord rec;
            rec.timestamp = t;
            rec.pair = p;
            rec.values.assign(static_cast<std::size_t>(S), {0.0, 0.0});

            for (const auto* group : {&pp.static_paths, &pp.chest_paths, &pp.limb_paths}) {
                for (const auto& path : *group) {
                    const double d = path.base_distance_m + displacement_at(path.displacement, t);
                    for (int i = 0; i < S; ++i) {
                        const double phase = -2.0 * kPi * d / wavelength[static_cast<std::size_t>(i)];
                        rec.values[static_cast<std::size_t>(i)] +=
                            path.attenuation * std::complex<double>(std::cos(phase), std::sin(phase));
                    }
                }
            }
            if (sigma > 0) {
                for (int i = 0; i < S; ++i)
                    rec.values[static_cast<std::size_t>(i)] +=
                        std::complex<double>(sigma * noise_rng.normal(), sigma * noise_rng.normal());
            }
            session.records.push_back(std::move(rec));
        }
    }
    return session;
}

}  // namespace alesal::synth
