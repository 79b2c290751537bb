// SPDX-License-Identifier: Apache-2.0
//
// Channel renderer and labeled dataset generator: closed-form phase checks,
// spectral oracles for the class signatures, determinism.

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "alesal/csi/io.hpp"
#include "alesal/dsp/pca.hpp"
#include "alesal/dsp/pipeline.hpp"
#include "alesal/synth/dataset.hpp"
#include "test_util.hpp"

using namespace alesal;
using nn::Rng;
using synth::BurstDisplacement;
using synth::PathComponent;
using synth::ScenarioSpec;
using synth::SinusoidDisplacement;
using synth::StaticDisplacement;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Amplitude block [T x S] of one pair from an interleaved session.
std::vector<double> amplitude_block(const csi::Session& session, int pair, int* time_out) {
    std::vector<double> block;
    int T = 0;
    for (const auto& r : session.records) {
        if (r.pair != pair) continue;
        for (const auto& v : r.values) block.push_back(std::abs(v));
        ++T;
    }
    *time_out = T;
    return block;
}

std::vector<double> pca_series_of(const csi::Session& session, int pair) {
    int T = 0;
    auto block = amplitude_block(session, pair, &T);
    return dsp::pca_first_component(block, T, session.meta.subcarriers).series;
}

ScenarioSpec static_scenario(int pairs, int subcarriers) {
    ScenarioSpec spec;
    spec.pairs = pairs;
    spec.subcarriers = subcarriers;
    spec.noise_std = 0.0;
    spec.schedule = {{0.0, 100.0, csi::kClassNormal}};
    spec.pair_paths.resize(static_cast<std::size_t>(pairs));
    Rng rng(77);
    for (auto& pp : spec.pair_paths) {
        for (int i = 0; i < 3; ++i) {
            PathComponent p;
            p.attenuation = {rng.uniform(0.3, 1.0), rng.uniform(-0.5, 0.5)};
            p.base_distance_m = rng.uniform(2.0, 7.0);
            pp.static_paths.push_back(p);
        }
    }
    return spec;
}

}  // namespace

TEST_CASE("render: static-only paths give CSI constant over time") {
    auto spec = static_scenario(2, 5);
    auto session = synth::render_csi(spec, 5.0, 10.0, 1);
    REQUIRE(session.records.size() == 100);  // 50 samples x 2 pairs
    for (const auto& r : session.records) {
        const auto& first =
            session.records[static_cast<std::size_t>(r.pair)];  // records sorted (t, pair)
        for (int s = 0; s < 5; ++s)
            CHECK(std::abs(r.values[static_cast<std::size_t>(s)] -
                           first.values[static_cast<std::size_t>(s)]) <= 1e-12);
    }
}

TEST_CASE("render: doubling every attenuation exactly doubles every sample") {
    auto spec = static_scenario(1, 4);
    PathComponent chest;
    chest.attenuation = {0.3, 0.1};
    chest.base_distance_m = 3.0;
    chest.displacement = SinusoidDisplacement{0.006, 0.3, 0.4, {}};
    spec.pair_paths[0].chest_paths.push_back(chest);

    auto session1 = synth::render_csi(spec, 3.0, 10.0, 5);
    ScenarioSpec doubled = spec;
    for (auto& pp : doubled.pair_paths) {
        for (auto& p : pp.static_paths) p.attenuation *= 2.0;
        for (auto& p : pp.chest_paths) p.attenuation *= 2.0;
    }
    auto session2 = synth::render_csi(doubled, 3.0, 10.0, 5);
    REQUIRE(session1.records.size() == session2.records.size());
    for (std::size_t i = 0; i < session1.records.size(); ++i)
        for (int s = 0; s < 4; ++s) {
            const auto a = session1.records[i].values[static_cast<std::size_t>(s)];
            const auto b = session2.records[i].values[static_cast<std::size_t>(s)];
            CHECK(b.real() == 2.0 * a.real());
            CHECK(b.imag() == 2.0 * a.imag());
        }
}

TEST_CASE("render: single-path phase advances by exactly -2 pi delta_d / lambda") {
    ScenarioSpec spec;
    spec.pairs = 1;
    spec.subcarriers = 1;
    spec.single_lambda = true;
    spec.noise_std = 0.0;
    spec.schedule = {{0.0, 10.0, csi::kClassNormal}};
    spec.pair_paths.resize(1);
    PathComponent path;
    path.attenuation = {1.0, 0.0};
    path.base_distance_m = 3.0;
    const SinusoidDisplacement disp{0.005, 0.3, 0.7, {}};
    path.displacement = disp;
    spec.pair_paths[0].static_paths.push_back(path);

    const double rate = 10.0;
    auto session = synth::render_csi(spec, 5.0, rate, 3);
    const double lambda = 299792458.0 / spec.carrier_hz;

    for (std::size_t i = 1; i < session.records.size(); ++i) {
        const double t1 = session.records[i - 1].timestamp;
        const double t2 = session.records[i].timestamp;
        const double d1 = disp.amplitude_m * std::sin(2.0 * kPi * disp.freq_hz * t1 + disp.phase_rad);
        const double d2 = disp.amplitude_m * std::sin(2.0 * kPi * disp.freq_hz * t2 + disp.phase_rad);
        const double expected = -2.0 * kPi * (d2 - d1) / lambda;

        double measured = std::arg(session.records[i].values[0]) -
                          std::arg(session.records[i - 1].values[0]);
        while (measured > kPi) measured -= 2.0 * kPi;
        while (measured < -kPi) measured += 2.0 * kPi;
        CHECK(std::fabs(measured - expected) <= 1e-9);
    }
}

TEST_CASE("render: |h| bounded by the attenuation sum at zero noise") {
    auto spec = static_scenario(2, 6);
    PathComponent chest;
    chest.attenuation = {0.4, 0.0};
    chest.base_distance_m = 3.2;
    chest.displacement = SinusoidDisplacement{0.006, 0.25, 0.0, {}};
    for (auto& pp : spec.pair_paths) pp.chest_paths.push_back(chest);
    auto session = synth::render_csi(spec, 10.0, 10.0, 2);

    std::vector<double> bound(2, 0.0);
    for (int p = 0; p < 2; ++p) {
        for (const auto& path : spec.pair_paths[static_cast<std::size_t>(p)].static_paths)
            bound[static_cast<std::size_t>(p)] += std::abs(path.attenuation);
        for (const auto& path : spec.pair_paths[static_cast<std::size_t>(p)].chest_paths)
            bound[static_cast<std::size_t>(p)] += std::abs(path.attenuation);
    }
    for (const auto& r : session.records)
        for (const auto& v : r.values)
            CHECK(std::abs(v) <= bound[static_cast<std::size_t>(r.pair)] + 1e-12);
}

TEST_CASE("render: chest sinusoid at 0.25 Hz dominates the PCA spectrum (DFT oracle)") {
    auto spec = static_scenario(1, 6);
    PathComponent chest;
    chest.attenuation = {0.35, 0.0};
    chest.base_distance_m = 3.0;
    chest.displacement = SinusoidDisplacement{0.006, 0.25, 0.3, {}};
    spec.pair_paths[0].chest_paths.push_back(chest);

    auto session = synth::render_csi(spec, 40.0, 10.0, 4);
    auto series = pca_series_of(session, 0);
    REQUIRE(series.size() == 400);

    // Naive DFT argmax over positive frequencies; resolution 0.025 Hz.
    int argmax = 1;
    double best = 0.0;
    for (int k = 1; k <= 200; ++k) {
        std::complex<double> acc = 0.0;
        for (int i = 0; i < 400; ++i) {
            const double ang = -2.0 * kPi * k * i / 400.0;
            acc += series[static_cast<std::size_t>(i)] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        if (std::abs(acc) > best) {
            best = std::abs(acc);
            argmax = k;
        }
    }
    CHECK(argmax * 10.0 / 400.0 == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("render: input validation") {
    ScenarioSpec empty;
    empty.pairs = 1;
    empty.subcarriers = 1;
    empty.schedule = {{0.0, 1.0, csi::kClassNormal}};
    empty.pair_paths.resize(1);
    CHECK_THROWS_WITH_AS(synth::render_csi(empty, 1.0, 10.0, 0), doctest::Contains("empty path"),
                         Error);

    auto bad = static_scenario(1, 1);
    bad.noise_std = std::nan("");
    CHECK_THROWS_AS(synth::render_csi(bad, 1.0, 10.0, 0), Error);

    auto fast = static_scenario(1, 1);
    fast.pair_paths[0].static_paths[0].displacement = SinusoidDisplacement{0.005, 8.0, 0.0, {}};
    CHECK_THROWS_AS(synth::render_csi(fast, 1.0, 10.0, 0), Error);  // rate < 2 * freq
}

// ===========================================================================
// class schedules
// ===========================================================================

TEST_CASE("schedule: normal activates no limb paths") {
    Rng rng(81);
    auto plan = synth::make_class_schedule(csi::kClassNormal, 20.0, rng);
    CHECK(plan.limb_bursts.empty());
    CHECK(plan.chest_envelope.points.empty());

    synth::ScenarioOptions options;
    options.subcarriers = 4;
    Rng rng2(82);
    auto spec = synth::make_scenario(csi::kClassNormal, 20.0, options, rng2);
    for (const auto& pp : spec.pair_paths) CHECK(pp.limb_paths.empty());
}

TEST_CASE("schedule: apnea collapses breathing-band power inside the flat interval") {
    synth::ScenarioOptions options;
    options.subcarriers = 8;
    options.noise_std = 0.0;
    options.modest_pair_prob = 0.0;

    Rng rng(83);
    synth::SchedulePlan plan;
    auto spec = synth::make_scenario(csi::kClassApnea, 20.0, options, rng, &plan);
    REQUIRE(plan.event_spans.size() == 1);

    // Normal twin: same geometry, envelope stripped.
    ScenarioSpec twin = spec;
    for (auto& pp : twin.pair_paths)
        for (auto& chest : pp.chest_paths)
            std::get<SinusoidDisplacement>(chest.displacement).envelope = {};

    auto apnea = synth::render_csi(spec, 20.0, 10.0, 9);
    auto normal = synth::render_csi(twin, 20.0, 10.0, 9);

    const auto [flat_lo, flat_hi] = plan.event_spans[0];
    const int lo = static_cast<int>(std::ceil(flat_lo * 10.0));
    const int hi = static_cast<int>(std::floor(flat_hi * 10.0));

    auto apnea_series = pca_series_of(apnea, 0);
    auto normal_series = pca_series_of(normal, 0);
    std::vector<double> apnea_seg(apnea_series.begin() + lo, apnea_series.begin() + hi);
    std::vector<double> normal_seg(normal_series.begin() + lo, normal_series.begin() + hi);

    const double p_apnea = testutil::band_power(apnea_seg, 10.0, 0.1, 0.5);
    const double p_normal = testutil::band_power(normal_seg, 10.0, 0.1, 0.5);
    INFO("apnea band power ", p_apnea, " vs normal ", p_normal);
    CHECK(p_apnea < 0.25 * p_normal);
}

TEST_CASE("schedule: plmd bursts spike the first difference of the PCA series") {
    synth::ScenarioOptions options;
    options.subcarriers = 8;
    options.noise_std = 0.0;
    options.modest_pair_prob = 0.0;

    Rng rng(84);
    synth::SchedulePlan plan;
    auto spec = synth::make_scenario(csi::kClassPlmd, 20.0, options, rng, &plan);
    REQUIRE(!plan.event_spans.empty());
    auto session = synth::render_csi(spec, 20.0, 10.0, 11);
    auto series = pca_series_of(session, 0);

    auto in_burst = [&](double t, double margin) {
        for (const auto& [lo, hi] : plan.event_spans)
            if (t >= lo - margin && t <= hi + margin) return true;
        return false;
    };
    double max_inside = 0.0, max_outside = 0.0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double t = i / 10.0;
        const double diff = std::fabs(series[i] - series[i - 1]);
        if (in_burst(t, 0.0))
            max_inside = std::max(max_inside, diff);
        else if (!in_burst(t, 0.5))
            max_outside = std::max(max_outside, diff);
    }
    INFO("max diff inside ", max_inside, " outside ", max_outside);
    CHECK(max_inside > 3.0 * max_outside);
}

TEST_CASE("schedule: class signatures hold for >= 95% of generated windows") {
    // Apnea: breathing-band energy of the window must drop well below the
    // class-normal level; plmd: the burst must spike the first difference.
    synth::DatasetConfig config;
    config.per_class = {20, 20, 20};
    config.seed = 404;
    auto sessions = synth::gen_dataset(config);

    int apnea_total = 0, apnea_ok = 0, plmd_total = 0, plmd_ok = 0;
    std::vector<double> normal_powers;
    for (const auto& s : sessions) {
        if (s.class_id != csi::kClassNormal) continue;
        auto series = pca_series_of(s.session, 0);
        normal_powers.push_back(testutil::band_power(series, 10.0, 0.1, 0.5));
    }
    std::sort(normal_powers.begin(), normal_powers.end());
    const double normal_median = normal_powers[normal_powers.size() / 2];

    for (const auto& s : sessions) {
        if (s.class_id == csi::kClassApnea) {
            ++apnea_total;
            const auto [lo_t, hi_t] = s.event_spans[0];
            auto series = pca_series_of(s.session, 0);
            const int lo = static_cast<int>(std::ceil(lo_t * 10.0));
            const int hi = static_cast<int>(std::floor(hi_t * 10.0));
            std::vector<double> seg(series.begin() + lo, series.begin() + hi);
            // Compare per-second band power against the class-normal median.
            const double p = testutil::band_power(seg, 10.0, 0.1, 0.5) / seg.size();
            if (p < 0.25 * normal_median / series.size()) ++apnea_ok;
        } else if (s.class_id == csi::kClassPlmd) {
            ++plmd_total;
            auto series = pca_series_of(s.session, 0);
            auto in_burst = [&](double t, double margin) {
                for (const auto& [lo, hi] : s.event_spans)
                    if (t >= lo - margin && t <= hi + margin) return true;
                return false;
            };
            double max_inside = 0.0, max_outside = 0.0;
            for (std::size_t i = 1; i < series.size(); ++i) {
                const double t = i / 10.0;
                const double diff = std::fabs(series[i] - series[i - 1]);
                if (in_burst(t, 0.0))
                    max_inside = std::max(max_inside, diff);
                else if (!in_burst(t, 0.5))
                    max_outside = std::max(max_outside, diff);
            }
            if (max_inside > 3.0 * max_outside) ++plmd_ok;
        }
    }
    INFO("apnea ", apnea_ok, "/", apnea_total, ", plmd ", plmd_ok, "/", plmd_total);
    CHECK(apnea_ok >= static_cast<int>(std::ceil(0.95 * apnea_total)));
    CHECK(plmd_ok >= static_cast<int>(std::ceil(0.95 * plmd_total)));
}

// ===========================================================================
// gen_dataset
// ===========================================================================

TEST_CASE("gen_dataset: fixed seed gives byte-identical output") {
    synth::DatasetConfig config;
    config.per_class = {2, 2, 2};
    config.scenario.subcarriers = 4;
    config.seed = 7;
    auto run = [&] {
        std::ostringstream out;
        for (const auto& s : synth::gen_dataset(config)) csi::serialize_session(s.session, out);
        return out.str();
    };
    CHECK(run() == run());
}

TEST_CASE("gen_dataset: labels match the requested class counts") {
    synth::DatasetConfig config;
    config.per_class = {3, 4, 5};
    config.scenario.subcarriers = 2;
    config.seed = 8;
    auto sessions = synth::gen_dataset(config);
    std::array<int, 3> counts{};
    for (const auto& s : sessions) {
        REQUIRE(s.session.meta.label_track.size() == 1);
        CHECK(s.session.meta.label_track[0].class_id == s.class_id);
        ++counts[static_cast<std::size_t>(s.class_id)];
    }
    CHECK(counts == std::array<int, 3>{3, 4, 5});
}

TEST_CASE("gen_dataset: different seeds give distinct geometries, same label counts") {
    synth::DatasetConfig config;
    config.per_class = {2, 2, 2};
    config.scenario.subcarriers = 3;
    config.seed = 1;
    auto a = synth::gen_dataset(config);
    config.seed = 2;
    auto b = synth::gen_dataset(config);
    REQUIRE(a.size() == b.size());

    double max_diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].class_id == b[i].class_id);
        for (std::size_t r = 0; r < a[i].session.records.size(); ++r)
            for (int s = 0; s < 3; ++s)
                max_diff = std::max(max_diff, std::abs(a[i].session.records[r].values[static_cast<std::size_t>(s)] -
                                                       b[i].session.records[r].values[static_cast<std::size_t>(s)]));
    }
    CHECK(max_diff > 0.01);  // statistically distinct renders
}

// ===========================================================================
// synthetic windows through the preprocessing pipeline
// ===========================================================================

TEST_CASE("pipeline: apnea window loses >= 50% breathing-band spectrogram energy vs normal") {
    synth::ScenarioOptions options;
    options.subcarriers = 16;
    options.noise_std = 0.02;
    options.modest_pair_prob = 0.0;

    auto band_energy = [](const dsp::WindowFeatures& f) {
        double acc = 0.0;
        for (const auto& spec : f.specs)
            for (int t = 0; t < spec.frames; ++t)
                for (int k = 0; k < spec.bins; ++k)
                    if (spec.bin_freqs[static_cast<std::size_t>(k)] >= 0.1 &&
                        spec.bin_freqs[static_cast<std::size_t>(k)] <= 0.5)
                        acc += spec.at(t, k) * spec.at(t, k);
        return acc;
    };

    dsp::PipelineParams params;
    double normal_energy = 0.0, apnea_energy = 0.0;
    const int trials = 6;
    for (int i = 0; i < trials; ++i) {
        auto normal = synth::make_session(csi::kClassNormal, 20.0, 10.0, options, Rng(900 + i));
        auto apnea = synth::make_session(csi::kClassApnea, 20.0, 10.0, options, Rng(900 + i));
        auto fn = dsp::preprocess_session(normal.session, params);
        auto fa = dsp::preprocess_session(apnea.session, params);
        REQUIRE(fn.size() == 1);
        REQUIRE(fa.size() == 1);
        normal_energy += band_energy(fn[0]);
        apnea_energy += band_energy(fa[0]);
    }
    INFO("normal ", normal_energy, " apnea ", apnea_energy);
    CHECK(apnea_energy <= 0.5 * normal_energy);
}
