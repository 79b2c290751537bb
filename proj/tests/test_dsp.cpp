// SPDX-License-Identifier: Apache-2.0
//
// Preprocessing stages against their analytic and brute-force oracles.

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "alesal/dsp/butterworth.hpp"
#include "alesal/dsp/normalize.hpp"
#include "alesal/dsp/pca.hpp"
#include "alesal/dsp/pipeline.hpp"
#include "alesal/dsp/resample.hpp"
#include "alesal/dsp/stft.hpp"
#include "alesal/nn/rng.hpp"
#include "test_util.hpp"

using namespace alesal;
using csi::CsiRecord;
using nn::Rng;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<CsiRecord> make_records(const std::vector<double>& times,
                                    const std::vector<std::complex<double>>& values) {
    std::vector<CsiRecord> records;
    for (std::size_t i = 0; i < times.size(); ++i) {
        CsiRecord r;
        r.timestamp = times[i];
        r.pair = 0;
        r.values = {values[i]};
        records.push_back(std::move(r));
    }
    return records;
}

// Steady-state amplitude of a filtered unit sinusoid, measured over the
// central half of the record by RMS.
double measured_amplitude(const dsp::ButterworthBandpass& filter, double freq, double rate,
                          int samples) {
    std::vector<double> x(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) x[static_cast<std::size_t>(i)] = std::sin(2.0 * kPi * freq * i / rate);
    const auto y = filter.filtfilt(x);
    const int lo = samples / 4, hi = 3 * samples / 4;
    double acc = 0.0;
    for (int i = lo; i < hi; ++i) acc += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    return std::sqrt(2.0 * acc / (hi - lo));
}

}  // namespace

// ===========================================================================
// resample
// ===========================================================================

TEST_CASE("resample: input already uniform at f_r comes back unchanged") {
    std::vector<double> times;
    std::vector<std::complex<double>> values;
    Rng rng(41);
    for (int i = 0; i < 30; ++i) {
        times.push_back(i / 10.0);
        values.emplace_back(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
    auto u = dsp::resample(make_records(times, values), 1, 10.0);
    REQUIRE(u.samples == 30);
    for (int i = 0; i < 30; ++i) {
        CHECK(std::abs(u.at(i, 0) - values[static_cast<std::size_t>(i)]) <= 1e-12);
    }
    CHECK(u.gaps.empty());
}

TEST_CASE("resample: constant stream with jittered timestamps stays constant") {
    Rng rng(42);
    std::vector<double> times;
    double t = 0.0;
    for (int i = 0; i < 40; ++i) {
        times.push_back(t);
        t += rng.uniform(0.05, 0.15);
    }
    std::vector<std::complex<double>> values(times.size(), {0.7, -0.3});
    auto u = dsp::resample(make_records(times, values), 1, 10.0);
    for (int i = 0; i < u.samples; ++i)
        CHECK(std::abs(u.at(i, 0) - std::complex<double>(0.7, -0.3)) <= 1e-12);
}

TEST_CASE("resample: linear ramp sampled irregularly is recovered exactly") {
    Rng rng(43);
    std::vector<double> times;
    std::vector<std::complex<double>> values;
    double t = 0.0;
    for (int i = 0; i < 50; ++i) {
        times.push_back(t);
        values.emplace_back(2.0 * t + 1.0, -0.5 * t);  // linear in t
        t += rng.uniform(0.02, 0.2);
    }
    auto u = dsp::resample(make_records(times, values), 1, 10.0);
    for (int i = 0; i < u.samples; ++i) {
        const double ti = u.start + i / 10.0;
        CHECK(u.at(i, 0).real() == doctest::Approx(2.0 * ti + 1.0).epsilon(1e-12));
        CHECK(u.at(i, 0).imag() == doctest::Approx(-0.5 * ti).epsilon(1e-12));
    }
}

TEST_CASE("resample: empty stream is an error, long gaps are flagged") {
    CHECK_THROWS_AS(dsp::resample({}, 1, 10.0), Error);
    auto u = dsp::resample(make_records({0.0, 0.1, 0.9, 1.0}, {{1, 0}, {1, 0}, {1, 0}, {1, 0}}), 1,
                           10.0);
    REQUIRE(u.gaps.size() == 1);
    CHECK(u.gaps[0].first == 0.1);
    CHECK(u.gaps[0].second == 0.9);
}

// ===========================================================================
// normalize
// ===========================================================================

TEST_CASE("normalize: instant {2,4,6} maps to {0, 0.5, 1}") {
    auto out = dsp::normalize_pair({2.0, 4.0, 6.0}, 1, 3);
    CHECK(out.values == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(out.degenerate_instants == 0);
}

TEST_CASE("normalize: all-equal subcarriers give zeros and raise the flag") {
    auto out = dsp::normalize_pair({3.0, 3.0, 3.0, 1.0, 2.0, 3.0}, 2, 3);
    CHECK(out.values[0] == 0.0);
    CHECK(out.values[1] == 0.0);
    CHECK(out.values[2] == 0.0);
    CHECK(out.degenerate_instants == 1);
    CHECK(out.values[3] == 0.0);
    CHECK(out.values[4] == 0.5);
    CHECK(out.values[5] == 1.0);
}

TEST_CASE("normalize: invariant under positive affine transforms, outputs in [0,1]") {
    Rng rng(44);
    for (int trial = 0; trial < 10; ++trial) {
        const int T = rng.uniform_int(2, 6), S = rng.uniform_int(2, 5);
        std::vector<double> base(static_cast<std::size_t>(T) * S);
        for (auto& v : base) v = rng.uniform(0.0, 5.0);
        const double a = rng.uniform(0.1, 5.0), c = rng.uniform(-3.0, 3.0);
        std::vector<double> transformed(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) transformed[i] = a * base[i] + c;

        auto out1 = dsp::normalize_pair(base, T, S);
        auto out2 = dsp::normalize_pair(transformed, T, S);
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(out1.values[i] >= 0.0);
            CHECK(out1.values[i] <= 1.0);
            CHECK(out1.values[i] == doctest::Approx(out2.values[i]).epsilon(1e-10));
        }
    }
}

// ===========================================================================
// bandpass
// ===========================================================================

TEST_CASE("bandpass: DC input is rejected") {
    dsp::ButterworthBandpass filter({0.1, 2.0, 4, 10.0});
    std::vector<double> x(200, 1.0);
    const auto y = filter.filtfilt(x);
    for (double v : y) CHECK(std::fabs(v) <= 1e-3);
}

TEST_CASE("bandpass: 0.3 Hz passband sinusoid keeps its amplitude (analytic oracle)") {
    dsp::ButterworthBandpass filter({0.1, 2.0, 4, 10.0});
    const double measured = measured_amplitude(filter, 0.3, 10.0, 1200);
    const double predicted = std::norm(filter.response(0.3));  // |H|^2 for zero phase
    CHECK(measured == doctest::Approx(1.0).epsilon(0.05));
    CHECK(measured == doctest::Approx(predicted).epsilon(0.05));
}

TEST_CASE("bandpass: 4 Hz stopband sinusoid is attenuated below 0.1 (analytic oracle)") {
    dsp::ButterworthBandpass filter({0.1, 2.0, 4, 10.0});
    const double measured = measured_amplitude(filter, 4.0, 10.0, 1200);
    const double predicted = std::norm(filter.response(4.0));
    CHECK(measured <= 0.1);
    CHECK(std::fabs(measured - predicted) <= 0.01);
}

TEST_CASE("bandpass: measured gain tracks the analytic transfer function across the band") {
    dsp::ButterworthBandpass filter({0.1, 2.0, 4, 10.0});
    for (double f : {0.2, 0.3, 0.5, 1.0, 1.5}) {
        const double measured = measured_amplitude(filter, f, 10.0, 2400);
        const double predicted = std::norm(filter.response(f));
        INFO("passband f=", f, " measured=", measured, " predicted=", predicted);
        CHECK(measured == doctest::Approx(predicted).epsilon(0.05));
    }
    for (double f : {3.0, 4.0, 4.5}) {
        const double measured = measured_amplitude(filter, f, 10.0, 2400);
        const double predicted = std::norm(filter.response(f));
        INFO("stopband f=", f);
        CHECK(std::fabs(measured - predicted) <= 0.1);
    }
}

TEST_CASE("bandpass: linear in its input") {
    dsp::ButterworthBandpass filter({0.1, 2.0, 4, 10.0});
    Rng rng(45);
    std::vector<double> x(300), y(300);
    for (int i = 0; i < 300; ++i) {
        x[static_cast<std::size_t>(i)] = rng.uniform(-1, 1);
        y[static_cast<std::size_t>(i)] = rng.uniform(-1, 1);
    }
    const double a = 1.7, b = -0.6;
    std::vector<double> combo(300);
    for (int i = 0; i < 300; ++i)
        combo[static_cast<std::size_t>(i)] =
            a * x[static_cast<std::size_t>(i)] + b * y[static_cast<std::size_t>(i)];
    const auto fx = filter.filtfilt(x);
    const auto fy = filter.filtfilt(y);
    const auto fc = filter.filtfilt(combo);
    for (int i = 0; i < 300; ++i)
        CHECK(std::fabs(fc[static_cast<std::size_t>(i)] - a * fx[static_cast<std::size_t>(i)] -
                        b * fy[static_cast<std::size_t>(i)]) <= 1e-9);
}

TEST_CASE("bandpass: invalid FilterSpec rejected") {
    CHECK_THROWS_AS(dsp::ButterworthBandpass({2.0, 0.1, 4, 10.0}), Error);
    CHECK_THROWS_AS(dsp::ButterworthBandpass({0.1, 6.0, 4, 10.0}), Error);
    CHECK_THROWS_AS(dsp::ButterworthBandpass({0.1, 2.0, 0, 10.0}), Error);
}

TEST_CASE("bandpass: series not longer than 3*order is an error") {
    dsp::ButterworthBandpass filter({0.1, 2.0, 4, 10.0});
    std::vector<double> x(12, 1.0);
    CHECK_THROWS_AS(filter.filtfilt(x), Error);
}

// ===========================================================================
// pca
// ===========================================================================

TEST_CASE("pca: rank-1 data reproduces the shared series with full explained variance") {
    Rng rng(46);
    const int T = 50, S = 4;
    std::vector<double> shape(T);
    for (auto& v : shape) v = rng.uniform(-1, 1);
    const std::vector<double> gains{0.5, -1.0, 2.0, 0.25};
    std::vector<double> data(static_cast<std::size_t>(T) * S);
    for (int t = 0; t < T; ++t)
        for (int s = 0; s < S; ++s)
            data[static_cast<std::size_t>(t) * S + s] = gains[static_cast<std::size_t>(s)] * shape[static_cast<std::size_t>(t)];

    auto result = dsp::pca_first_component(data, T, S);
    CHECK(result.explained_ratio() == doctest::Approx(1.0).epsilon(1e-9));

    // Output must be proportional to the shared series.
    double shape_mean = std::accumulate(shape.begin(), shape.end(), 0.0) / T;
    double num = 0, den_a = 0, den_b = 0;
    for (int t = 0; t < T; ++t) {
        const double a = result.series[static_cast<std::size_t>(t)];
        const double b = shape[static_cast<std::size_t>(t)] - shape_mean;
        num += a * b;
        den_a += a * a;
        den_b += b * b;
    }
    CHECK(std::fabs(num) / std::sqrt(den_a * den_b) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pca: picks the higher-variance of two orthogonal directions (2x2 oracle)") {
    const int T = 64;
    std::vector<double> u(T), v(T);
    for (int t = 0; t < T; ++t) {
        u[static_cast<std::size_t>(t)] = std::sqrt(2.0) * std::sin(2.0 * kPi * 4.0 * t / T);
        v[static_cast<std::size_t>(t)] = std::sqrt(2.0) * std::cos(2.0 * kPi * 8.0 * t / T);
    }
    // Columns: 2u (variance ~4) and v (variance ~1).
    std::vector<double> data(static_cast<std::size_t>(T) * 2);
    for (int t = 0; t < T; ++t) {
        data[static_cast<std::size_t>(t) * 2 + 0] = 2.0 * u[static_cast<std::size_t>(t)];
        data[static_cast<std::size_t>(t) * 2 + 1] = v[static_cast<std::size_t>(t)];
    }
    auto result = dsp::pca_first_component(data, T, 2);

    // Independent eigen decomposition of the 2x2 covariance.
    double c00 = 0, c01 = 0, c11 = 0;
    for (int t = 0; t < T; ++t) {
        c00 += 4.0 * u[static_cast<std::size_t>(t)] * u[static_cast<std::size_t>(t)];
        c01 += 2.0 * u[static_cast<std::size_t>(t)] * v[static_cast<std::size_t>(t)];
        c11 += v[static_cast<std::size_t>(t)] * v[static_cast<std::size_t>(t)];
    }
    c00 /= T - 1;
    c01 /= T - 1;
    c11 /= T - 1;
    const double tr = c00 + c11, det = c00 * c11 - c01 * c01;
    const double lambda_top = tr / 2.0 + std::sqrt(tr * tr / 4.0 - det);
    CHECK(result.top_eigenvalue == doctest::Approx(lambda_top).epsilon(1e-8));

    // Alignment with the dominant (2u) direction.
    double num = 0, den_a = 0, den_b = 0;
    for (int t = 0; t < T; ++t) {
        num += result.series[static_cast<std::size_t>(t)] * u[static_cast<std::size_t>(t)];
        den_a += result.series[static_cast<std::size_t>(t)] * result.series[static_cast<std::size_t>(t)];
        den_b += u[static_cast<std::size_t>(t)] * u[static_cast<std::size_t>(t)];
    }
    CHECK(std::fabs(num) / std::sqrt(den_a * den_b) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("pca: projection variance equals the top covariance eigenvalue within 1e-8") {
    Rng rng(47);
    const int T = 40, S = 6;
    std::vector<double> data(static_cast<std::size_t>(T) * S);
    for (auto& v : data) v = rng.uniform(-1, 1);
    auto result = dsp::pca_first_component(data, T, S);
    double mean = std::accumulate(result.series.begin(), result.series.end(), 0.0) / T;
    double var = 0;
    for (double v : result.series) var += (v - mean) * (v - mean);
    var /= (T - 1);
    CHECK(std::fabs(var - result.top_eigenvalue) <= 1e-8);
}

TEST_CASE("pca: invariant under subcarrier permutation") {
    Rng rng(48);
    const int T = 30, S = 5;
    std::vector<double> data(static_cast<std::size_t>(T) * S);
    for (auto& v : data) v = rng.uniform(-1, 1);
    const std::vector<int> perm{3, 0, 4, 1, 2};
    std::vector<double> permuted(data.size());
    for (int t = 0; t < T; ++t)
        for (int s = 0; s < S; ++s)
            permuted[static_cast<std::size_t>(t) * S + s] =
                data[static_cast<std::size_t>(t) * S + perm[static_cast<std::size_t>(s)]];
    auto a = dsp::pca_first_component(data, T, S);
    auto b = dsp::pca_first_component(permuted, T, S);
    for (int t = 0; t < T; ++t)
        CHECK(a.series[static_cast<std::size_t>(t)] ==
              doctest::Approx(b.series[static_cast<std::size_t>(t)]).epsilon(1e-9));
}

TEST_CASE("pca: zero total variance is a degenerate-window error") {
    std::vector<double> data(20 * 3, 0.25);
    CHECK_THROWS_WITH_AS(dsp::pca_first_component(data, 20, 3), doctest::Contains("degenerate"),
                         Error);
}

// ===========================================================================
// stft
// ===========================================================================

TEST_CASE("stft: zero input gives an all-zero spectrogram") {
    std::vector<double> x(200, 0.0);
    auto spec = dsp::stft(x, 10.0, 10.0, 1.0);
    CHECK(spec.frames == 11);
    CHECK(spec.bins == 51);
    for (double v : spec.mag) CHECK(v == 0.0);
}

TEST_CASE("stft: 0.3 Hz sinusoid peaks at the 0.3 Hz bin in every frame") {
    std::vector<double> x(200);
    for (int i = 0; i < 200; ++i) x[static_cast<std::size_t>(i)] = std::sin(2.0 * kPi * 0.3 * i / 10.0);
    auto spec = dsp::stft(x, 10.0, 10.0, 1.0);
    for (int f = 0; f < spec.frames; ++f) {
        int argmax = 1;  // skip DC
        for (int k = 2; k < spec.bins; ++k)
            if (spec.at(f, k) > spec.at(f, argmax)) argmax = k;
        CHECK(std::fabs(spec.bin_freqs[static_cast<std::size_t>(argmax)] - 0.3) <= 0.1);
    }
}

TEST_CASE("stft: frames equal an independent naive DFT of the Hann-windowed slice") {
    Rng rng(49);
    std::vector<double> x(200);
    for (auto& v : x) v = rng.uniform(-1, 1);
    auto spec = dsp::stft(x, 10.0, 10.0, 1.0);
    const int win = 100;
    for (int f = 0; f < spec.frames; ++f) {
        std::vector<double> frame(static_cast<std::size_t>(win));
        for (int i = 0; i < win; ++i)
            frame[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(f * 10 + i)] *
                                                 0.5 * (1.0 - std::cos(2.0 * kPi * i / (win - 1)));
        auto oracle = testutil::naive_dft_mag(frame, spec.bins);
        for (int k = 0; k < spec.bins; ++k)
            CHECK(std::fabs(spec.at(f, k) - oracle[static_cast<std::size_t>(k)]) <= 1e-9);
    }
}

TEST_CASE("stft: window longer than the series is an error") {
    std::vector<double> x(50, 1.0);
    CHECK_THROWS_AS(dsp::stft(x, 10.0, 10.0, 1.0), Error);
}

// ===========================================================================
// preprocess_window shapes
// ===========================================================================

TEST_CASE("pipeline: Table-style defaults give 200-sample series and 11x51 spectrograms x P") {
    Rng rng(50);
    csi::CsiWindow w;
    w.time_steps = 200;
    w.pairs = 4;
    w.subcarriers = 8;
    w.label = csi::kClassNormal;
    w.samples.resize(static_cast<std::size_t>(200) * 4 * 8);
    for (auto& v : w.samples) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};

    auto features = dsp::preprocess_window(w, dsp::PipelineParams{});
    REQUIRE(features.series.size() == 4);
    REQUIRE(features.specs.size() == 4);
    for (int p = 0; p < 4; ++p) {
        CHECK(features.series[static_cast<std::size_t>(p)].values.size() == 200);
        CHECK(features.specs[static_cast<std::size_t>(p)].frames == 11);
        CHECK(features.specs[static_cast<std::size_t>(p)].bins == 51);
    }
}
