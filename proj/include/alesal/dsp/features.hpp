// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace alesal::dsp {

// One pair's PCA-reduced amplitude waveform; the time-domain model input.
struct PairSeries {
    int pair = 0;
    double rate = 0.0;  // Hz
    std::vector<double> values;
};

// Magnitude STFT of a PairSeries; the frequency-domain model input.
// Values are double in memory; the persisted feature blob and the network
// input quantize to float32 identically.
struct Spectrogram {
    int frames = 0;
    int bins = 0;
    std::vector<double> mag;          // [frames x bins], non-negative
    std::vector<double> frame_times;  // frame centers, seconds from series start
    std::vector<double> bin_freqs;    // Hz, ascending

    double at(int t, int f) const { return mag[static_cast<std::size_t>(t) * bins + f]; }
    double& at(int t, int f) { return mag[static_cast<std::size_t>(t) * bins + f]; }
};

// Preprocessed model inputs for one labeled window: per-pair series and
// spectrograms. event_spans / weak_pair are synthetic-generator metadata
// (burst or apnea intervals in window-relative seconds; index of a pair
// rendered with attenuated chest reflection) used by diagnostics; both stay
// empty for data without generator ground truth.
struct WindowFeatures {
    std::uint32_t window_id = 0;
    int label = -1;
    std::vector<PairSeries> series;
    std::vector<Spectrogram> specs;
    std::vector<std::pair<double, double>> event_spans;
    int weak_pair = -1;
};

}  // namespace alesal::dsp
