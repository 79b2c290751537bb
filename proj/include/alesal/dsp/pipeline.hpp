// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "alesal/csi/types.hpp"
#include "alesal/dsp/butterworth.hpp"
#include "alesal/dsp/features.hpp"

namespace alesal::dsp {

// Preprocessing configuration. Defaults: 10 Hz resampling, 20 s windows
// (non-overlapping for training), [0.1, 2] Hz order-4 band pass, 10 s STFT
// window with 1 s hop (11 frames per window).
struct PipelineParams {
    double rate_hz = 10.0;
    double window_sec = 20.0;
    double hop_sec = 20.0;
    double band_lo_hz = 0.1;
    double band_hi_hz = 2.0;
    int filter_order = 4;
    double stft_window_sec = 10.0;
    double stft_hop_sec = 1.0;
    bool per_window_normalize = false;

    FilterSpec filter_spec() const { return {band_lo_hz, band_hi_hz, filter_order, rate_hz}; }
    void validate() const;
};

// Full per-window chain: amplitude -> per-instant min-max normalize ->
// per-subcarrier zero-phase band pass -> per-pair PCA -> per-pair STFT.
// Produces one (series, spectrogram) pair per antenna pair.
WindowFeatures preprocess_window(const csi::CsiWindow& window, const PipelineParams& params);

// Resample -> windowize -> preprocess for a whole session. Window ids count
// from id_base in emission order.
std::vector<WindowFeatures> preprocess_session(const csi::Session& session,
                                               const PipelineParams& params,
                                               std::uint32_t id_base = 0);

}  // namespace alesal::dsp
