// SPDX-License-Identifier: Apache-2.0
#include "alesal/dsp/pipeline.hpp"

#include <cmath>

#include "alesal/csi/windowize.hpp"
#include "alesal/dsp/normalize.hpp"
#include "alesal/dsp/pca.hpp"
#include "alesal/dsp/resample.hpp"
#include "alesal/dsp/stft.hpp"

namespace alesal::dsp {

void PipelineParams::validate() const {
    if (!(rate_hz > 0) || !(window_sec > 0) || !(hop_sec > 0))
        throw Error("pipeline: rate, window and hop must be positive");
    filter_spec().validate();
    if (!(stft_window_sec > 0) || !(stft_hop_sec > 0) || stft_window_sec > window_sec)
        throw Error("pipeline: STFT window must be positive and fit inside the analysis window");
}

WindowFeatures preprocess_window(const csi::CsiWindow& window, const PipelineParams& params) {
    params.validate();
    if (window.time_steps < 2 || window.pairs < 1 || window.subcarriers < 1)
        throw Error("pipeline: window must be dense [T x P x S] with T >= 2");

    const int T = window.time_steps, P = window.pairs, S = window.subcarriers;
    const ButterworthBandpass bandpass(params.filter_spec());

    WindowFeatures out;
    out.label = window.label;
    out.series.reserve(static_cast<std::size_t>(P));
    out.specs.reserve(static_cast<std::size_t>(P));

    std::vector<double> amplitudes(static_cast<std::size_t>(T) * S);
    std::vector<double> filtered(static_cast<std::size_t>(T) * S);
    std::vector<double> column(static_cast<std::size_t>(T));
    for (int p = 0; p < P; ++p) {
        for (int t = 0; t < T; ++t)
            for (int s = 0; s < S; ++s)
                amplitudes[static_cast<std::size_t>(t) * S + s] = std::abs(window.at(t, p, s));

        const NormalizedWindow norm =
            normalize_pair(amplitudes, T, S, params.per_window_normalize);

        for (int s = 0; s < S; ++s) {
            for (int t = 0; t < T; ++t) column[static_cast<std::size_t>(t)] = norm.at(t, s);
            const std::vector<double> f = bandpass.filtfilt(column);
            for (int t = 0; t < T; ++t) filtered[static_cast<std::size_t>(t) * S + s] = f[static_cast<std::size_t>(t)];
        }

        PcaResult pca = pca_first_component(filtered, T, S);

        PairSeries series;
        series.pair = p;
        series.rate = params.rate_hz;
        series.values = std::move(pca.series);
        out.specs.push_back(stft(series.values, params.rate_hz, params.stft_window_sec,
                                 params.stft_hop_sec));
        out.series.push_back(std::move(series));
    }
    return out;
}

std::vector<WindowFeatures> preprocess_session(const csi::Session& session,
                                               const PipelineParams& params,
                                               std::uint32_t id_base) {
    params.validate();
    const auto streams = resample_session(session, params.rate_hz);
    const auto windows = csi::windowize(streams, session.meta, params.window_sec, params.hop_sec);
    std::vector<WindowFeatures> out;
    out.reserve(windows.size());
    for (const auto& w : windows) {
        WindowFeatures f = preprocess_window(w, params);
        f.window_id = id_base + static_cast<std::uint32_t>(out.size());
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace alesal::dsp
