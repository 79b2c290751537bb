// SPDX-License-Identifier: Apache-2.0
#include "alesal/dsp/stft.hpp"

#include <cmath>

namespace alesal::dsp {

namespace {

constexpr double kPi = 3.14159265358979323846;

int integral_samples(double seconds, double rate, const char* what) {
    const double exact = seconds * rate;
    const int n = static_cast<int>(std::llround(exact));
    if (n < 1 || std::fabs(exact - n) > 1e-9)
        throw Error(std::string("stft: ") + what + " * rate must be a positive integer, got " +
                    std::to_string(exact));
    return n;
}

}  // namespace

Spectrogram stft(const std::vector<double>& series, double rate, double window_sec, double hop_sec) {
    if (!(rate > 0)) throw Error("stft: rate must be positive");
    const int win = integral_samples(window_sec, rate, "window");
    const int hop = integral_samples(hop_sec, rate, "hop");
    if (win < 2) throw Error("stft: window must span at least 2 samples");
    if (win > static_cast<int>(series.size()))
        throw Error("stft: window of " + std::to_string(win) + " samples exceeds series length " +
                    std::to_string(series.size()));

    const int frames = (static_cast<int>(series.size()) - win) / hop + 1;
    const int bins = win / 2 + 1;

    // Symmetric Hann window and a twiddle table reused across frames.
    std::vector<double> hann(static_cast<std::size_t>(win));
    for (int i = 0; i < win; ++i)
        hann[static_cast<std::size_t>(i)] = 0.5 * (1.0 - std::cos(2.0 * kPi * i / (win - 1)));

    std::vector<double> cos_tab(static_cast<std::size_t>(bins) * win);
    std::vector<double> sin_tab(static_cast<std::size_t>(bins) * win);
    for (int k = 0; k < bins; ++k)
        for (int i = 0; i < win; ++i) {
            const double ang = -2.0 * kPi * k * i / static_cast<double>(win);
            cos_tab[static_cast<std::size_t>(k) * win + i] = std::cos(ang);
            sin_tab[static_cast<std::size_t>(k) * win + i] = std::sin(ang);
        }

    Spectrogram out;
    out.frames = frames;
    out.bins = bins;
    out.mag.resize(static_cast<std::size_t>(frames) * bins);
    out.frame_times.resize(static_cast<std::size_t>(frames));
    out.bin_freqs.resize(static_cast<std::size_t>(bins));
    for (int k = 0; k < bins; ++k)
        out.bin_freqs[static_cast<std::size_t>(k)] = k * rate / win;

    std::vector<double> frame(static_cast<std::size_t>(win));
    for (int f = 0; f < frames; ++f) {
        const int offset = f * hop;
        out.frame_times[static_cast<std::size_t>(f)] = (offset + (win - 1) / 2.0) / rate;
        for (int i = 0; i < win; ++i)
            frame[static_cast<std::size_t>(i)] =
                series[static_cast<std::size_t>(offset + i)] * hann[static_cast<std::size_t>(i)];
        for (int k = 0; k < bins; ++k) {
            const double* ct = cos_tab.data() + static_cast<std::size_t>(k) * win;
            const double* st = sin_tab.data() + static_cast<std::size_t>(k) * win;
            double re = 0.0, im = 0.0;
            for (int i = 0; i < win; ++i) {
                re += frame[static_cast<std::size_t>(i)] * ct[i];
                im += frame[static_cast<std::size_t>(i)] * st[i];
            }
            out.at(f, k) = std::sqrt(re * re + im * im);
        }
    }
    return out;
}

}  // namespace alesal::dsp
