// SPDX-License-Identifier: Apache-2.0
#include "alesal/csi/windowize.hpp"

#include <array>
#include <cmath>

namespace alesal::csi {

namespace {

// Sample count for a duration that must be an integral number of samples.
int integral_samples(double seconds, double rate, const char* what) {
    const double exact = seconds * rate;
    const int n = static_cast<int>(std::llround(exact));
    if (n < 1 || std::fabs(exact - n) > 1e-9)
        throw Error(std::string("windowize: ") + what + " * rate must be a positive integer, got " +
                    std::to_string(exact));
    return n;
}

}  // namespace

std::vector<CsiWindow> windowize(const std::vector<UniformSeries>& pairs, const SessionMeta& meta,
                                 double window_sec, double hop_sec) {
    validate_meta(meta);
    if (static_cast<int>(pairs.size()) != meta.pairs)
        throw Error("windowize: got " + std::to_string(pairs.size()) + " streams, meta says P=" +
                    std::to_string(meta.pairs));
    const UniformSeries& first = pairs.front();
    for (const auto& u : pairs) {
        if (u.rate != first.rate || u.samples != first.samples || u.start != first.start ||
            u.subcarriers != meta.subcarriers)
            throw Error("windowize: per-pair streams must share grid and subcarrier count");
    }

    const double rate = first.rate;
    const int wlen = integral_samples(window_sec, rate, "window");
    const int hop = integral_samples(hop_sec, rate, "hop");

    std::vector<CsiWindow> windows;
    if (first.samples < wlen) return windows;

    for (int offset = 0; offset + wlen <= first.samples; offset += hop) {
        const double wstart = first.start + offset / rate;
        const double wend = wstart + window_sec;

        // Coverage of each class over the window span.
        std::array<double, kNumClasses> coverage{};
        double total = 0.0;
        for (const auto& span : meta.label_track) {
            const double ov = std::min(span.end, wend) - std::max(span.start, wstart);
            if (ov > 0) {
                coverage[static_cast<std::size_t>(span.class_id)] += ov;
                total += ov;
            }
        }
        if (total <= 0) continue;  // no label coverage: drop

        double best = coverage[0];
        for (int c = 1; c < kNumClasses; ++c)
            best = std::max(best, coverage[static_cast<std::size_t>(c)]);
        int label = 0;
        for (int c = 0; c < kNumClasses; ++c)
            if (coverage[static_cast<std::size_t>(c)] >= best - 1e-9) label = c;

        CsiWindow w;
        w.start = wstart;
        w.time_steps = wlen;
        w.pairs = meta.pairs;
        w.subcarriers = meta.subcarriers;
        w.label = label;
        w.samples.resize(static_cast<std::size_t>(wlen) * meta.pairs * meta.subcarriers);
        for (int t = 0; t < wlen; ++t)
            for (int p = 0; p < meta.pairs; ++p)
                for (int s = 0; s < meta.subcarriers; ++s)
                    w.at(t, p, s) = pairs[static_cast<std::size_t>(p)].at(offset + t, s);
        windows.push_back(std::move(w));
    }
    return windows;
}

}  // namespace alesal::csi
