// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "alesal/common/error.hpp"

namespace alesal::csi {

// Sleep-event classes. Severity increases with the id; ties in window
// labeling resolve toward the higher id so rare events are not diluted.
inline constexpr int kClassNormal = 0;
inline constexpr int kClassApnea = 1;
inline constexpr int kClassPlmd = 2;
inline constexpr int kNumClasses = 3;

const char* class_name(int class_id);
int class_id_from_name(const std::string& name);

// One timestamped CSI snapshot of a single antenna pair: S complex
// frequency-response values, one per subcarrier.
struct CsiRecord {
    double timestamp = 0.0;  // seconds, non-negative
    int pair = 0;
    std::vector<std::complex<double>> values;
};

struct LabelSpan {
    double start = 0.0;
    double end = 0.0;
    int class_id = kClassNormal;
};

struct SessionMeta {
    int pairs = 0;
    int subcarriers = 0;
    double nominal_rate = 0.0;  // Hz as reported by the capture, not enforced
    std::vector<LabelSpan> label_track;
};

struct Session {
    SessionMeta meta;
    std::vector<CsiRecord> records;
};

// One antenna pair resampled onto a uniform grid: values[t * S + s].
struct UniformSeries {
    int pair = 0;
    int subcarriers = 0;
    double start = 0.0;
    double rate = 0.0;
    int samples = 0;
    std::vector<std::complex<double>> values;
    std::vector<std::pair<double, double>> gaps;  // spans longer than 2/rate in the raw stream

    std::complex<double>& at(int t, int s) {
        return values[static_cast<std::size_t>(t) * subcarriers + s];
    }
    std::complex<double> at(int t, int s) const {
        return values[static_cast<std::size_t>(t) * subcarriers + s];
    }
};

// Dense labeled window: samples[t][p][s], time dimension exactly Z * f_r.
struct CsiWindow {
    double start = 0.0;
    int time_steps = 0;
    int pairs = 0;
    int subcarriers = 0;
    int label = -1;
    std::vector<std::complex<double>> samples;

    std::complex<double>& at(int t, int p, int s) {
        return samples[(static_cast<std::size_t>(t) * pairs + p) * subcarriers + s];
    }
    std::complex<double> at(int t, int p, int s) const {
        return samples[(static_cast<std::size_t>(t) * pairs + p) * subcarriers + s];
    }
};

// Throws on malformed metadata (non-positive dims, overlapping or unsorted
// label spans, unknown class ids).
void validate_meta(const SessionMeta& meta);

}  // namespace alesal::csi
