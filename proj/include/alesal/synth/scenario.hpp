// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "alesal/csi/types.hpp"

namespace alesal::synth {

// Piecewise-linear scale over time; empty means a constant 1. Used to
// collapse the chest displacement amplitude during apnea intervals.
struct Envelope {
    std::vector<std::pair<double, double>> points;  // (time_s, scale), sorted by time

    double at(double t) const {
        if (points.empty()) return 1.0;
        if (t <= points.front().first) return points.front().second;
        for (std::size_t i = 0; i + 1 < points.size(); ++i) {
            if (t <= points[i + 1].first) {
                const auto& [t0, s0] = points[i];
                const auto& [t1, s1] = points[i + 1];
                if (t1 <= t0) return s1;
                return s0 + (s1 - s0) * (t - t0) / (t1 - t0);
            }
        }
        return points.back().second;
    }
};

struct StaticDisplacement {};

struct SinusoidDisplacement {
    double amplitude_m = 0.0;
    double freq_hz = 0.0;
    double phase_rad = 0.0;
    Envelope envelope;  // amplitude scale over time
};

// Abrupt oscillation confined to [onset, onset + duration); models a limb
// jerk. Hard on/off edges are intentional.
struct BurstDisplacement {
    double onset_s = 0.0;
    double duration_s = 0.0;
    double amplitude_m = 0.0;
    double jerk_freq_hz = 0.0;
};

using Displacement = std::variant<StaticDisplacement, SinusoidDisplacement, BurstDisplacement>;

double displacement_at(const Displacement& d, double t);
double displacement_max_freq(const Displacement& d);

// One multipath component: complex attenuation and a time-varying
// propagation distance base + offset(t).
struct PathComponent {
    std::complex<double> attenuation{1.0, 0.0};
    double base_distance_m = 3.0;
    Displacement displacement = StaticDisplacement{};
};

struct PairPaths {
    std::vector<PathComponent> static_paths;
    std::vector<PathComponent> chest_paths;
    std::vector<PathComponent> limb_paths;

    std::size_t total() const {
        return static_paths.size() + chest_paths.size() + limb_paths.size();
    }
};

// Full rendering scenario. Per-subcarrier wavelengths derive from
// carrier + spacing * (i - S/2); single_lambda forces the carrier
// wavelength for every subcarrier.
struct ScenarioSpec {
    int pairs = 4;
    int subcarriers = 114;
    double carrier_hz = 5e9;
    double subcarrier_spacing_hz = 312.5e3;
    bool single_lambda = false;
    double noise_std = 0.0;  // RMS magnitude of the complex AWGN
    std::vector<PairPaths> pair_paths;
    std::vector<csi::LabelSpan> schedule;
};

// Class-conditional activation plan: what the chest does and when limbs
// fire. Burst timing is shared across pairs (one body, many reflections).
struct BurstWindow {
    double onset_s = 0.0;
    double duration_s = 0.0;
    double jerk_freq_hz = 1.5;
};

struct SchedulePlan {
    Envelope chest_envelope;
    std::vector<BurstWindow> limb_bursts;
    std::vector<std::pair<double, double>> event_spans;  // apnea hold or burst intervals
};

}  // namespace alesal::synth
