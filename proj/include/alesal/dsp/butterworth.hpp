// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <vector>

#include "alesal/common/error.hpp"

namespace alesal::dsp {

// Band-pass design parameters. `order` is the order of the low-pass
// prototype; the band-pass transform doubles the pole count, so order 4
// yields an 8-pole filter (>= 20 dB rejection one octave outside the band).
struct FilterSpec {
    double b_min_hz = 0.1;
    double b_max_hz = 2.0;
    int order = 4;
    double rate_hz = 10.0;

    void validate() const {
        if (order < 1) throw Error("filter: order must be >= 1");
        if (!(b_min_hz > 0) || !(b_min_hz < b_max_hz) || !(b_max_hz < rate_hz / 2))
            throw Error("filter: need 0 < b_min < b_max < rate/2");
    }
};

struct Biquad {
    double b0 = 0, b1 = 0, b2 = 0;  // numerator
    double a1 = 0, a2 = 0;          // denominator (a0 = 1)
};

// Butterworth band-pass as a cascade of second-order sections, designed by
// pre-warped bilinear transform of the analog prototype. Zero-phase
// application runs the cascade forward and backward with odd-reflection
// padding of 3 * order samples and steady-state initial conditions.
class ButterworthBandpass {
public:
    explicit ButterworthBandpass(const FilterSpec& spec);

    const FilterSpec& spec() const { return spec_; }
    const std::vector<Biquad>& sections() const { return sections_; }

    // Frequency response H(e^{j 2 pi f / fs}) of the single-pass cascade.
    std::complex<double> response(double f_hz) const;

    // One causal pass with steady-state initial conditions for x[0].
    std::vector<double> filter(std::span<const double> x) const;

    // Forward-backward (zero-phase) pass; |effective gain| = |H|^2.
    // Requires x.size() > 3 * order.
    std::vector<double> filtfilt(std::span<const double> x) const;

private:
    FilterSpec spec_;
    std::vector<Biquad> sections_;

    void apply_inplace(std::vector<double>& x) const;
};

}  // namespace alesal::dsp
