// SPDX-License-Identifier: Apache-2.0
#include "alesal/dsp/butterworth.hpp"

#include <algorithm>
#include <cmath>

namespace alesal::dsp {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Steady-state DF2T state (z1, z2) of one section for a unit step input.
void section_step_state(const Biquad& s, double& z1, double& z2) {
    const double dc = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    z2 = s.b2 - s.a2 * dc;
    z1 = s.b1 + z2 - s.a1 * dc;
}

double section_dc_gain(const Biquad& s) {
    return (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
}

}  // namespace

ButterworthBandpass::ButterworthBandpass(const FilterSpec& spec) : spec_(spec) {
    spec_.validate();
    const int n = spec_.order;
    const double fs = spec_.rate_hz;

    // Pre-warped analog band edges and low-pass -> band-pass constants.
    const double W1 = 2.0 * fs * std::tan(kPi * spec_.b_min_hz / fs);
    const double W2 = 2.0 * fs * std::tan(kPi * spec_.b_max_hz / fs);
    const double bw = W2 - W1;
    const double w0sq = W1 * W2;

    // Analog low-pass prototype poles on the unit circle's left half.
    std::vector<std::complex<double>> poles;
    poles.reserve(static_cast<std::size_t>(2 * n));
    for (int k = 0; k < n; ++k) {
        const double theta = kPi * (2.0 * k + n + 1.0) / (2.0 * n);
        const std::complex<double> p(std::cos(theta), std::sin(theta));
        // Each prototype pole maps to two band-pass poles.
        const std::complex<double> bp = bw * p * 0.5;
        const std::complex<double> disc = std::sqrt(bp * bp - w0sq);
        poles.push_back(bp + disc);
        poles.push_back(bp - disc);
    }

    // Bilinear transform to the z-plane.
    const double fs2 = 2.0 * fs;
    std::vector<std::complex<double>> zpoles;
    zpoles.reserve(poles.size());
    for (const auto& s : poles) zpoles.push_back((fs2 + s) / (fs2 - s));

    // Deterministic conjugate pairing: keep upper-half-plane and real poles,
    // sorted, and pair each complex pole with its conjugate.
    std::vector<std::complex<double>> upper, real_poles;
    for (const auto& z : zpoles) {
        if (z.imag() > 1e-12)
            upper.push_back(z);
        else if (std::fabs(z.imag()) <= 1e-12)
            real_poles.push_back(z);
    }
    auto by_re_im = [](const std::complex<double>& a, const std::complex<double>& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    std::sort(upper.begin(), upper.end(), by_re_im);
    std::sort(real_poles.begin(), real_poles.end(), by_re_im);

    sections_.clear();
    for (const auto& z : upper) {
        Biquad s;
        s.b0 = 1.0;
        s.b1 = 0.0;
        s.b2 = -1.0;  // zeros at z = +1 and z = -1
        s.a1 = -2.0 * z.real();
        s.a2 = std::norm(z);
        sections_.push_back(s);
    }
    for (std::size_t i = 0; i + 1 < real_poles.size(); i += 2) {
        Biquad s;
        s.b0 = 1.0;
        s.b1 = 0.0;
        s.b2 = -1.0;
        s.a1 = -(real_poles[i].real() + real_poles[i + 1].real());
        s.a2 = real_poles[i].real() * real_poles[i + 1].real();
        sections_.push_back(s);
    }
    if (static_cast<int>(sections_.size()) != n)
        throw Error("filter: internal pole pairing failed");

    // Normalize to unit gain at the (pre-warp-exact) center frequency.
    const double f_peak = fs / kPi * std::atan(std::sqrt(w0sq) / fs2);
    const double g = std::abs(response(f_peak));
    const double per_section = std::pow(1.0 / g, 1.0 / n);
    for (auto& s : sections_) {
        s.b0 *= per_section;
        s.b1 *= per_section;
        s.b2 *= per_section;
    }
}

std::complex<double> ButterworthBandpass::response(double f_hz) const {
    const std::complex<double> zinv =
        std::exp(std::complex<double>(0.0, -2.0 * kPi * f_hz / spec_.rate_hz));
    std::complex<double> h = 1.0;
    for (const auto& s : sections_) {
        const std::complex<double> num = s.b0 + (s.b1 + s.b2 * zinv) * zinv;
        const std::complex<double> den = 1.0 + (s.a1 + s.a2 * zinv) * zinv;
        h *= num / den;
    }
    return h;
}

void ButterworthBandpass::apply_inplace(std::vector<double>& x) const {
    if (x.empty()) return;
    double level = x.front();  // steady-state input level entering each section
    for (const auto& s : sections_) {
        double z1, z2;
        section_step_state(s, z1, z2);
        z1 *= level;
        z2 *= level;
        for (double& v : x) {
            const double y = s.b0 * v + z1;
            z1 = s.b1 * v - s.a1 * y + z2;
            z2 = s.b2 * v - s.a2 * y;
            v = y;
        }
        level *= section_dc_gain(s);
    }
}

std::vector<double> ButterworthBandpass::filter(std::span<const double> x) const {
    std::vector<double> out(x.begin(), x.end());
    apply_inplace(out);
    return out;
}

std::vector<double> ButterworthBandpass::filtfilt(std::span<const double> x) const {
    const int pad = 3 * spec_.order;
    if (static_cast<int>(x.size()) <= pad)
        throw Error("filter: series length must exceed 3 * order = " + std::to_string(pad));

    // Odd reflection about the end points.
    std::vector<double> ext;
    ext.reserve(x.size() + 2 * static_cast<std::size_t>(pad));
    for (int i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[static_cast<std::size_t>(i)]);
    ext.insert(ext.end(), x.begin(), x.end());
    const std::size_t last = x.size() - 1;
    for (int i = 1; i <= pad; ++i) ext.push_back(2.0 * x[last] - x[last - static_cast<std::size_t>(i)]);

    apply_inplace(ext);
    std::reverse(ext.begin(), ext.end());
    apply_inplace(ext);
    std::reverse(ext.begin(), ext.end());

    return std::vector<double>(ext.begin() + pad, ext.begin() + pad + static_cast<std::ptrdiff_t>(x.size()));
}

}  // namespace alesal::dsp
