// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "alesal/common/error.hpp"
#include "alesal/dsp/features.hpp"

namespace alesal::dsp {

// Magnitude STFT with a symmetric Hann window of window_sec * rate samples,
// hopping hop_sec * rate samples, one-sided bins covering [0, rate/2].
// Both durations must be integral sample counts; a window longer than the
// series is an error.
Spectrogram stft(const std::vector<double>& series, double rate, double window_sec, double hop_sec);

}  // namespace alesal::dsp
