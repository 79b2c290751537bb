// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "alesal/csi/types.hpp"

namespace alesal::csi {

// Cuts resampled per-pair streams (index = pair id, common grid) into dense
// labeled windows of window_sec seconds, starting at hop multiples.
//
// Labeling: the class covering the largest part of the window span wins;
// exact ties resolve toward the more severe class (plmd > apnea > normal).
// Windows with no label coverage at all are dropped. A stream shorter than
// one window yields an empty result.
std::vector<CsiWindow> windowize(const std::vector<UniformSeries>& pairs, const SessionMeta& meta,
                                 double window_sec, double hop_sec);

}  // namespace alesal::csi
