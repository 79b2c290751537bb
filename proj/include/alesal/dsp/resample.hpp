// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "alesal/csi/types.hpp"

namespace alesal::dsp {

// Resamples one pair's record stream onto a uniform grid at f_r via
// per-subcarrier linear interpolation of real and imaginary parts. The grid
// starts at the first timestamp and never extrapolates past the last one.
// Raw gaps longer than 2/f_r are flagged in the result. Throws on fewer
// than two records or duplicate timestamps.
csi::UniformSeries resample(const std::vector<csi::CsiRecord>& pair_records, int subcarriers,
                            double f_r);

// Resamples every pair of a session onto a common grid (starting at the
// latest first-timestamp over pairs, ending at the earliest last). Result is
// indexed by pair id.
std::vector<csi::UniformSeries> resample_session(const csi::Session& session, double f_r);

}  // namespace alesal::dsp
