// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "alesal/csi/types.hpp"
#include "alesal/synth/scenario.hpp"

namespace alesal::synth {

// Renders the multipath channel: for every sample time t, pair p and
// subcarrier i,
//   h_{i,p}(t) = sum_l A_l exp(-j 2 pi d_l(t) / lambda_i) + n
// with complex AWGN of RMS magnitude noise_std. Records are emitted at
// exactly `rate`, timestamps k / rate, sorted by (time, pair). Throws on an
// empty path set, non-finite spec values, or rate below twice the fastest
// displacement frequency.
csi::Session render_csi(const ScenarioSpec& spec, double duration_sec, double rate_hz,
                        std::uint64_t seed);

}  // namespace alesal::synth
