// SPDX-License-Identifier: Apache-2.0
//
// wpt-mimo: transmit strategy design for MIMO wireless power transfer
// Copyright (C) 2026 The wpt-mimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef WPT_BASELINES_HPP
#define WPT_BASELINES_HPP

#include "wpt/beamopt.hpp"
#include "wpt/strategy.hpp"

#include <cstdint>
#include <string>

namespace wpt::baselines {

enum class BaselineKind { energy_beamforming, single_beam };

std::string to_string(BaselineKind k);

/// Deterministic single-beam transmission at the full budget.
struct BaselinePolicy {
    CVector w;  ///< ||w||^2 = p_x
    double p_x = 0.0;
    double avg_phi = 0.0;
    BaselineKind kind = BaselineKind::energy_beamforming;

    /// Same record as the two-point policy, with both beams equal and beta = 1.
    strategy::TwoPointPolicy as_policy() const;
};

/// Beam chosen for a linear harvester (dominant eigenvector of G^H G),
/// scored under the nonlinear model.
BaselinePolicy energy_beamforming_policy(const ChannelMatrix& g, const RectennaParams& p, double p_x);

/// The optimized beam at power p_x, scored by its own harvested power.
BaselinePolicy single_beam_policy(const ChannelMatrix& g, const RectennaParams& p, double p_x,
                                  const beamopt::ScaSettings& s = {}, int n_restarts = 3,
                                  std::uint64_t seed = 0);

}  // namespace wpt::baselines

#endif  // WPT_BASELINES_HPP
