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

#include "wpt/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace wpt::baselines {

std::string to_string(BaselineKind k)
{
    return k == BaselineKind::energy_beamforming ? "energy_beamforming" : "single_beam";
}

strategy::TwoPointPolicy BaselinePolicy::as_policy() const
{
    strategy::TwoPointPolicy pol;
    pol.kind = to_string(kind);
    pol.w1 = pol.w2 = w;
    pol.nu1 = pol.nu2 = pol.p_x = p_x;
    pol.beta = 1.0;
    pol.avg_phi = avg_phi;
    return pol;
}

BaselinePolicy energy_beamforming_policy(const ChannelMatrix& g, const RectennaParams& p, double p_x)
{
    if (!(p_x > 0.0) || !std::isfinite(p_x))
        throw std::domain_error("energy beamforming: budget must be positive");
    if (g.gains().norm() == 0.0)
        throw std::domain_error("energy beamforming: zero channel");
    BaselinePolicy b;
    b.kind = BaselineKind::energy_beamforming;
    b.p_x = p_x;
    b.w = beamopt::energy_beam(g, p_x);
    b.avg_phi = total_power(p, g, b.w);
    return b;
}

BaselinePolicy single_beam_policy(const ChannelMatrix& g, const RectennaParams& p, double p_x,
                                  const beamopt::ScaSettings& s, int n_restarts, std::uint64_t seed)
{
    if (!(p_x > 0.0) || !std::isfinite(p_x))
        throw std::domain_error("single beam: budget must be positive");
    const auto pt = beamopt::phi_of_nu(g, p, p_x, s, n_restarts, seed);
    BaselinePolicy b;
    b.kind = BaselineKind::single_beam;
    b.p_x = p_x;
    b.w = pt.w;
    b.avg_phi = pt.phi;
    return b;
}

}  // namespace wpt::baselines
