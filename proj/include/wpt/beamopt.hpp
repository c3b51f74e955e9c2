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

#ifndef WPT_BEAMOPT_HPP
#define WPT_BEAMOPT_HPP

#include "wpt/channel.hpp"
#include "wpt/conic.hpp"
#include "wpt/linalg.hpp"
#include "wpt/rectenna.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpt::beamopt {

/// Raised when the conic solver neither proves nor disproves feasibility.
class SolverFailure : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Which rectennas are driven into saturation at a given power level.
struct SaturationPlan {
    std::vector<int> order;  ///< rectenna indices by descending channel norm (0-based)
    int k_star = 0;
    std::vector<int> u;  ///< per rectenna (original index): 0 saturated, 1 unsaturated
    /// Cell the SCA runs on (k_star unless a smaller prefix was tried).
    int cell_k = 0;
    /// Feasible point of cell cell_k.
    CMatrix feasible_w;
    /// Largest relative violation of feasible_w on its cell (<= 0 when inside).
    double violation = 0.0;
    /// Feasible points and violations of every cell k = 0..k_star.
    std::vector<CMatrix> cell_points;
    std::vector<double> cell_violations;

    /// Copy that runs on the cell with k saturated rectennas, k <= k_star.
    SaturationPlan with_cell(int k) const;
};

struct ScaSettings {
    /// Stop when the objective gain of one step is below eps_sca * h.
    double eps_sca = 1e-6;
    int max_iter = 200;
    conic::SdpSettings sdp = relaxed_sdp();

    static conic::SdpSettings relaxed_sdp()
    {
        conic::SdpSettings s;
        s.relax = 1e-8;
        return s;
    }
};

struct PhiPoint {
    double nu = 0.0;
    double phi = 0.0;  ///< total_power of w
    CVector w;
    SaturationPlan plan;
    int sca_iters = 0;
    /// Accepted objective values h(0), h(1), ... of the run that produced w.
    std::vector<double> h_history;
    bool converged = true;
    /// Human-readable notes on anything unusual (empty when clean).
    std::string diagnostics;
};

/// Stable descending sort of rows by norm; ties keep ascending index.
std::vector<int> sort_channels(const ChannelMatrix& g);

/// Constraint set whose first k rows (in sorted order) are held at or above
/// A_s^2 and the rest at or below it, with Tr W <= nu.
conic::SdpProblem saturation_cell(const ChannelMatrix& g, const RectennaParams& p, double nu,
                                  const std::vector<int>& order, int k);

/// Largest k whose saturation cell is feasible, searched upwards from k = 1
/// and stopping at the first infeasible k. Throws SolverFailure when a solve
/// hits its iteration cap.
SaturationPlan find_saturation_count(const ChannelMatrix& g, const RectennaParams& p, double nu,
                                     const conic::SdpSettings& sdp = {});

/// 0.5 (nu/N_t) I + 0.5 nu v v^H for a seeded random unit vector v.
CMatrix initial_matrix(int n_t, double nu, std::uint64_t seed);

/// Successive linear maximization of the harvested power over the cell of
/// `plan`. Steps that would lower the objective are rejected, so h_history
/// never decreases. W_init is moved into the cell along the segment towards
/// plan.feasible_w when needed.
PhiPoint sca_maximize(const ChannelMatrix& g, const RectennaParams& p, double nu,
                      const SaturationPlan& plan, const CMatrix& w_init, const ScaSettings& s = {});

/// sqrt(nu) times the dominant unit eigenvector of G^H G, canonical phase.
CVector energy_beam(const ChannelMatrix& g, double nu);

/// Best of n_restarts seeded SCA runs on the k_star cell, one further run on
/// each smaller cell k < k_star, and the energy beam at the same power.
/// The returned plan is the cell of the winning run. Deterministic in
/// (g, p, nu, seed).
PhiPoint phi_of_nu(const ChannelMatrix& g, const RectennaParams& p, double nu,
                   const ScaSettings& s = {}, int n_restarts = 3, std::uint64_t seed = 0);

}  // namespace wpt::beamopt

#endif  // WPT_BEAMOPT_HPP
