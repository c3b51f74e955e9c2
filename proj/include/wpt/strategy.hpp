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

#ifndef WPT_STRATEGY_HPP
#define WPT_STRATEGY_HPP

#include "wpt/beamopt.hpp"
#include "wpt/channel.hpp"
#include "wpt/linalg.hpp"
#include "wpt/rectenna.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpt::strategy {

/// Samples f(nu) of a scalar function on a strictly ascending grid.
struct ScalarFunctionTable {
    std::vector<double> nu;
    std::vector<double> f;
    bool monotone = false;  ///< when set, validate() also requires f non-decreasing

    /// Throws std::invalid_argument on empty, unequal or unsorted input.
    void validate() const;
};

struct TwoPointSolution {
    double nu1 = 0.0;
    double nu2 = 0.0;
    double beta = 1.0;  ///< probability of nu1
    double value = 0.0;
    std::size_t i1 = 0;  ///< grid index of nu1
    std::size_t i2 = 0;  ///< grid index of nu2
};

/// Best mixture of two grid points whose mean is nu_bar: nu1 minimizes the
/// steepest chord slope to any point at or beyond nu_bar, nu2 attains it.
/// A mixture that puts all mass on one point is returned as that single
/// point with beta = 1. Ties resolve to the smallest index.
TwoPointSolution solve_two_point(const ScalarFunctionTable& tab, double nu_bar);

struct GridSettings {
    double delta_rho = 0.1;
    int n_rho = 1000;
    beamopt::ScaSettings sca;
    int n_restarts = 3;
    std::uint64_t seed = 0;
    int workers = 1;
};

/// Harvested power sampled on rho_m = m * delta_rho, m = 0..n_rho.
struct GridTable {
    ChannelMatrix channel;
    RectennaParams params;
    double delta_rho = 0.0;
    std::vector<double> rho;
    std::vector<double> phi;     ///< non-decreasing; phi[m] = total_power(vecs[m])
    std::vector<CVector> vecs;   ///< ||vecs[m]||^2 = rho[m]
    std::vector<int> k_star;     ///< -1 where the point failed
    std::vector<int> sca_iters;
    std::vector<bool> valid;     ///< false where the optimizer threw
    std::vector<bool> repaired;  ///< true where the scaled previous beam won
    std::vector<std::string> warnings;
};

/// Runs phi_of_nu at every grid power (in parallel when workers > 1). A
/// point whose optimizer fails, or whose result is beaten by the previous
/// beam scaled up to the new power, takes that scaled beam instead.
GridTable build_grid_table(const ChannelMatrix& g, const RectennaParams& p, const GridSettings& s);

struct TwoPointPolicy {
    std::string kind = "two_point";
    CVector w1;
    CVector w2;
    double nu1 = 0.0;
    double nu2 = 0.0;
    double beta = 1.0;  ///< probability of w1
    double p_x = 0.0;
    double avg_phi = 0.0;
};

/// Min-max chord search over the finished table for budget p_x.
/// Throws std::out_of_range when p_x is not inside (0, rho.back()].
TwoPointPolicy grid_minmax_policy(const GridTable& tab, double p_x);

/// beta psi(w1) + (1 - beta) psi(w2)
double average_harvested_power(const TwoPointPolicy& pol, const ChannelMatrix& g, const RectennaParams& p);

/// One `key value` line per field; vectors as space-separated re,im tokens.
void write_policy(std::ostream& os, const TwoPointPolicy& pol);
TwoPointPolicy read_policy(std::istream& is);

}  // namespace wpt::strategy

#endif  // WPT_STRATEGY_HPP
