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

#ifndef WPT_RECTENNA_HPP
#define WPT_RECTENNA_HPP

#include "wpt/channel.hpp"
#include "wpt/linalg.hpp"

namespace wpt {

/// Composite constants of the diode rectenna model. All rectennas of a
/// harvester share one parameter set.
struct RectennaParams {
    double a = 1.29;        ///< I_s (R_L + R_s) / (mu V_T), dimensionless
    double b = 1.55e3;      ///< [mu V_T sqrt(Re{1/Z_a*})]^-1, 1/sqrt(W)
    double i_s = 5e-6;      ///< diode reverse saturation current, A
    double r_l = 1e4;       ///< load resistance, ohm
    double a_s_sq = 25e-6;  ///< input power where the output saturates, W

    /// Throws std::invalid_argument unless every field is positive and finite.
    void validate() const;
};

/// Raw circuit values from which RectennaParams are derived.
struct CircuitConstants {
    double mu = 1.0;          ///< diode ideality factor, [1, 2]
    double v_t = 0.025;       ///< thermal voltage, V
    double i_s = 5e-6;        ///< saturation current, A
    double r_s = 0.0;         ///< series antenna resistance, ohm
    double r_l = 1e4;         ///< load resistance, ohm
    double re_inv_za = 1600;  ///< Re{1/Z_a*}, 1/ohm
    double a_s_sq = 25e-6;    ///< saturation power, W
};

RectennaParams derive_composite_params(const CircuitConstants& c);

/// Harvested DC power of one rectenna for received power z_sq = |g_p x|^2
/// (watts in, watts out). Clamped at the saturation value for z_sq >= A_s^2.
double harvested_power(const RectennaParams& p, double z_sq);

/// Output power at the saturation knee, harvested_power(p, p.a_s_sq).
double saturation_power(const RectennaParams& p);

/// d harvested_power / d z_sq. Zero at z_sq = 0 (limit) and on the
/// saturated side, including the knee itself.
double harvested_power_derivative(const RectennaParams& p, double z_sq);

/// sum_p harvested_power(|g_p w|^2)
double total_power(const RectennaParams& p, const ChannelMatrix& g, const CVector& w);

/// sum_p harvested_power(g_p W g_p^H). W is symmetrized first; an asymmetry
/// above 1e-9 (relative to max|W|) is rejected with std::invalid_argument.
double matrix_power(const RectennaParams& p, const ChannelMatrix& g, const CMatrix& w);

/// sum_p harvested_power_derivative(g_p W g_p^H) g_p^H g_p
CMatrix matrix_gradient(const RectennaParams& p, const ChannelMatrix& g, const CMatrix& w);

}  // namespace wpt

#endif  // WPT_RECTENNA_HPP
