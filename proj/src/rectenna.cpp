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

#include "wpt/rectenna.hpp"

#include "wpt/specfn.hpp"

#include <cmath>
#include <stdexcept>

namespace wpt {
namespace {

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

struct Bracket {
    double lambert;  // W0(a e^a I0(u))
    double value;    // W0(...) / a - 1
};

Bracket bracket(const RectennaParams& p, double u)
{
    const double l = specfn::lambert_w0(p.a * std::exp(p.a) * specfn::bessel_i0(u));
    return {l, l / p.a - 1.0};
}

double unclamped_power(const RectennaParams& p, double z_sq)
{
    const double v = bracket(p, p.b * std::sqrt(2.0 * z_sq)).value;
    return v * v * p.i_s * p.i_s * p.r_l;
}

CMatrix checked_hermitian(const CMatrix& w, Eigen::Index n_t)
{
    if (w.rows() != n_t || w.cols() != n_t)
        throw std::invalid_argument("beamforming matrix must be n_t x n_t");
    const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
    if ((w - w.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw std::invalid_argument("beamforming matrix is not Hermitian");
    return hermitian_part(w);
}

}  // namespace

void RectennaParams::validate() const
{
    if (!positive(a) || !positive(b) || !positive(i_s) || !positive(r_l) || !positive(a_s_sq))
        throw std::invalid_argument("RectennaParams: all constants must be positive");
}

RectennaParams derive_composite_params(const CircuitConstants& c)
{
    if (!positive(c.mu) || !positive(c.v_t) || !positive(c.i_s) || !positive(c.r_l) || !positive(c.re_inv_za) ||
        !positive(c.a_s_sq) || !(c.r_s >= 0.0))
        throw std::domain_error("CircuitConstants: non-positive circuit value");
    if (c.mu < 1.0 || c.mu > 2.0)
        throw std::domain_error("CircuitConstants: ideality factor outside [1, 2]");
    RectennaParams p;
    p.a = c.i_s * (c.r_l + c.r_s) / (c.mu * c.v_t);
    p.b = 1.0 / (c.mu * c.v_t * std::sqrt(c.re_inv_za));
    p.i_s = c.i_s;
    p.r_l = c.r_l;
    p.a_s_sq = c.a_s_sq;
    return p;
}

double saturation_power(const RectennaParams& p)
{
    return unclamped_power(p, p.a_s_sq);
}

double harvested_power(const RectennaParams& p, double z_sq)
{
    if (!(z_sq >= 0.0))
        throw std::domain_error("harvested_power: negative input power");
    const double sat = saturation_power(p);
    if (z_sq >= p.a_s_sq)
        return sat;
    return std::min(unclamped_power(p, z_sq), sat);
}

double harvested_power_derivative(const RectennaParams& p, double z_sq)
{
    if (!(z_sq >= 0.0))
        throw std::domain_error("harvested_power_derivative: negative input power");
    if (z_sq == 0.0 || z_sq >= p.a_s_sq)
        return 0.0;
    const double u = p.b * std::sqrt(2.0 * z_sq);
    const auto [l, v] = bracket(p, u);
    const double i0 = specfn::bessel_i0(u);
    const double i1 = specfn::bessel_i1(u);
    // du/dq = B / sqrt(2q) = B^2 / u
    const double du_dq = p.b * p.b / u;
    return 2.0 * p.i_s * p.i_s * p.r_l * v * (1.0 / p.a) * (l / (1.0 + l)) * (i1 / i0) * du_dq;
}

double total_power(const RectennaParams& p, const ChannelMatrix& g, const CVector& w)
{
    const RVector q = g.received_powers(w);
    double sum = 0.0;
    for (double v : q)
        sum += harvested_power(p, v);
    return sum;
}

double matrix_power(const RectennaParams& p, const ChannelMatrix& g, const CMatrix& w)
{
    const RVector q = g.received_powers(checked_hermitian(w, g.n_t()));
    double sum = 0.0;
    for (double v : q)
        sum += harvested_power(p, v);
    return sum;
}

CMatrix matrix_gradient(const RectennaParams& p, const ChannelMatrix& g, const CMatrix& w)
{
    const RVector q = g.received_powers(checked_hermitian(w, g.n_t()));
    CMatrix grad = CMatrix::Zero(g.n_t(), g.n_t());
    for (int r = 0; r < g.n_e(); ++r) {
        const double d = harvested_power_derivative(p, q[r]);
        if (d != 0.0)
            grad.noalias() += d * (g.row(r).adjoint() * g.row(r));
    }
    return grad;
}

}  // namespace wpt
