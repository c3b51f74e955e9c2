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

#ifndef WPT_LINALG_HPP
#define WPT_LINALG_HPP

#include <Eigen/Dense>

#include <complex>

namespace wpt {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// (W + W^H) / 2
inline CMatrix hermitian_part(const CMatrix& w)
{
    return 0.5 * (w + w.adjoint());
}

/// Rotates v so that its first entry with non-negligible magnitude is real
/// and positive. Zero vectors are returned unchanged.
inline CVector canonical_phase(const CVector& v)
{
    const double scale = v.norm();
    if (scale == 0.0)
        return v;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v[i]);
        if (mag > 1e-12 * scale)
            return v * (std::conj(v[i]) / mag);
    }
    return v;
}

}  // namespace wpt

#endif  // WPT_LINALG_HPP
