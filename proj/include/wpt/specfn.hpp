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

#ifndef WPT_SPECFN_HPP
#define WPT_SPECFN_HPP

namespace wpt::specfn {

// Slack tolerated below the branch point -1/e before a domain error is raised.
inline constexpr double kBranchSlack = 1e-12;

/// Principal branch W0 of the Lambert-W function, x >= -1/e.
/// Throws std::domain_error below the branch point.
double lambert_w0(double x);

/// Modified Bessel function of the first kind, order 0, for x >= 0.
/// Throws std::domain_error for x < 0 and std::overflow_error once exp(x)
/// is no longer representable.
double bessel_i0(double x);

/// Modified Bessel function of the first kind, order 1, for x >= 0.
double bessel_i1(double x);

}  // namespace wpt::specfn

#endif  // WPT_SPECFN_HPP
