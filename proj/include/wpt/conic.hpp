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

#ifndef WPT_CONIC_HPP
#define WPT_CONIC_HPP

#include "wpt/linalg.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace wpt::conic {

enum class Sense { at_least, at_most };

/// h W h^H (>= | <=) bound
struct QuadConstraint {
    Eigen::RowVectorXcd h;
    Sense sense = Sense::at_least;
    double bound = 0.0;
};

/// Dense Hermitian SDP over W (dim x dim):
///   maximize Re Tr{C^H W}  s.t.  quadratic constraints, Tr{W} <= trace_bound, W >= 0.
/// A zero objective makes it a feasibility problem.
struct SdpProblem {
    int dim = 0;
    CMatrix objective;
    std::vector<QuadConstraint> constraints;
    double trace_bound = 0.0;

    /// Zero-objective problem of the given size.
    static SdpProblem feasibility(int dim, double trace_bound);

    /// Throws std::invalid_argument on inconsistent sizes, a negative trace
    /// bound or a non-positive constraint bound.
    void validate() const;
};

enum class SdpStatus { optimal, infeasible, max_iter };

std::string to_string(SdpStatus s);

struct SdpSolution {
    CMatrix w_matrix;
    SdpStatus status = SdpStatus::max_iter;
    /// Largest constraint violation of w_matrix, in units of each
    /// constraint's bound (so 1e-7 means 1e-7 * A_s^2 for saturation rows).
    double primal_violation = 0.0;
    double objective_value = 0.0;
    /// Optimal feasibility margin t* from margin maximization (feasibility
    /// solves only); feasible iff margin >= -tol_feas.
    double margin = 0.0;
    /// lambda_2 / lambda_1 of the interior-point iterate before rank-one
    /// refinement.
    double raw_defect = 0.0;
    /// True when w_matrix was replaced by its refined rank-one representative.
    bool rank_one = false;
    int iterations = 0;
};

struct SdpSettings {
    double tol_feas = 1e-7;
    double tol_gap = 1e-11;
    int max_iter = 150;
    /// Relaxation (relative to each bound) applied to the constraints of
    /// linear solves so the feasible set has an interior.
    double relax = 1e-9;
    bool refine = true;
};

/// Decides feasibility by maximizing the common slack t of all quadratic
/// constraints (each normalized by its bound). Returns status optimal with a
/// feasible W when t* >= -tol_feas, infeasible otherwise; `margin` carries t*.
SdpSolution solve_feasibility_sdp(const SdpProblem& prob, const SdpSettings& settings = {});

/// Maximizes Re Tr{C^H W} over the constraint set. Status infeasible when the
/// constraint set (after `relax`) is empty.
SdpSolution solve_linear_sdp(const SdpProblem& prob, const SdpSettings& settings = {});

class DegenerateMatrix : public std::domain_error {
 public:
    using std::domain_error::domain_error;
};

struct RankOneBeam {
    CVector w;
    double defect_ratio = 0.0;  ///< lambda_2 / lambda_1
};

/// w = sqrt(min(Tr W, nu)) v_1 with v_1 the unit dominant eigenvector of W in
/// canonical phase. Throws DegenerateMatrix when lambda_1 <= 1e-15.
RankOneBeam extract_rank_one(const CMatrix& w, double nu);

/// Largest constraint violation of W (relative to each bound, trace relative
/// to max(trace_bound, tiny)); <= 0 means feasible.
double constraint_violation(const SdpProblem& prob, const CMatrix& w);

}  // namespace wpt::conic

#endif  // WPT_CONIC_HPP
