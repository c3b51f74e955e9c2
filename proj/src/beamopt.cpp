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

#include "wpt/beamopt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

namespace wpt::beamopt {

namespace {

constexpr double kPrefixTol = 1e-7;
constexpr int kRandomDraws = 32;

// Largest theta in [0, 1] keeping theta*Wi + (1-theta)*Wf inside the cell
// (bounds widened by relax). Wf is assumed inside.
double pull_in_theta(const conic::SdpProblem& cell, const CMatrix& wi, const CMatrix& wf, double relax)
{
    double theta = 1.0;
    for (const auto& c : cell.constraints) {
        const double qi = (c.h * wi * c.h.adjoint())(0, 0).real();
        const double qf = (c.h * wf * c.h.adjoint())(0, 0).real();
        if (c.sense == conic::Sense::at_least) {
            const double lo = c.bound * (1.0 - relax);
            if (qi < lo)
                theta = std::min(theta, qf > qi ? std::max(0.0, (qf - lo) / (qf - qi)) : 0.0);
        } else {
            const double hi = c.bound * (1.0 + relax);
            if (qi > hi)
                theta = std::min(theta, qi > qf ? std::max(0.0, (hi - qf) / (qi - qf)) : 0.0);
        }
    }
    return theta;
}

bool meets_prefix(const ChannelMatrix& g, const RectennaParams& p, const SaturationPlan& plan, const CVector& w)
{
    for (int i = 0; i < plan.cell_k; ++i) {
        const double q = std::norm(g.row(plan.order[i]).dot(w.conjugate()));
        if (q < p.a_s_sq * (1.0 - kPrefixTol))
            return false;
    }
    return true;
}

CVector full_power(const CVector& v, double nu)
{
    return canonical_phase(v * (std::sqrt(nu) / v.norm()));
}

void note(std::string& diag, const std::string& msg)
{
    if (!diag.empty())
        diag += "; ";
    diag += msg;
}

// Picks the best full-power vector drawn from W (principal eigenvector,
// Gaussian randomization) or from the cell's feasible point, preferring
// vectors that keep the saturated prefix saturated.
CVector select_vector(const ChannelMatrix& g, const RectennaParams& p, double nu, const SaturationPlan& plan,
                      const CMatrix& w, std::string& diag)
{
    std::vector<CVector> cand;
    const auto add_from = [&](const CMatrix& m) {
        if (m.size() == 0 || m.trace().real() <= 0.0)
            return;
        try {
            cand.push_back(conic::extract_rank_one(m, nu).w);
        } catch (const conic::DegenerateMatrix&) {
        }
    };
    add_from(w);
    add_from(plan.feasible_w);

    Eigen::SelfAdjointEigenSolver<CMatrix> es(w);
    const RVector lam = es.eigenvalues().cwiseMax(0.0);
    if (lam.size() > 1 && lam[lam.size() - 2] > 1e-12 * lam[lam.size() - 1]) {
        const CMatrix root = es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
        std::mt19937_64 rng(derive_seed(0x5eed, std::bit_cast<std::uint64_t>(nu)));
        std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
        for (int d = 0; d < kRandomDraws; ++d) {
            CVector z(root.cols());
            for (auto& x : z)
                x = cdouble(nd(rng), nd(rng));
            cand.push_back(root * z);
        }
    }

    CVector best;
    double best_phi = -1.0;
    bool best_ok = false;
    for (const auto& c : cand) {
        if (c.norm() == 0.0)
            continue;
        const CVector v = full_power(c, nu);
        const bool ok = meets_prefix(g, p, plan, v);
        const double phi = total_power(p, g, v);
        if ((ok && !best_ok) || (ok == best_ok && phi > best_phi)) {
            best = v;
            best_phi = phi;
            best_ok = ok;
        }
    }
    if (best.size() == 0)
        return CVector::Zero(g.n_t());
    if (!best_ok)
        note(diag, "no extracted vector keeps the saturated prefix");
    return best;
}

}  // namespace

std::vector<int> sort_channels(const ChannelMatrix& g)
{
    std::vector<int> order(g.n_e());
    std::iota(order.begin(), order.end(), 0);
    RVector norms(g.n_e());
    for (int r = 0; r < g.n_e(); ++r)
        norms[r] = g.row(r).norm();
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return norms[a] > norms[b]; });
    return order;
}

conic::SdpProblem saturation_cell(const ChannelMatrix& g, const RectennaParams& p, double nu,
                                  const std::vector<int>& order, int k)
{
    conic::SdpProblem prob = conic::SdpProblem::feasibility(g.n_t(), nu);
    for (int i = 0; i < g.n_e(); ++i)
        prob.constraints.push_back(
            {g.row(order[i]), i < k ? conic::Sense::at_least : conic::Sense::at_most, p.a_s_sq});
    return prob;
}

SaturationPlan find_saturation_count(const ChannelMatrix& g, const RectennaParams& p, double nu,
                                     const conic::SdpSettings& sdp)
{
    if (!(nu >= 0.0))
        throw std::domain_error("find_saturation_count: negative power");
    SaturationPlan plan;
    plan.order = sort_channels(g);
    plan.cell_points.push_back(CMatrix::Zero(g.n_t(), g.n_t()));
    for (int k = 1; k <= g.n_e() && nu > 0.0; ++k) {
        const auto cell = saturation_cell(g, p, nu, plan.order, k);
        const auto sol = conic::solve_feasibility_sdp(cell, sdp);
        if (sol.status == conic::SdpStatus::max_iter)
            throw SolverFailure("saturation search: feasibility solve hit its iteration cap at k = " +
                                std::to_string(k));
        if (sol.status != conic::SdpStatus::optimal)
            break;
        plan.k_star = k;
        plan.cell_points.push_back(sol.w_matrix);
    }
    for (int k = 0; k <= plan.k_star; ++k)
        plan.cell_violations.push_back(
            conic::constraint_violation(saturation_cell(g, p, nu, plan.order, k), plan.cell_points[k]));
    plan.u.assign(g.n_e(), 1);
    for (int i = 0; i < plan.k_star; ++i)
        plan.u[plan.order[i]] = 0;
    return plan.with_cell(plan.k_star);
}

SaturationPlan SaturationPlan::with_cell(int k) const
{
    SaturationPlan out = *this;
    out.cell_k = k;
    out.feasible_w = cell_points.at(k);
    out.violation = cell_violations.at(k);
    return out;
}

CMatrix initial_matrix(int n_t, double nu, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    CVector v(n_t);
    for (auto& x : v)
        x = cdouble(nd(rng), nd(rng));
    v /= v.norm();
    return 0.5 * (nu / n_t) * CMatrix::Identity(n_t, n_t) + 0.5 * nu * v * v.adjoint();
}

PhiPoint sca_maximize(const ChannelMatrix& g, const RectennaParams& p, double nu, const SaturationPlan& plan,
                      const CMatrix& w_init, const ScaSettings& s)
{
    PhiPoint out;
    out.nu = nu;
    out.plan = plan;
    if (nu == 0.0) {
        out.w = CVector::Zero(g.n_t());
        out.h_history = {0.0};
        return out;
    }

    const auto cell = saturation_cell(g, p, nu, plan.order, plan.cell_k);
    conic::SdpSettings sdp = s.sdp;
    sdp.relax = std::max(sdp.relax, 1.01 * plan.violation);

    const CMatrix wf = plan.feasible_w;
    const double theta = pull_in_theta(cell, w_init, wf, sdp.relax);
    CMatrix w = hermitian_part(theta * w_init + (1.0 - theta) * wf);
    double h = matrix_power(p, g, w);
    out.h_history.push_back(h);

    out.converged = false;
    for (int it = 0; it < s.max_iter; ++it) {
        auto prob = cell;
        prob.objective = matrix_gradient(p, g, w);
        const auto sol = conic::solve_linear_sdp(prob, sdp);
        if (sol.status != conic::SdpStatus::optimal) {
            note(out.diagnostics, "linear step " + conic::to_string(sol.status));
            break;
        }
        ++out.sca_iters;
        const CMatrix wn = hermitian_part(sol.w_matrix);
        const double hn = matrix_power(p, g, wn);
        if (hn < h) {
            // The surrogate guarantees an increase; a drop is solver round-off.
            out.converged = true;
            break;
        }
        const double gain = hn - h;
        w = wn;
        h = hn;
        out.h_history.push_back(h);
        if (gain <= s.eps_sca * std::max(h, 1e-300)) {
            out.converged = true;
            break;
        }
    }
    if (!out.converged && out.diagnostics.empty())
        note(out.diagnostics, "iteration cap reached");

    out.w = select_vector(g, p, nu, plan, w, out.diagnostics);
    if (g.n_t() == 1)
        out.w = CVector::Constant(1, std::sqrt(nu));
    out.phi = total_power(p, g, out.w);
    return out;
}

CVector energy_beam(const ChannelMatrix& g, double nu)
{
    const CMatrix gram = g.gains().adjoint() * g.gains();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
    const CVector v = es.eigenvectors().col(g.n_t() - 1);
    if (g.n_t() == 1)
        return CVector::Constant(1, std::sqrt(nu));
    return canonical_phase(v * std::sqrt(nu));
}

PhiPoint phi_of_nu(const ChannelMatrix& g, const RectennaParams& p, double nu, const ScaSettings& s,
                   int n_restarts, std::uint64_t seed)
{
    if (!(nu >= 0.0) || !std::isfinite(nu))
        throw std::domain_error("phi_of_nu: power must be finite and non-negative");
    if (n_restarts < 1)
        throw std::invalid_argument("phi_of_nu: n_restarts must be at least 1");

    const SaturationPlan plan = find_saturation_count(g, p, nu, s.sdp);
    if (nu == 0.0)
        return sca_maximize(g, p, nu, plan, CMatrix::Zero(g.n_t(), g.n_t()), s);

    const std::uint64_t base = derive_seed(seed, std::bit_cast<std::uint64_t>(nu));
    PhiPoint best;
    int run = 0;
    for (int k = plan.k_star; k >= 0; --k) {
        const SaturationPlan cell = plan.with_cell(k);
        const int runs = k == plan.k_star ? n_restarts : 1;
        for (int r = 0; r < runs; ++r, ++run) {
            PhiPoint pt = sca_maximize(g, p, nu, cell, initial_matrix(g.n_t(), nu, derive_seed(base, run)), s);
            if (run == 0 || pt.phi > best.phi)
                best = std::move(pt);
        }
    }

    const CVector eb = energy_beam(g, nu);
    const double phi_eb = total_power(p, g, eb);
    if (phi_eb > best.phi) {
        best.w = eb;
        best.phi = phi_eb;
        note(best.diagnostics, "energy beam outperformed the SCA runs");
    }
    return best;
}

}  // namespace wpt::beamopt
