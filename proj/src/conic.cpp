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

#include "wpt/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace wpt::conic {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Re Tr{A B}
double inner(const CMatrix& a, const CMatrix& b)
{
    return (a.array() * b.transpose().array()).sum().real();
}

// Block problem solved by the interior-point kernel:
//   maximize Re Tr{C X} + c_lp' x   s.t.  Re Tr{A_i X} + a_lp(i,:) x = b_i,  X >= 0, x >= 0.
struct BlockSdp {
    int n = 0;
    CMatrix c;
    RVector c_lp;
    std::vector<CMatrix> a;
    Eigen::MatrixXd a_lp;
    RVector b;
};

struct IpmResult {
    CMatrix x;
    RVector x_lp;
    RVector y;
    double pobj = 0.0;
    double dobj = 0.0;
    double pinf = kInf;
    double dinf = kInf;
    double gap = kInf;
    int iterations = 0;
    bool converged = false;
};

double max_step(const CMatrix& x, const CMatrix& dx)
{
    Eigen::LLT<CMatrix> llt(x);
    if (llt.info() != Eigen::Success)
        return 0.0;
    const CMatrix half = llt.matrixL().solve(dx);
    const CMatrix m = hermitian_part(llt.matrixL().solve(half.adjoint()));
    const double lmin = Eigen::SelfAdjointEigenSolver<CMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
    return lmin >= 0.0 ? kInf : -1.0 / lmin;
}

double max_step(const RVector& x, const RVector& dx)
{
    double step = kInf;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (dx[i] < 0.0)
            step = std::min(step, -x[i] / dx[i]);
    return step;
}

// Infeasible-start primal-dual path following with the HKM direction and a
// Mehrotra predictor-corrector step.
IpmResult run_ipm(const BlockSdp& p, double tol, int max_iter)
{
    const int n = p.n;
    const auto m = p.b.size();
    const auto nlp = p.c_lp.size();
    const double order = n + double(nlp);
    const CMatrix eye = CMatrix::Identity(n, n);

    double a_norm = 0.0, ratio = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const double ni = std::sqrt(p.a[i].squaredNorm() + p.a_lp.row(i).squaredNorm());
        a_norm = std::max(a_norm, ni);
        ratio = std::max(ratio, (1.0 + std::abs(p.b[i])) / (1.0 + ni));
    }
    const double c_norm = std::sqrt(p.c.squaredNorm() + p.c_lp.squaredNorm());
    const double xi = std::max({10.0, std::sqrt(order), order * ratio});
    const double eta = std::max({10.0, std::sqrt(order), a_norm, c_norm});

    CMatrix x = xi * eye;
    RVector x_lp = RVector::Constant(nlp, xi);
    RVector y = RVector::Zero(m);
    CMatrix z = eta * eye;
    RVector z_lp = RVector::Constant(nlp, eta);

    IpmResult out;
    // late iterations can lose accuracy to round-off; keep the best one seen
    IpmResult best;
    double best_score = kInf;
    const double b_norm = p.b.norm();
    int stalls = 0;

    for (int it = 0; it <= max_iter; ++it) {
        RVector ax(m);
        CMatrix aty = CMatrix::Zero(n, n);
        for (Eigen::Index i = 0; i < m; ++i) {
            ax[i] = inner(p.a[i], x) + p.a_lp.row(i).dot(x_lp);
            aty += y[i] * p.a[i];
        }
        const RVector rp = p.b - ax;
        const CMatrix rd = aty - p.c - z;
        const RVector rd_lp = p.a_lp.transpose() * y - p.c_lp - z_lp;
        const double mu = (inner(x, z) + x_lp.dot(z_lp)) / order;

        out.pobj = inner(p.c, x) + p.c_lp.dot(x_lp);
        out.dobj = p.b.dot(y);
        out.pinf = rp.norm() / (1.0 + b_norm);
        out.dinf = std::sqrt(rd.squaredNorm() + rd_lp.squaredNorm()) / (1.0 + c_norm);
        out.gap = order * mu / (1.0 + std::abs(out.pobj) + std::abs(out.dobj));
        out.iterations = it;
        out.x = x;
        out.x_lp = x_lp;
        out.y = y;
        if (out.pinf <= tol && out.dinf <= tol && out.gap <= tol) {
            out.converged = true;
            return out;
        }
        if (const double score = std::max({out.pinf, out.dinf, out.gap}); score < best_score) {
            best_score = score;
            best = out;
        }
        if (it == max_iter || stalls >= 3)
            break;

        Eigen::LLT<CMatrix> zllt(z);
        if (zllt.info() != Eigen::Success)
            break;
        const CMatrix zinv = hermitian_part(zllt.solve(eye));

        std::vector<CMatrix> g(m);
        for (Eigen::Index j = 0; j < m; ++j)
            g[j] = zinv * p.a[j] * x;
        const RVector ratio_lp = x_lp.cwiseQuotient(z_lp);
        Eigen::MatrixXd schur(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j)
                schur(i, j) = inner(p.a[i], g[j]) + (p.a_lp.row(i).array() * ratio_lp.transpose().array() *
                                                     p.a_lp.row(j).array())
                                                        .sum();
        schur = 0.5 * (schur + schur.transpose());
        Eigen::LDLT<Eigen::MatrixXd> schur_f(schur);
        if (schur_f.info() != Eigen::Success)
            break;

        const CMatrix zinv_rd_x = zinv * rd * x;
        struct Dir {
            CMatrix dx, dz;
            RVector dx_lp, dz_lp, dy;
        };
        auto direction = [&](double sigma, const CMatrix* kx, const RVector* k_lp) {
            CMatrix base = sigma * mu * zinv - x - zinv_rd_x;
            RVector base_lp = (sigma * mu) * z_lp.cwiseInverse() - x_lp - rd_lp.cwiseProduct(ratio_lp);
            if (kx)
                base -= zinv * (*kx);
            if (k_lp)
                base_lp -= k_lp->cwiseQuotient(z_lp);
            RVector rhs(m);
            for (Eigen::Index i = 0; i < m; ++i)
                rhs[i] = inner(p.a[i], base) + p.a_lp.row(i).dot(base_lp) - rp[i];
            Dir d;
            d.dy = schur_f.solve(rhs);
            d.dz = rd;
            d.dx = base;
            for (Eigen::Index j = 0; j < m; ++j) {
                d.dz += d.dy[j] * p.a[j];
                d.dx -= d.dy[j] * g[j];
            }
            d.dx = hermitian_part(d.dx);
            const RVector aty_lp = p.a_lp.transpose() * d.dy;
            d.dz_lp = aty_lp + rd_lp;
            d.dx_lp = base_lp - aty_lp.cwiseProduct(ratio_lp);
            return d;
        };

        const Dir aff = direction(0.0, nullptr, nullptr);
        const double ap_aff = std::min({1.0, max_step(x, aff.dx), max_step(x_lp, aff.dx_lp)});
        const double ad_aff = std::min({1.0, max_step(z, aff.dz), max_step(z_lp, aff.dz_lp)});
        const double mu_aff = (inner(x + ap_aff * aff.dx, z + ad_aff * aff.dz) +
                               (x_lp + ap_aff * aff.dx_lp).dot(z_lp + ad_aff * aff.dz_lp)) /
                              order;
        const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);
        const CMatrix kx = aff.dz * aff.dx;
        const RVector k_lp = aff.dz_lp.cwiseProduct(aff.dx_lp);
        const Dir d = direction(sigma, &kx, &k_lp);

        const double frac = 0.98;
        const double ap = std::min(1.0, frac * std::min(max_step(x, d.dx), max_step(x_lp, d.dx_lp)));
        const double ad = std::min(1.0, frac * std::min(max_step(z, d.dz), max_step(z_lp, d.dz_lp)));
        stalls = (ap < 1e-10 && ad < 1e-10) ? stalls + 1 : 0;

        x = hermitian_part(x + ap * d.dx);
        x_lp += ap * d.dx_lp;
        y += ad * d.dy;
        z = hermitian_part(z + ad * d.dz);
        z_lp += ad * d.dz_lp;
    }
    best.iterations = out.iterations;
    return best;
}

// Constraint rows in the normalized space W = nu X, Tr X <= 1:
//   at_least: |c x|^2 >= lo,   at_most: |c x|^2 <= hi
struct ScaledRow {
    Eigen::RowVectorXcd c;
    Sense sense;
};

std::vector<ScaledRow> scale_rows(const SdpProblem& prob)
{
    std::vector<ScaledRow> rows;
    rows.reserve(prob.constraints.size());
    for (const auto& qc : prob.constraints)
        rows.push_back({qc.h * std::sqrt(prob.trace_bound / qc.bound), qc.sense});
    return rows;
}

double row_power(const ScaledRow& r, const CMatrix& x)
{
    return (r.c * x * r.c.adjoint())(0, 0).real();
}

// Smallest normalized slack of X: at_least rows give q - 1, at_most rows 1 - q.
double min_margin(const std::vector<ScaledRow>& rows, const CMatrix& x)
{
    double t = kInf;
    for (const auto& r : rows) {
        const double q = row_power(r, x);
        t = std::min(t, r.sense == Sense::at_least ? q - 1.0 : 1.0 - q);
    }
    return t;
}

// PSD projection with trace clipped to 1.
CMatrix clean_psd(const CMatrix& x)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(x));
    RVector ev = es.eigenvalues().cwiseMax(0.0);
    const double tr = ev.sum();
    if (tr > 1.0)
        ev /= tr;
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double defect_of(const CMatrix& x)
{
    if (x.rows() < 2)
        return 0.0;
    const RVector ev =
        Eigen::SelfAdjointEigenSolver<CMatrix>(hermitian_part(x), Eigen::EigenvaluesOnly).eigenvalues();
    const double l1 = ev[ev.size() - 1];
    if (l1 <= 0.0)
        return 0.0;
    return std::max(ev[ev.size() - 2], 0.0) / l1;
}

// Minimum-norm Gauss-Newton corrections on the beam vector until every row
// satisfies q >= 1 + lo_shift (at_least), q <= 1 - lo_shift (at_most) and
// ||v||^2 <= 1. Returns the corrected vector or nothing when it fails.
std::optional<CVector> polish(const std::vector<ScaledRow>& rows, CVector v, double lo_shift)
{
    const auto n = v.size();
    const double push = 1e-13;
    for (int it = 0; it < 40; ++it) {
        std::vector<Eigen::RowVectorXd> jac;
        std::vector<double> rhs;
        bool ok = true;
        auto add = [&](const Eigen::RowVectorXcd& grad_c, double viol, bool violated) {
            Eigen::RowVectorXd row(2 * n);
            row << grad_c.real(), -grad_c.imag();
            jac.push_back(row);
            rhs.push_back(violated ? viol + push : 0.0);
        };
        for (const auto& r : rows) {
            const cdouble cv = (r.c * v)(0, 0);
            const double q = std::norm(cv);
            const double viol = r.sense == Sense::at_least ? (1.0 + lo_shift) - q : q - (1.0 - lo_shift);
            const Eigen::RowVectorXcd grad = 2.0 * std::conj(cv) * r.c;
            const double sign = r.sense == Sense::at_least ? 1.0 : -1.0;
            if (viol > 0.0)
                ok = false;
            if (viol > -1e-9)
                add(sign * grad, viol, viol > 0.0);
        }
        const double tr = v.squaredNorm();
        if (tr - 1.0 > 0.0)
            ok = false;
        if (tr - 1.0 > -1e-9)
            add(-2.0 * v.adjoint(), tr - 1.0, tr > 1.0);
        if (ok)
            return v;

        Eigen::MatrixXd jm(jac.size(), 2 * n);
        RVector r(jac.size());
        for (std::size_t i = 0; i < jac.size(); ++i) {
            jm.row(i) = jac[i];
            r[i] = rhs[i];
        }
        const RVector step = jm.completeOrthogonalDecomposition().solve(r);
        if (!step.allFinite())
            return std::nullopt;
        for (Eigen::Index i = 0; i < n; ++i)
            v[i] += cdouble(step[i], step[n + i]);
    }
    return std::nullopt;
}

struct Refined {
    CVector v;
    double defect = 0.0;
};

Refined dominant(const CMatrix& x)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(x));
    const auto k = x.rows() - 1;
    const double l1 = std::max(es.eigenvalues()[k], 0.0);
    const double tr = std::min(std::max(es.eigenvalues().cwiseMax(0.0).sum(), 0.0), 1.0);
    Refined r;
    r.v = std::sqrt(tr) * es.eigenvectors().col(k);
    r.defect = (k > 0 && l1 > 0.0) ? std::max(es.eigenvalues()[k - 1], 0.0) / l1 : 0.0;
    return r;
}

SdpSolution zero_budget_solution(const SdpProblem& prob)
{
    SdpSolution sol;
    sol.w_matrix = CMatrix::Zero(prob.dim, prob.dim);
    sol.margin = kInf;
    for (const auto& qc : prob.constraints)
        sol.margin = std::min(sol.margin, qc.sense == Sense::at_least ? -1.0 : 1.0);
    sol.primal_violation = std::max(0.0, -sol.margin);
    sol.rank_one = true;
    return sol;
}

}  // namespace

std::string to_string(SdpStatus s)
{
    switch (s) {
    case SdpStatus::optimal:
        return "optimal";
    case SdpStatus::infeasible:
        return "infeasible";
    case SdpStatus::max_iter:
        return "max_iter";
    }
    return "unknown";
}

SdpProblem SdpProblem::feasibility(int dim, double trace_bound)
{
    SdpProblem p;
    p.dim = dim;
    p.objective = CMatrix::Zero(dim, dim);
    p.trace_bound = trace_bound;
    return p;
}

void SdpProblem::validate() const
{
    if (dim < 1)
        throw std::invalid_argument("SdpProblem: dim must be >= 1");
    if (!(trace_bound >= 0.0) || !std::isfinite(trace_bound))
        throw std::invalid_argument("SdpProblem: trace bound must be finite and >= 0");
    if (objective.rows() != dim || objective.cols() != dim)
        throw std::invalid_argument("SdpProblem: objective must be dim x dim");
    for (const auto& qc : constraints) {
        if (qc.h.size() != dim)
            throw std::invalid_argument("SdpProblem: constraint vector length differs from dim");
        if (!(qc.bound > 0.0) || !std::isfinite(qc.bound))
            throw std::invalid_argument("SdpProblem: constraint bounds must be positive");
    }
}

double constraint_violation(const SdpProblem& prob, const CMatrix& w)
{
    double v = -kInf;
    const CMatrix wh = hermitian_part(w);
    for (const auto& qc : prob.constraints) {
        const double q = (qc.h * wh * qc.h.adjoint())(0, 0).real();
        v = std::max(v, qc.sense == Sense::at_least ? (qc.bound - q) / qc.bound : (q - qc.bound) / qc.bound);
    }
    const double scale = std::max(prob.trace_bound, 1e-300);
    v = std::max(v, (wh.trace().real() - prob.trace_bound) / scale);
    const double lmin = Eigen::SelfAdjointEigenSolver<CMatrix>(wh, Eigen::EigenvaluesOnly).eigenvalues()(0);
    return std::max(v, -lmin / scale);
}

SdpSolution solve_feasibility_sdp(const SdpProblem& prob, const SdpSettings& settings)
{
    prob.validate();
    if (prob.trace_bound == 0.0) {
        SdpSolution sol = zero_budget_solution(prob);
        sol.status = sol.margin >= -settings.tol_feas ? SdpStatus::optimal : SdpStatus::infeasible;
        return sol;
    }
    const int n = prob.dim;
    const auto rows = scale_rows(prob);
    const auto m = static_cast<Eigen::Index>(rows.size());

    bool has_lower = false;
    for (const auto& r : rows)
        has_lower = has_lower || r.sense == Sense::at_least;
    if (!has_lower) {
        // W = 0 meets every upper bound with margin 1
        SdpSolution sol;
        sol.w_matrix = CMatrix::Zero(n, n);
        sol.margin = m > 0 ? 1.0 : kInf;
        sol.status = SdpStatus::optimal;
        sol.rank_one = true;
        return sol;
    }

    // LP block: [trace slack, row slacks..., tau = t + 1]
    BlockSdp bp;
    bp.n = n;
    bp.c = CMatrix::Zero(n, n);
    bp.c_lp = RVector::Zero(m + 2);
    bp.c_lp[m + 1] = 1.0;
    bp.a.push_back(CMatrix::Identity(n, n));
    bp.a_lp = Eigen::MatrixXd::Zero(m + 1, m + 2);
    bp.b = RVector::Zero(m + 1);
    bp.a_lp(0, 0) = 1.0;
    bp.b[0] = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        bp.a.push_back(rows[i].c.adjoint() * rows[i].c);
        const double s = rows[i].sense == Sense::at_least ? -1.0 : 1.0;
        bp.a_lp(i + 1, i + 1) = s;
        bp.a_lp(i + 1, m + 1) = s;
        bp.b[i + 1] = rows[i].sense == Sense::at_least ? 0.0 : 2.0;
    }

    const IpmResult res = run_ipm(bp, settings.tol_gap, settings.max_iter);
    const CMatrix x = clean_psd(res.x);

    SdpSolution sol;
    sol.iterations = res.iterations;
    sol.margin = min_margin(rows, x);
    sol.raw_defect = defect_of(x);
    sol.w_matrix = prob.trace_bound * x;

    const bool loose = res.pinf <= 1e-7 && res.dinf <= 1e-7 && res.gap <= 1e-7;
    if (sol.margin >= -settings.tol_feas)
        sol.status = SdpStatus::optimal;
    else if (res.converged || loose)
        sol.status = SdpStatus::infeasible;
    else
        sol.status = SdpStatus::max_iter;

    if (sol.status == SdpStatus::optimal && settings.refine) {
        const Refined r = dominant(x);
        const double target = std::min(sol.margin, 0.0);
        if (auto v = polish(rows, r.v, target)) {
            const CMatrix xv = (*v) * v->adjoint();
            const double t_vec = min_margin(rows, xv);
            if (t_vec >= -settings.tol_feas) {
                sol.w_matrix = prob.trace_bound * xv;
                sol.margin = t_vec;
                sol.rank_one = true;
            }
        }
    }
    sol.primal_violation = std::max(0.0, constraint_violation(prob, sol.w_matrix));
    return sol;
}

SdpSolution solve_linear_sdp(const SdpProblem& prob, const SdpSettings& settings)
{
    prob.validate();
    const int n = prob.dim;
    const CMatrix c_obj = hermitian_part(prob.objective);
    if (prob.trace_bound == 0.0) {
        SdpSolution sol = zero_budget_solution(prob);
        sol.status = sol.margin >= -settings.relax ? SdpStatus::optimal : SdpStatus::infeasible;
        return sol;
    }
    const double c_scale = c_obj.norm();
    if (c_scale == 0.0) {
        SdpSolution sol = solve_feasibility_sdp(prob, settings);
        sol.objective_value = 0.0;
        return sol;
    }

    const auto rows = scale_rows(prob);
    const auto m = static_cast<Eigen::Index>(rows.size());
    const double relax = settings.relax;

    // LP block: [trace slack, row slacks...]
    BlockSdp bp;
    bp.n = n;
    bp.c = c_obj / c_scale;
    bp.c_lp = RVector::Zero(m + 1);
    bp.a.push_back(CMatrix::Identity(n, n));
    bp.a_lp = Eigen::MatrixXd::Zero(m + 1, m + 1);
    bp.b = RVector::Zero(m + 1);
    bp.a_lp(0, 0) = 1.0;
    bp.b[0] = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        bp.a.push_back(rows[i].c.adjoint() * rows[i].c);
        const bool lower = rows[i].sense == Sense::at_least;
        bp.a_lp(i + 1, i + 1) = lower ? -1.0 : 1.0;
        bp.b[i + 1] = lower ? 1.0 - relax : 1.0 + relax;
    }

    const IpmResult res = run_ipm(bp, settings.tol_gap, settings.max_iter);
    const CMatrix x = clean_psd(res.x);

    SdpSolution sol;
    sol.iterations = res.iterations;
    sol.raw_defect = defect_of(x);
    sol.w_matrix = prob.trace_bound * x;
    sol.objective_value = inner(c_obj, sol.w_matrix);
    const double viol = m > 0 ? -min_margin(rows, x) - relax : 0.0;

    const bool loose = res.pinf <= 1e-7 && res.dinf <= 1e-7 && res.gap <= 1e-7;
    if ((res.converged || loose) && viol <= settings.tol_feas) {
        sol.status = SdpStatus::optimal;
    } else {
        // distinguish an empty constraint set from a stalled solve
        SdpSettings fs = settings;
        fs.refine = false;
        const SdpSolution feas = solve_feasibility_sdp(prob, fs);
        sol.status = feas.margin < -(settings.tol_feas + relax) ? SdpStatus::infeasible : SdpStatus::max_iter;
        sol.margin = feas.margin;
    }

    if (sol.status == SdpStatus::optimal && settings.refine) {
        const Refined r = dominant(x);
        if (auto v = polish(rows, r.v, -relax)) {
            const CMatrix w1 = prob.trace_bound * (*v) * v->adjoint();
            const double obj1 = inner(c_obj, w1);
            if (obj1 >= sol.objective_value - 1e-8 * std::abs(sol.objective_value)) {
                sol.w_matrix = w1;
                sol.objective_value = obj1;
                sol.rank_one = true;
            }
        }
    }
    sol.primal_violation = std::max(0.0, constraint_violation(prob, sol.w_matrix));
    return sol;
}

RankOneBeam extract_rank_one(const CMatrix& w, double nu)
{
    if (w.rows() != w.cols() || w.rows() < 1)
        throw std::invalid_argument("extract_rank_one: matrix must be square");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(w));
    const auto k = w.rows() - 1;
    const double l1 = es.eigenvalues()[k];
    if (!(l1 > 1e-15))
        throw DegenerateMatrix("extract_rank_one: dominant eigenvalue vanishes");
    const double power = std::min(std::max(w.trace().real(), 0.0), nu);
    RankOneBeam out;
    out.w = canonical_phase(std::sqrt(power) * es.eigenvectors().col(k));
    out.defect_ratio = k > 0 ? std::max(es.eigenvalues()[k - 1], 0.0) / l1 : 0.0;
    return out;
}

}  // namespace wpt::conic
