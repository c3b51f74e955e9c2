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

#include "wpt/strategy.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace wpt::strategy {

namespace {

// Index pair (i, j) minimizing over i the largest slope from i to any j.
std::pair<std::size_t, std::size_t> minmax_slope(const std::vector<double>& x, const std::vector<double>& y,
                                                 std::size_t i_end, std::size_t j_begin)
{
    std::size_t best_i = 0, best_j = 0;
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t i = 0; i < i_end; ++i) {
        double top = -std::numeric_limits<double>::infinity();
        std::size_t top_j = 0;
        bool any = false;
        for (std::size_t j = std::max(j_begin, i + 1); j < x.size(); ++j) {
            const double s = (y[j] - y[i]) / (x[j] - x[i]);
            if (!any || s > top) {
                top = s;
                top_j = j;
                any = true;
            }
        }
        if (any && (!found || top < best)) {
            best = top;
            best_i = i;
            best_j = top_j;
            found = true;
        }
    }
    if (!found)
        throw std::invalid_argument("no admissible pair of grid points");
    return {best_i, best_j};
}

void note(std::vector<std::string>& w, std::string msg)
{
    w.push_back(std::move(msg));
}

std::string format_vector(const CVector& v)
{
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i)
            out += ' ';
        out += format_complex(v[i]);
    }
    return out;
}

CVector parse_vector(const std::string& text)
{
    std::istringstream is(text);
    std::vector<cdouble> vals;
    std::string tok;
    while (is >> tok)
        vals.push_back(parse_complex(tok));
    CVector v(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = vals[i];
    return v;
}

}  // namespace

void ScalarFunctionTable::validate() const
{
    if (nu.empty() || nu.size() != f.size())
        throw std::invalid_argument("function table: empty or mismatched columns");
    for (std::size_t i = 0; i < nu.size(); ++i) {
        if (!std::isfinite(nu[i]) || !std::isfinite(f[i]))
            throw std::invalid_argument("function table: non-finite entry");
        if (i > 0 && !(nu[i] > nu[i - 1]))
            throw std::invalid_argument("function table: grid not strictly ascending");
        if (monotone && i > 0 && f[i] < f[i - 1])
            throw std::invalid_argument("function table: values decrease on a table marked monotone");
    }
}

TwoPointSolution solve_two_point(const ScalarFunctionTable& tab, double nu_bar)
{
    tab.validate();
    const auto& x = tab.nu;
    if (!(nu_bar >= x.front() && nu_bar <= x.back()))
        throw std::out_of_range("solve_two_point: target outside the grid");

    // candidates for nu1 are grid points <= nu_bar, for nu2 those >= nu_bar
    const std::size_t i_end = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), nu_bar) - x.begin());
    const std::size_t j_begin = static_cast<std::size_t>(std::lower_bound(x.begin(), x.end(), nu_bar) - x.begin());

    TwoPointSolution out;
    if (x.size() == 1) {
        out.nu1 = out.nu2 = x[0];
        out.value = tab.f[0];
        return out;
    }

    const auto [i, j] = minmax_slope(x, tab.f, i_end, j_begin);
    const double beta = (x[j] - nu_bar) / (x[j] - x[i]);
    if (beta <= 0.0 || beta >= 1.0) {
        const std::size_t k = beta >= 1.0 ? i : j;
        out.i1 = out.i2 = k;
        out.nu1 = out.nu2 = x[k];
        out.value = tab.f[k];
        return out;
    }
    out.i1 = i;
    out.i2 = j;
    out.nu1 = x[i];
    out.nu2 = x[j];
    out.beta = beta;
    out.value = beta * tab.f[i] + (1.0 - beta) * tab.f[j];
    return out;
}

GridTable build_grid_table(const ChannelMatrix& g, const RectennaParams& p, const GridSettings& s)
{
    if (!(s.delta_rho > 0.0) || !std::isfinite(s.delta_rho))
        throw std::invalid_argument("grid: delta_rho must be positive");
    if (s.n_rho < 1)
        throw std::invalid_argument("grid: n_rho must be at least 1");
    p.validate();

    const std::size_t n = static_cast<std::size_t>(s.n_rho) + 1;
    GridTable tab{g, p, s.delta_rho, {}, {}, {}, {}, {}, {}, {}, {}};
    tab.rho.resize(n);
    for (std::size_t m = 0; m < n; ++m)
        tab.rho[m] = static_cast<double>(m) * s.delta_rho;

    std::vector<beamopt::PhiPoint> raw(n);
    std::vector<std::string> errors(n);
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t m; (m = next.fetch_add(1)) < n;) {
            try {
                raw[m] = beamopt::phi_of_nu(g, p, tab.rho[m], s.sca, s.n_restarts, s.seed);
            } catch (const std::exception& e) {
                errors[m] = e.what();
                if (errors[m].empty())
                    errors[m] = "unknown failure";
            }
        }
    };
    const int workers = std::clamp(s.workers, 1, static_cast<int>(n));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t)
            pool.emplace_back(work);
        for (auto& t : pool)
            t.join();
    }

    // assemble in index order so the result is independent of scheduling
    for (std::size_t m = 0; m < n; ++m) {
        const bool ok = errors[m].empty();
        CVector carried;
        if (m == 0)
            carried = CVector::Zero(g.n_t());
        else if (tab.vecs[m - 1].norm() == 0.0)
            carried = beamopt::energy_beam(g, tab.rho[m]);
        else
            carried = tab.vecs[m - 1] * std::sqrt(tab.rho[m] / tab.rho[m - 1]);
        const double carried_phi = total_power(p, g, carried);

        if (!ok)
            note(tab.warnings, "grid point " + std::to_string(m) + " failed (" + errors[m] +
                                   "); previous beam carried forward");
        const bool use_raw = ok && raw[m].phi >= carried_phi;
        tab.valid.push_back(ok);
        tab.repaired.push_back(ok && !use_raw);
        tab.vecs.push_back(use_raw ? raw[m].w : carried);
        tab.phi.push_back(use_raw ? raw[m].phi : carried_phi);
        tab.k_star.push_back(ok ? raw[m].plan.k_star : -1);
        tab.sca_iters.push_back(ok ? raw[m].sca_iters : 0);
    }

    const double ceiling = g.n_e() * saturation_power(p);
    if (tab.phi.back() < ceiling * (1.0 - 1e-6)) {
        std::ostringstream os;
        os << "grid ends below the saturation ceiling (" << tab.phi.back() << " < " << ceiling
           << " W); budgets near the top of the grid may be suboptimal, consider a larger n_rho";
        note(tab.warnings, os.str());
    }
    return tab;
}

TwoPointPolicy grid_minmax_policy(const GridTable& tab, double p_x)
{
    if (tab.rho.size() < 2)
        throw std::invalid_argument("grid_minmax_policy: table needs at least two points");
    if (!(p_x > 0.0))
        throw std::out_of_range("grid_minmax_policy: budget must be positive");
    if (p_x > tab.rho.back())
        throw std::out_of_range("grid_minmax_policy: budget " + format_exact(p_x) + " W exceeds the grid end " +
                                format_exact(tab.rho.back()) + " W; increase n_rho or delta_rho");

    const std::size_t n =
        static_cast<std::size_t>(std::lower_bound(tab.rho.begin(), tab.rho.end(), p_x) - tab.rho.begin());
    const auto [i, j] = minmax_slope(tab.rho, tab.phi, n, n);

    TwoPointPolicy pol;
    pol.p_x = p_x;
    const double beta = (tab.rho[j] - p_x) / (tab.rho[j] - tab.rho[i]);
    if (beta <= 0.0) {
        // chord collapses onto the budget itself
        pol.nu1 = pol.nu2 = tab.rho[j];
        pol.w1 = pol.w2 = tab.vecs[j];
        pol.beta = 1.0;
    } else {
        pol.nu1 = tab.rho[i];
        pol.nu2 = tab.rho[j];
        pol.w1 = tab.vecs[i];
        pol.w2 = tab.vecs[j];
        pol.beta = beta;
    }
    pol.avg_phi = average_harvested_power(pol, tab.channel, tab.params);
    return pol;
}

double average_harvested_power(const TwoPointPolicy& pol, const ChannelMatrix& g, const RectennaParams& p)
{
    const double a = total_power(p, g, pol.w1);
    if (pol.beta == 1.0)
        return a;
    return pol.beta * a + (1.0 - pol.beta) * total_power(p, g, pol.w2);
}

void write_policy(std::ostream& os, const TwoPointPolicy& pol)
{
    os << "kind " << pol.kind << '\n'
       << "p_x " << format_exact(pol.p_x) << '\n'
       << "nu1 " << format_exact(pol.nu1) << '\n'
       << "nu2 " << format_exact(pol.nu2) << '\n'
       << "beta " << format_exact(pol.beta) << '\n'
       << "avg_phi " << format_exact(pol.avg_phi) << '\n'
       << "w1 " << format_vector(pol.w1) << '\n'
       << "w2 " << format_vector(pol.w2) << '\n';
}

TwoPointPolicy read_policy(std::istream& is)
{
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        const auto sp = line.find(' ');
        const std::string key = line.substr(0, sp);
        if (kv.count(key))
            throw std::runtime_error("policy line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        kv[key] = sp == std::string::npos ? std::string() : line.substr(sp + 1);
    }
    const auto need = [&](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw std::runtime_error(std::string("policy: missing key '") + key + "'");
        return it->second;
    };
    const auto num = [&](const char* key) {
        const std::string& v = need(key);
        double d = 0.0;
        const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
        if (ec != std::errc() || end != v.data() + v.size())
            throw std::runtime_error(std::string("policy: bad number for '") + key + "': " + v);
        return d;
    };
    TwoPointPolicy pol;
    if (kv.count("kind"))
        pol.kind = kv["kind"];
    pol.p_x = num("p_x");
    pol.nu1 = num("nu1");
    pol.nu2 = num("nu2");
    pol.beta = num("beta");
    pol.avg_phi = num("avg_phi");
    pol.w1 = parse_vector(need("w1"));
    pol.w2 = parse_vector(need("w2"));
    if (pol.w1.size() != pol.w2.size())
        throw std::runtime_error("policy: w1 and w2 differ in length");
    return pol;
}

}  // namespace wpt::strategy
