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

#include <catch2/catch_amalgamated.hpp>

#include "wpt/rectenna.hpp"

#include <cmath>
#include <random>

using namespace wpt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

// 40-digit evaluations of the harvester curve for the default parameters.
static constexpr double kPhiSat = 7.35319174307969125311711459666636206381e-6;
static constexpr double kPhiHalf = 2.842001169531735795245010320057264872618e-6;
static constexpr double kDPhiHalf = 0.3210675674788534878380128234415963192426;

namespace {

CVector random_beam(std::mt19937_64& rng, int n, double scale)
{
    std::normal_distribution<double> nd;
    CVector w(n);
    for (int i = 0; i < n; ++i)
        w[i] = cdouble(nd(rng), nd(rng)) * scale;
    return w;
}

ChannelMatrix random_channel(std::mt19937_64& rng, int n_e, int n_t, double scale)
{
    std::normal_distribution<double> nd;
    CMatrix g(n_e, n_t);
    for (int p = 0; p < n_e; ++p)
        for (int q = 0; q < n_t; ++q)
            g(p, q) = cdouble(nd(rng), nd(rng)) * scale;
    return ChannelMatrix(g);
}

CMatrix random_hermitian(std::mt19937_64& rng, int n)
{
    std::normal_distribution<double> nd;
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = cdouble(nd(rng), nd(rng));
    return hermitian_part(a);
}

}  // namespace

TEST_CASE("derive_composite_params")
{
    CircuitConstants c;
    c.mu = 1.0;
    c.v_t = 0.025;
    c.i_s = 5e-6;
    c.r_s = 0.0;
    c.r_l = 1e4;
    c.re_inv_za = 1600.0;
    const RectennaParams p = derive_composite_params(c);
    CHECK_THAT(p.a, WithinRel(2.0, 1e-14));
    CHECK_THAT(p.b, WithinRel(1.0, 1e-14));
    CHECK(p.i_s == c.i_s);
    CHECK(p.r_l == c.r_l);
    CHECK(p.a_s_sq == c.a_s_sq);

    c.r_l *= 2.0;
    CHECK_THAT(derive_composite_params(c).a, WithinRel(2.0 * p.a, 1e-14));

    c.v_t = 0.0;
    CHECK_THROWS_AS(derive_composite_params(c), std::domain_error);
    c.v_t = 0.025;
    c.mu = 2.5;
    CHECK_THROWS_AS(derive_composite_params(c), std::domain_error);
}

TEST_CASE("harvested_power - zero, clamp and golden saturation value")
{
    const RectennaParams p;
    CHECK(harvested_power(p, 0.0) == 0.0);
    const double sat = saturation_power(p);
    CHECK_THAT(sat, WithinRel(kPhiSat, 1e-10));
    CHECK_THAT(harvested_power(p, p.a_s_sq / 2), WithinRel(kPhiHalf, 1e-10));
    for (double f : {1.0, 1.0000001, 2.0, 1e3})
        CHECK(harvested_power(p, f * p.a_s_sq) == sat);
    CHECK_THROWS_AS(harvested_power(p, -1e-9), std::domain_error);
}

TEST_CASE("harvested_power - monotone and bounded")
{
    const RectennaParams p;
    const double sat = saturation_power(p);
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double v = harvested_power(p, 4.0 * p.a_s_sq * i / 1000.0);
        CHECK(v >= prev);
        CHECK(v >= 0.0);
        CHECK(v <= sat);
        prev = v;
    }
}

TEST_CASE("harvested_power_derivative - finite differences")
{
    const RectennaParams p;
    CHECK(harvested_power_derivative(p, 2.0 * p.a_s_sq) == 0.0);
    CHECK(harvested_power_derivative(p, p.a_s_sq) == 0.0);
    CHECK(harvested_power_derivative(p, 0.0) == 0.0);

    const double q = p.a_s_sq / 2;
    const double h = 1e-9 * p.a_s_sq;
    const double fd = (harvested_power(p, q + h) - harvested_power(p, q - h)) / (2 * h);
    CHECK_THAT(harvested_power_derivative(p, q), WithinRel(fd, 1e-5));
    CHECK_THAT(harvested_power_derivative(p, q), WithinRel(kDPhiHalf, 1e-9));

    for (int i = 1; i < 20; ++i) {
        const double qi = p.a_s_sq * i / 20.0;
        const double hi = 1e-7 * p.a_s_sq;
        const double fdi = (harvested_power(p, qi + hi) - harvested_power(p, qi - hi)) / (2 * hi);
        CHECK_THAT(harvested_power_derivative(p, qi), WithinRel(fdi, 1e-5));
    }

    CHECK(harvested_power_derivative(p, 1e-12) <= 1e-6 * harvested_power_derivative(p, q));
}

TEST_CASE("total_power - phase invariance and saturation")
{
    const RectennaParams p;
    std::mt19937_64 rng(11);
    const ChannelMatrix g = random_channel(rng, 3, 2, 1e-3);
    CHECK(total_power(p, g, CVector::Zero(2)) == 0.0);

    const CVector w = random_beam(rng, 2, 2.0);
    const CVector rotated = w * std::polar(1.0, 1.234);
    CHECK_THAT(total_power(p, g, rotated), WithinRel(total_power(p, g, w), 1e-12));
    CHECK(total_power(p, g, w) <= g.n_e() * saturation_power(p));

    CMatrix gm(2, 1);
    gm << 1.0, cdouble(0.0, 1.0);
    const ChannelMatrix g2(gm);
    CVector big(1);
    big << 1.0;
    CHECK(total_power(p, g2, big) == 2.0 * saturation_power(p));
    CHECK_THROWS_AS(total_power(p, g2, CVector::Zero(3)), std::invalid_argument);
}

TEST_CASE("matrix_power - consistency with beam evaluation")
{
    const RectennaParams p;
    std::mt19937_64 rng(21);
    const ChannelMatrix g = random_channel(rng, 3, 3, 1e-3);
    CHECK(matrix_power(p, g, CMatrix::Zero(3, 3)) == 0.0);
    for (int i = 0; i < 100; ++i) {
        const CVector w = random_beam(rng, 3, 2.0);
        const CMatrix ww = w * w.adjoint();
        CHECK_THAT(matrix_power(p, g, ww), WithinAbs(total_power(p, g, w), 1e-10));
    }

    double min_norm = 1e300;
    for (int r = 0; r < g.n_e(); ++r)
        min_norm = std::min(min_norm, g.row(r).squaredNorm());
    const CMatrix big = CMatrix::Identity(3, 3) * (p.a_s_sq / min_norm) * 10.0;
    CHECK(matrix_power(p, g, big) == 3.0 * saturation_power(p));

    CMatrix skew = CMatrix::Identity(3, 3);
    skew(0, 1) = 1e-3;
    CHECK_THROWS_AS(matrix_power(p, g, skew), std::invalid_argument);
}

TEST_CASE("matrix_gradient - structure")
{
    const RectennaParams p;
    std::mt19937_64 rng(5);
    const ChannelMatrix g = random_channel(rng, 2, 3, 1e-3);
    const CMatrix big = CMatrix::Identity(3, 3) * 1e6;
    CHECK(matrix_gradient(p, g, big).norm() == 0.0);

    const ChannelMatrix g1 = random_channel(rng, 1, 3, 1e-3);
    const CVector w = random_beam(rng, 3, 1.0);
    const CMatrix grad = matrix_gradient(p, g1, w * w.adjoint());
    const CMatrix outer = g1.row(0).adjoint() * g1.row(0);
    const double ratio = grad(0, 0).real() / outer(0, 0).real();
    CHECK(ratio > 0.0);
    CHECK((grad - ratio * outer).norm() <= 1e-12 * grad.norm());
}

TEST_CASE("matrix_gradient - central finite differences away from the knee")
{
    const RectennaParams p;
    std::mt19937_64 rng(99);
    int checked = 0;
    while (checked < 20) {
        const ChannelMatrix g = random_channel(rng, 3, 3, 1e-3);
        const CVector a = random_beam(rng, 3, 1.0);
        const CVector b = random_beam(rng, 3, 1.0);
        const CMatrix w = a * a.adjoint() + 0.3 * b * b.adjoint();
        const RVector q = g.received_powers(w);
        bool near_knee = false;
        for (double v : q)
            near_knee = near_knee || std::abs(v - p.a_s_sq) <= 1e-3 * p.a_s_sq;
        if (near_knee)
            continue;
        const CMatrix delta = random_hermitian(rng, 3);
        const double h = 1e-4 * w.norm() / delta.norm();
        const double fd = (matrix_power(p, g, w + h * delta) - matrix_power(p, g, w - h * delta)) / (2 * h);
        const double an = (matrix_gradient(p, g, w).adjoint() * delta).trace().real();
        if (std::abs(fd) < 1e-14)
            continue;
        CHECK_THAT(an, WithinRel(fd, 1e-4));
        ++checked;
    }
}
