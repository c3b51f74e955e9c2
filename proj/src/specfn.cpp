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

#include "wpt/specfn.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wpt::specfn {
namespace {

constexpr double kSeriesCutoff = 15.0;
constexpr double kMaxArgument = 700.0;

void check_bessel_argument(double x)
{
    if (!(x >= 0.0))
        throw std::domain_error("bessel: argument must be non-negative");
    if (x > kMaxArgument)
        throw std::overflow_error("bessel: argument exceeds representable range");
}

// sum_k (x/2)^(2k+order) / (k! (k+order)!)
double bessel_series(double x, int order)
{
    const double half = 0.5 * x;
    const double q = half * half;
    double term = (order == 0) ? 1.0 : half;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (double(k) * double(k + order));
        sum += term;
        if (term < sum * 1e-17)
            break;
    }
    return sum;
}

// Hankel expansion I_n(x) ~ e^x / sqrt(2 pi x) * sum_k (-1)^k a_k(n) / x^k,
// a_k(n) = prod_{i=1..k} (4n^2 - (2i-1)^2) / (k! 8^k). Truncated at the
// smallest term.
double bessel_asymptotic(double x, int order)
{
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (k * 8.0 * x);
        if (std::abs(term) >= prev)
            break;
        sum += term;
        prev = std::abs(term);
        if (prev < 1e-17 * std::abs(sum))
            break;
    }
    return std::exp(x) / std::sqrt(2.0 * std::numbers::pi * x) * sum;
}

}  // namespace

double lambert_w0(double x)
{
    constexpr double inv_e = 1.0 / std::numbers::e;
    if (std::isnan(x) || x < -inv_e - kBranchSlack)
        throw std::domain_error("lambert_w0: argument below -1/e");
    if (x == 0.0)
        return 0.0;
    if (std::isinf(x))
        return x;
    if (x <= -inv_e)
        return -1.0;

    double w;
    if (x < -0.25) {
        // branch-point expansion in p = sqrt(2(e x + 1))
        const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (x < std::numbers::e) {
        w = std::log1p(x) * (1.0 - std::log1p(std::log1p(x)) / (2.0 + std::log1p(x)));
    } else {
        const double l1 = std::log(x);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }

    // Halley
    for (int it = 0; it < 50; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        if (wp1 <= 0.0)
            break;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        const double step = f / denom;
        w -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w)))
            break;
    }
    return std::max(w, -1.0);
}

double bessel_i0(double x)
{
    check_bessel_argument(x);
    return x <= kSeriesCutoff ? bessel_series(x, 0) : bessel_asymptotic(x, 0);
}

double bessel_i1(double x)
{
    check_bessel_argument(x);
    return x <= kSeriesCutoff ? bessel_series(x, 1) : bessel_asymptotic(x, 1);
}

}  // namespace wpt::specfn
