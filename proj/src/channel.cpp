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

#include "wpt/channel.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

namespace wpt {

ChannelMatrix::ChannelMatrix(CMatrix gains, ChannelMeta meta) : gains_(std::move(gains)), meta_(meta)
{
    if (gains_.rows() < 1 || gains_.cols() < 1)
        throw std::invalid_argument("ChannelMatrix: need at least one row and one column");
    if (!gains_.allFinite())
        throw std::invalid_argument("ChannelMatrix: non-finite entry");
    for (Eigen::Index p = 0; p < gains_.rows(); ++p)
        if (gains_.row(p).norm() <= 0.0)
            throw std::invalid_argument("ChannelMatrix: row " + std::to_string(p) + " has zero norm");
}

RVector ChannelMatrix::received_powers(const CVector& w) const
{
    if (w.size() != gains_.cols())
        throw std::invalid_argument("received_powers: beam length does not match n_t");
    return (gains_ * w).cwiseAbs2();
}

RVector ChannelMatrix::received_powers(const CMatrix& w) const
{
    if (w.rows() != gains_.cols() || w.cols() != gains_.cols())
        throw std::invalid_argument("received_powers: matrix size does not match n_t");
    const CMatrix gw = gains_ * w;
    RVector q(gains_.rows());
    for (Eigen::Index p = 0; p < gains_.rows(); ++p)
        q[p] = std::max(0.0, gw.row(p).dot(gains_.row(p)).real());
    return q;
}

double path_loss_db(double distance_m)
{
    if (!(distance_m > 0.0))
        throw std::domain_error("path_loss_db: distance must be positive");
    return 35.3 + 37.6 * std::log10(distance_m);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(master) ^ index);
}

ChannelMatrix generate_rician(std::uint64_t seed, int n_t, int n_e, double distance_m, double k_factor)
{
    if (n_t < 1 || n_e < 1)
        throw std::invalid_argument("generate_rician: antenna counts must be >= 1");
    if (!(k_factor >= 0.0))
        throw std::invalid_argument("generate_rician: Rician factor must be >= 0");
    const double amp = std::sqrt(std::pow(10.0, -path_loss_db(distance_m) / 10.0));
    const double los_w = std::sqrt(k_factor / (k_factor + 1.0));
    const double nlos_w = std::sqrt(1.0 / (k_factor + 1.0));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMatrix g(n_e, n_t);
    for (int p = 0; p < n_e; ++p) {
        for (int q = 0; q < n_t; ++q) {
            const double re = normal(rng);
            const double im = normal(rng);
            const cdouble los = std::polar(1.0, std::numbers::pi * p * q / double(n_t + n_e));
            g(p, q) = amp * (los_w * los + nlos_w * cdouble(re, im));
        }
    }
    return ChannelMatrix(std::move(g), ChannelMeta{distance_m, k_factor, seed});
}

std::string format_exact(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_complex(cdouble z)
{
    return format_exact(z.real()) + "," + format_exact(z.imag());
}

namespace {

bool parse_double(std::string_view s, double& out)
{
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

cdouble parse_complex(const std::string& token)
{
    const auto comma = token.find(',');
    double re = 0.0, im = 0.0;
    if (comma == std::string::npos || !parse_double(std::string_view(token).substr(0, comma), re) ||
        !parse_double(std::string_view(token).substr(comma + 1), im))
        throw std::invalid_argument("malformed complex value '" + token + "'");
    return {re, im};
}

void write_channel(std::ostream& os, const ChannelMatrix& g)
{
    os << g.n_e() << ' ' << g.n_t() << '\n';
    for (int p = 0; p < g.n_e(); ++p) {
        for (int q = 0; q < g.n_t(); ++q) {
            if (q)
                os << ' ';
            os << format_complex(g.gains()(p, q));
        }
        os << '\n';
    }
}

ChannelMatrix read_channel(std::istream& is)
{
    std::string line;
    int line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(is, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                return true;
        }
        return false;
    };

    if (!next_line())
        throw ChannelParseError("channel file: missing header", 0);
    std::istringstream header(line);
    long ne = 0, nt = 0;
    std::string extra;
    if (!(header >> ne >> nt) || (header >> extra) || ne < 1 || nt < 1)
        throw ChannelParseError("channel file line " + std::to_string(line_no) + ": header must be 'ne nt'",
                                line_no);

    CMatrix g(ne, nt);
    for (long p = 0; p < ne; ++p) {
        if (!next_line())
            throw ChannelParseError("channel file: expected " + std::to_string(ne) + " rows, found " +
                                        std::to_string(p),
                                    line_no);
        std::istringstream row(line);
        std::vector<std::string> tokens;
        for (std::string tok; row >> tok;)
            tokens.push_back(tok);
        if (static_cast<long>(tokens.size()) != nt)
            throw ChannelParseError("channel file line " + std::to_string(line_no) + " (row " +
                                        std::to_string(p + 1) + "): expected " + std::to_string(nt) +
                                        " columns, found " + std::to_string(tokens.size()),
                                    line_no);
        for (long q = 0; q < nt; ++q) {
            try {
                g(p, q) = parse_complex(tokens[q]);
            } catch (const std::invalid_argument& e) {
                throw ChannelParseError("channel file line " + std::to_string(line_no) + " (row " +
                                            std::to_string(p + 1) + ", column " + std::to_string(q + 1) +
                                            "): " + e.what(),
                                        line_no);
            }
        }
    }
    if (next_line())
        throw ChannelParseError("channel file line " + std::to_string(line_no) + ": unexpected extra row",
                                line_no);
    return ChannelMatrix(std::move(g));
}

void save_channel(const ChannelMatrix& g, const std::filesystem::path& path)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_channel(os, g);
    if (!os)
        throw std::runtime_error("write failed: " + path.string());
}

ChannelMatrix load_channel(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open " + path.string());
    return read_channel(is);
}

}  // namespace wpt
