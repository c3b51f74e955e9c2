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

#ifndef WPT_CHANNEL_HPP
#define WPT_CHANNEL_HPP

#include "wpt/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace wpt {

struct ChannelMeta {
    double distance_m = 0.0;
    double rician_k = 0.0;
    std::uint64_t seed = 0;
};

/// N_e x N_t complex baseband gains between the transmitter and the
/// harvester. Row p is the channel vector g_p of rectenna p; amplitudes are
/// linear and include the path loss.
class ChannelMatrix {
 public:
    explicit ChannelMatrix(CMatrix gains, ChannelMeta meta = {});

    const CMatrix& gains() const { return gains_; }
    const ChannelMeta& meta() const { return meta_; }

    int n_t() const { return static_cast<int>(gains_.cols()); }
    int n_e() const { return static_cast<int>(gains_.rows()); }

    /// Row vector g_p as a 1 x N_t matrix expression.
    auto row(int p) const { return gains_.row(p); }

    /// |g_p w|^2 for every rectenna.
    RVector received_powers(const CVector& w) const;

    /// g_p W g_p^H for every rectenna.
    RVector received_powers(const CMatrix& w) const;

    bool operator==(const ChannelMatrix& other) const { return gains_ == other.gains_; }

 private:
    CMatrix gains_;
    ChannelMeta meta_;
};

class ChannelParseError : public std::runtime_error {
 public:
    ChannelParseError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
    /// 1-based line number in the file (header is line 1), 0 when unknown.
    int line() const { return line_; }

 private:
    int line_;
};

/// Log-distance path loss in dB: 35.3 + 37.6 log10(d).
double path_loss_db(double distance_m);

/// Per-realization seed for Monte Carlo index `index` under `master`
/// (splitmix64 over the pair).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Rician channel: every entry is sqrt(PL) * (sqrt(K/(K+1)) * LOS + sqrt(1/(K+1)) * CN(0,1)),
/// LOS_pq = exp(j pi p q / (n_t + n_e)). Bit-reproducible for a given seed.
ChannelMatrix generate_rician(std::uint64_t seed, int n_t, int n_e, double distance_m, double k_factor);

// Text format: header "ne nt", then ne lines of nt "re,im" pairs.
void write_channel(std::ostream& os, const ChannelMatrix& g);
ChannelMatrix read_channel(std::istream& is);
void save_channel(const ChannelMatrix& g, const std::filesystem::path& path);
ChannelMatrix load_channel(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_exact(double v);
/// "re,im" with format_exact on both parts.
std::string format_complex(cdouble z);
/// Parses "re,im"; throws std::invalid_argument on malformed input.
cdouble parse_complex(const std::string& token);

}  // namespace wpt

#endif  // WPT_CHANNEL_HPP
