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

#ifndef WPT_HARNESS_HPP
#define WPT_HARNESS_HPP

#include "wpt/baselines.hpp"
#include "wpt/strategy.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace wpt::harness {

class ConfigError : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Everything an experiment depends on. Output is a pure function of this.
struct ExperimentConfig {
    std::vector<int> n_t{2};
    std::vector<int> n_e{1};
    std::vector<double> p_x_w{10.0};  ///< budgets in watts (dBm input is converted)
    double distance_m = 10.0;
    double rician_k = 1.0;
    int realizations = 100;
    std::uint64_t seed = 1;
    double delta_rho = 0.1;
    int n_rho = 1000;
    double eps_sca = 1e-6;
    int n_restarts = 3;
    RectennaParams params{};
    /// When set, the rectenna parameters are derived from these instead.
    std::optional<CircuitConstants> circuit;
    std::string kind = "budget_sweep";
    std::string output;
    int curve_points = 401;
    int workers = 1;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    /// params, or the values derived from circuit when that is set.
    RectennaParams rectenna() const;

    beamopt::ScaSettings sca() const;
};

/// Reads `[section]` headers and `key = value` lines; `#` starts a comment.
/// Unknown keys are errors. A [circuit] section derives the rectenna
/// parameters from raw circuit values.
ExperimentConfig parse_config(std::istream& is, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Sets one field by its `section.key` name (the same names as the file).
void set_config_value(ExperimentConfig& cfg, const std::string& dotted_key, const std::string& value);

/// Power with an optional unit suffix: "10", "10 W", "250 mW", "40 dBm".
double parse_power(const std::string& text);
double watt_to_dbm(double w);

/// Worker count from WPT_WORKERS, at least 1; `fallback` when unset.
int workers_from_env(int fallback = 1);

/// CSV cell with 12 significant digits.
std::string csv_number(double v);

/// Harvested power of one rectenna over [0, 4 A_s^2]; columns z_sq_W, phi_W.
void run_phi_curve(const ExperimentConfig& cfg, std::ostream& csv);

struct OptimizeResult {
    strategy::TwoPointPolicy policy;
    nlohmann::json report;
};

/// Full pipeline on one channel at budget cfg.p_x_w.front().
OptimizeResult run_optimize(const ExperimentConfig& cfg, const ChannelMatrix& g);

/// Channel used by `optimize` when no file is given: realization 0 of the
/// configured system (first n_t, first n_e).
ChannelMatrix default_channel(const ExperimentConfig& cfg);

/// Outcome of the three schemes on one channel realization.
struct RealizationResult {
    double proposed = 0.0;
    double baseline1 = 0.0;
    double baseline2 = 0.0;
    bool failed = false;
    std::string note;
};

/// Proposed policy and both baselines for every budget in `budgets`, using
/// one grid per channel.
std::vector<RealizationResult> evaluate_channel(const ExperimentConfig& cfg, const ChannelMatrix& g,
                                                const std::vector<double>& budgets);

struct SweepRow {
    double x = 0.0;  ///< sweep coordinate (budget in W, or antenna count)
    /// proposed, baseline 1 (energy beamforming), baseline 2 (single beam)
    double mean[3] = {0, 0, 0};
    double se[3] = {0, 0, 0};  ///< standard error of the mean
    int ok = 0;
    int failed = 0;
};

struct ExperimentResult {
    std::string kind;
    std::vector<SweepRow> rows;
    nlohmann::json metadata;
    bool any_failed() const;
};

/// Monte Carlo sweep of kind budget_sweep, ne_sweep or nt_sweep. Realization
/// r of every sweep point uses seed derive_seed(cfg.seed, r).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

void write_experiment_csv(const ExperimentResult& res, std::ostream& os);

/// Quick internal consistency checks; one line per check on `log`.
bool run_selftest(std::ostream& log);

}  // namespace wpt::harness

#endif  // WPT_HARNESS_HPP
