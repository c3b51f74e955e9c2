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

// Command line front end: phi-curve, optimize, experiment, selftest.

#include "wpt/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using namespace wpt;
using namespace wpt::harness;

namespace {

struct Overrides {
    std::string config;
    std::vector<std::string> sets;
    std::optional<std::string> n_t, n_e, p_x, out;
    std::optional<double> distance, rician_k, delta_rho, eps_sca;
    std::optional<int> realizations, n_rho, restarts;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* app, Overrides& o)
{
    app->add_option("-c,--config", o.config, "config file (key = value with [sections])");
    app->add_option("--set", o.sets, "override any config key, e.g. --set grid.n_rho=200");
    app->add_option("--n-t", o.n_t, "transmit antennas (comma list)");
    app->add_option("--n-e", o.n_e, "rectennas (comma list)");
    app->add_option("--p-x", o.p_x, "budgets with unit, e.g. \"10 W, 40 dBm\"");
    app->add_option("--distance", o.distance, "link distance in m");
    app->add_option("--rician-k", o.rician_k, "Rician factor (linear)");
    app->add_option("--realizations", o.realizations, "channel realizations per sweep point");
    app->add_option("--seed", o.seed, "master seed");
    app->add_option("--delta-rho", o.delta_rho, "grid step in W");
    app->add_option("--n-rho", o.n_rho, "number of grid steps");
    app->add_option("--eps-sca", o.eps_sca, "relative SCA stopping tolerance");
    app->add_option("--restarts", o.restarts, "SCA restarts per power level");
    app->add_option("-o,--out", o.out, "output file (stdout when omitted)");
}

ExperimentConfig resolve(const Overrides& o)
{
    ExperimentConfig cfg;
    if (!o.config.empty())
        cfg = load_config(o.config);
    const auto put = [&](const char* key, const std::string& v) { set_config_value(cfg, key, v); };
    if (o.n_t) put("system.n_t", *o.n_t);
    if (o.n_e) put("system.n_e", *o.n_e);
    if (o.p_x) put("budget.p_x", *o.p_x);
    if (o.distance) cfg.distance_m = *o.distance;
    if (o.rician_k) cfg.rician_k = *o.rician_k;
    if (o.realizations) cfg.realizations = *o.realizations;
    if (o.seed) cfg.seed = *o.seed;
    if (o.delta_rho) cfg.delta_rho = *o.delta_rho;
    if (o.n_rho) cfg.n_rho = *o.n_rho;
    if (o.eps_sca) cfg.eps_sca = *o.eps_sca;
    if (o.restarts) cfg.n_restarts = *o.restarts;
    if (o.out) cfg.output = *o.out;
    for (const auto& s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got '" + s + "'");
        put(s.substr(0, eq).c_str(), s.substr(eq + 1));
    }
    cfg.workers = workers_from_env(cfg.workers);
    cfg.validate();
    return cfg;
}

// Writes through `emit` to cfg.output, or to stdout when it is empty.
template <class F>
void write_out(const std::string& path, F&& emit)
{
    if (path.empty()) {
        emit(std::cout);
        return;
    }
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write '" + path + "'");
    emit(f);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Transmit strategy design for MIMO wireless power transfer"};
    app.require_subcommand(1);

    Overrides curve_o, opt_o, exp_o;
    auto* curve = app.add_subcommand("phi-curve", "tabulate the rectenna output power curve as CSV");
    add_common(curve, curve_o);

    auto* opt = app.add_subcommand("optimize", "design the two-point policy for one channel");
    add_common(opt, opt_o);
    std::string channel_file, policy_out, report_out;
    opt->add_option("--channel", channel_file, "channel file (otherwise generated from --seed)");
    opt->add_option("--policy-out", policy_out, "policy record path (stdout when omitted)");
    opt->add_option("--report-out", report_out, "JSON report path (stderr when omitted)");

    auto* exp = app.add_subcommand("experiment", "Monte Carlo sweep over budgets or antenna counts");
    add_common(exp, exp_o);
    std::string kind;
    exp->add_option("--kind", kind, "budget_sweep | ne_sweep | nt_sweep");
    std::string meta_out;
    exp->add_option("--meta-out", meta_out, "JSON metadata path");

    auto* self = app.add_subcommand("selftest", "run quick internal consistency checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (curve->parsed()) {
            const auto cfg = resolve(curve_o);
            write_out(cfg.output, [&](std::ostream& os) { run_phi_curve(cfg, os); });
            return 0;
        }
        if (opt->parsed()) {
            const auto cfg = resolve(opt_o);
            const auto g = channel_file.empty() ? default_channel(cfg) : load_channel(channel_file);
            const auto res = run_optimize(cfg, g);
            write_out(policy_out, [&](std::ostream& os) { strategy::write_policy(os, res.policy); });
            const std::string text = res.report.dump(2) + "\n";
            if (report_out.empty())
                std::cerr << text;
            else
                write_out(report_out, [&](std::ostream& os) { os << text; });
            return 0;
        }
        if (exp->parsed()) {
            if (!kind.empty())
                exp_o.sets.push_back("experiment.kind=" + kind);
            const auto cfg = resolve(exp_o);
            const auto res = run_experiment(cfg);
            write_out(cfg.output, [&](std::ostream& os) { write_experiment_csv(res, os); });
            const std::string meta = meta_out.empty() && !cfg.output.empty() ? cfg.output + ".meta.json" : meta_out;
            if (!meta.empty())
                write_out(meta, [&](std::ostream& os) { os << res.metadata.dump(2) << '\n'; });
            if (res.any_failed()) {
                std::cerr << "some realizations failed; see the metadata file\n";
                return 2;
            }
            return 0;
        }
        if (self->parsed())
            return run_selftest(std::cout) ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
