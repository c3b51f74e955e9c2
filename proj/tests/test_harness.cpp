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

#include "wpt/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

using namespace wpt;
using namespace wpt::harness;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

ExperimentConfig desk_config()
{
    ExperimentConfig cfg;
    cfg.n_t = {2};
    cfg.n_e = {2};
    cfg.distance_m = 2.0;
    cfg.delta_rho = 0.1;
    cfg.n_rho = 30;
    cfg.realizations = 3;
    cfg.p_x_w = {0.5, 3.0};
    return cfg;
}

}  // namespace

TEST_CASE("config - sections, lists, units and comments")
{
    std::istringstream is(R"(# sweep over rectenna counts
[system]
n_t = 4
n_e = 1, 2, 3
distance_m = 2.5   # desk scale
[budget]
p_x = 40 dBm, 250 mW, 3
[grid]
delta_rho = 0.05
n_rho = 400
[experiment]
kind = ne_sweep
realizations = 7
seed = 42
)");
    const auto cfg = parse_config(is);
    CHECK(cfg.n_t == std::vector<int>{4});
    CHECK(cfg.n_e == std::vector<int>{1, 2, 3});
    CHECK(cfg.distance_m == 2.5);
    REQUIRE(cfg.p_x_w.size() == 3);
    CHECK_THAT(cfg.p_x_w[0], WithinRel(10.0, 1e-15));
    CHECK_THAT(cfg.p_x_w[1], WithinRel(0.25, 1e-15));
    CHECK(cfg.p_x_w[2] == 3.0);
    CHECK(cfg.kind == "ne_sweep");
    CHECK(cfg.realizations == 7);
    CHECK(cfg.seed == 42);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("config - circuit section derives the rectenna parameters")
{
    std::istringstream is("[circuit]\nr_l = 2e4\n");
    const auto cfg = parse_config(is);
    const auto p = cfg.rectenna();
    CHECK_THAT(p.r_l, WithinRel(2e4, 1e-15));
    // I_s (R_L + R_s) / (mu V_T) with the remaining defaults
    CHECK_THAT(p.a, WithinRel(5e-6 * 2e4 / 0.025, 1e-12));
}

TEST_CASE("config - errors name the line and key")
{
    std::istringstream unknown("[system]\nn_t = 2\nantennas = 3\n");
    CHECK_THROWS_WITH(parse_config(unknown), ContainsSubstring("line 3") && ContainsSubstring("system.antennas"));
    std::istringstream bad_num("[grid]\ndelta_rho = fast\n");
    CHECK_THROWS_WITH(parse_config(bad_num), ContainsSubstring("grid.delta_rho"));
    std::istringstream orphan("n_t = 2\n");
    CHECK_THROWS_WITH(parse_config(orphan), ContainsSubstring("outside any"));
    std::istringstream unit("[budget]\np_x = 3 kW\n");
    CHECK_THROWS_WITH(parse_config(unit), ContainsSubstring("unknown unit"));

    ExperimentConfig cfg;
    cfg.p_x_w = {500.0};
    CHECK_THROWS_WITH(cfg.validate(), ContainsSubstring("grid.n_rho"));
    cfg = {};
    cfg.kind = "sweep";
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    set_config_value(cfg, "solver.n_restarts", "5");
    CHECK(cfg.n_restarts == 5);
    CHECK_THROWS_AS(set_config_value(cfg, "solver.restarts", "5"), ConfigError);
}

TEST_CASE("power units and number formatting")
{
    CHECK(parse_power("2") == 2.0);
    CHECK(parse_power("2 W") == 2.0);
    CHECK_THAT(parse_power("30dBm"), WithinRel(1.0, 1e-15));
    CHECK_THAT(watt_to_dbm(10.0), WithinAbs(40.0, 1e-12));
    CHECK(csv_number(1.0 / 3.0) == "0.333333333333");
    CHECK(csv_number(0.0) == "0");
}

TEST_CASE("worker count from the environment")
{
    ::setenv("WPT_WORKERS", "3", 1);
    CHECK(workers_from_env() == 3);
    ::setenv("WPT_WORKERS", "0", 1);
    CHECK(workers_from_env() == 1);
    ::setenv("WPT_WORKERS", "many", 1);
    CHECK(workers_from_env(2) == 2);
    ::unsetenv("WPT_WORKERS");
    CHECK(workers_from_env(4) == 4);
}

TEST_CASE("phi-curve output")
{
    ExperimentConfig cfg;
    std::ostringstream os;
    run_phi_curve(cfg, os);
    const auto rows = read_csv(os.str());
    REQUIRE(rows.size() == 402);
    CHECK(rows[0] == std::vector<std::string>{"z_sq_W", "phi_W"});
    CHECK(rows[1] == std::vector<std::string>{"0", "0"});
    const double a = cfg.params.a_s_sq;
    const std::string sat = csv_number(saturation_power(cfg.params));
    double prev = -1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double z = std::stod(rows[i][0]), phi = std::stod(rows[i][1]);
        CHECK(phi >= prev);
        prev = phi;
        if (z >= a)
            CHECK(rows[i][1] == sat);
    }
    CHECK(std::stod(rows.back()[0]) == 4.0 * a);
}

TEST_CASE("optimize - report consistency and determinism")
{
    auto cfg = desk_config();
    cfg.p_x_w = {0.5};
    const auto g = default_channel(cfg);
    const auto a = run_optimize(cfg, g);
    const auto b = run_optimize(cfg, g);
    CHECK(a.report.dump() == b.report.dump());
    CHECK(a.report["avg_phi_recomputed_W"].get<double>() == a.policy.avg_phi);
    CHECK(a.report["policy"]["avg_phi_W"].get<double>() >= a.report["baselines"]["single_beam_W"].get<double>() - 1e-9);
    CHECK(a.report["beams"].size() == 2);
    CHECK(a.report["beams"][0]["received_W"].size() == 2);
    const auto& pol = a.policy;
    CHECK_THAT(pol.beta * pol.nu1 + (1.0 - pol.beta) * pol.nu2, WithinAbs(0.5, 1e-9));
}

TEST_CASE("optimize - single antenna link reproduces the scalar two-point solution")
{
    auto cfg = desk_config();
    cfg.n_t = {1};
    cfg.n_e = {1};
    cfg.distance_m = 5.0;
    cfg.delta_rho = 0.25;
    cfg.n_rho = 80;
    const auto g = default_channel(cfg);
    strategy::ScalarFunctionTable siso;
    for (int m = 0; m <= cfg.n_rho; ++m) {
        siso.nu.push_back(m * cfg.delta_rho);
        siso.f.push_back(harvested_power(cfg.params, siso.nu.back() * std::norm(g.gains()(0, 0))));
    }
    for (int m : {1, 5, 17, 40, 79}) {
        cfg.p_x_w = {siso.nu[m]};
        const auto res = run_optimize(cfg, g);
        const auto ref = strategy::solve_two_point(siso, siso.nu[m]);
        INFO("m = " << m);
        CHECK_THAT(res.policy.avg_phi, WithinAbs(ref.value, 1e-9 * ref.value));
        CHECK(res.policy.nu1 == ref.nu1);
        CHECK(res.policy.nu2 == ref.nu2);
    }
}

TEST_CASE("experiment - budget sweep saturates, columns carry units")
{
    auto cfg = desk_config();
    const auto res = run_experiment(cfg);
    REQUIRE(res.rows.size() == 2);
    CHECK_FALSE(res.any_failed());
    const double ceiling = 2.0 * saturation_power(cfg.params);
    CHECK_THAT(res.rows[1].mean[0], WithinRel(ceiling, 0.01));
    for (const auto& r : res.rows) {
        CHECK(r.mean[0] >= r.mean[2] - 1e-9);
        CHECK(r.mean[2] >= r.mean[1] - 1e-9);
        CHECK(r.ok == 3);
    }
    std::ostringstream os;
    write_experiment_csv(res, os);
    const auto rows = read_csv(os.str());
    for (const auto& h : rows[0])
        if (h.find("mean") != std::string::npos || h.find("se") != std::string::npos || h.rfind("p_x", 0) == 0)
            CHECK((h.ends_with("_W") || h.ends_with("_dBm")));
    CHECK(res.metadata.contains("regime_note"));
}

TEST_CASE("experiment - rectenna sweep at a saturating budget grows by one ceiling per rectenna")
{
    auto cfg = desk_config();
    cfg.kind = "ne_sweep";
    cfg.n_e = {1, 2, 3};
    cfg.p_x_w = {3.0};
    cfg.realizations = 2;
    const auto res = run_experiment(cfg);
    REQUIRE(res.rows.size() == 3);
    for (const auto& r : res.rows)
        CHECK(r.mean[0] == r.x * saturation_power(cfg.params));
}

TEST_CASE("experiment - output independent of the worker count")
{
    auto cfg = desk_config();
    cfg.kind = "nt_sweep";
    cfg.n_t = {1, 2};
    const auto a = run_experiment(cfg);
    cfg.workers = 3;
    const auto b = run_experiment(cfg);
    std::ostringstream sa, sb;
    write_experiment_csv(a, sa);
    write_experiment_csv(b, sb);
    CHECK(sa.str() == sb.str());
    CHECK(a.metadata.dump() == b.metadata.dump());
}

TEST_CASE("selftest passes")
{
    std::ostringstream log;
    CHECK(run_selftest(log));
    CHECK(log.str().find("FAIL") == std::string::npos);
}
