// SPDX-License-Identifier: Apache-2.0
//
// fdrelay: finite-N and asymptotic rate analysis for full-duplex massive MIMO relays
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

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "test_support.hpp"

// Covered tests:
// - run_trial determinism, closed form, ZeroChannel propagation
// - SI sampling skipped exactly when relay distortion is off
// - Sweep: single-trial mean, parallelism independence, trial-order independence
// - Error context (N, trial) from failing trials
// - Argument checks
// - JSON and CSV round trips, CSV layout
// - Pairwise summation and sample statistics

using namespace fdrelay;

TEST_CASE("Experiment - run_trial")
{
    std::mt19937_64 g(4);
    const auto c = fdrelay_test::random_config(g, 2, 2, 16);
    const auto a = run_trial(c, 10, 3), b = run_trial(c, 10, 3);
    CHECK(a.sinr_sr == b.sinr_sr);
    CHECK(a.sinr_rd == b.sinr_rd);
    CHECK(a.rate_total == b.rate_total);
    CHECK_FALSE(run_trial(c, 10, 4).sinr_sr == a.sinr_sr);

    // All impairments off, one pair, one subcarrier.
    const auto ideal = make_uniform_config({.num_antennas = 24, .p_s = 1.5, .sigma2_n_r = 0.8, .gamma0 = 0.7});
    const auto ch = sample_channels(ideal, 10, 3);
    const auto r = run_trial(ideal, 10, 3);
    const double sinr = ch.h_hat_sr(0, 0).squaredNorm() * 1.5 / 0.8;
    CHECK(r.rate_sr(0, 0) == Catch::Approx(0.7 * std::log2(1.0 + sinr)).epsilon(1e-12));

    auto zero = make_uniform_config({.num_antennas = 4});
    zero.psi_hat_sr(0, 0) = 0.0;
    CHECK_THROWS_AS(run_trial(zero, 1, 0), ZeroChannel);

    auto invalid = c;
    invalid.gamma0 = 2.0;
    CHECK_THROWS_AS(run_trial(invalid, 1, 0), ConfigError);
}

TEST_CASE("Experiment - SI skipped without relay distortion")
{
    // Without relay distortion the SI statistics cannot influence the result.
    std::mt19937_64 g(6);
    auto c = fdrelay_test::random_config(g, 2, 2, 8);
    c.kappa_r_tilde.coeffs = {0.0};
    c.beta_r_tilde.coeffs = {0.0};
    CHECK_FALSE(relay_distortion_active(c));
    auto d = c;
    for (auto &x : d.psi_hat_rr.flat())
        x *= 10.0;
    const auto a = run_trial(c, 2, 0), b = run_trial(d, 2, 0);
    // sigma2_e_rr still enters; psi_hat_rr does not.
    CHECK(a.sinr_sr == b.sinr_sr);

    // Full-matrix pipeline gives the same SINRs.
    const auto ch = sample_channels(c, 2, 0);
    const auto full = rates(interference_breakdown(ch, build_mrc_mrt(ch), c), c);
    for (std::size_t n = 0; n < full.sinr_sr.size(); ++n)
        CHECK(full.sinr_sr.flat()[n] == a.sinr_sr.flat()[n]);
}

TEST_CASE("Experiment - sweep basics")
{
    std::mt19937_64 g(7);
    const auto c = fdrelay_test::random_config(g, 2, 2, 8);

    const auto one = run_sweep(c, {8}, 1, 21, 1);
    const auto trial = run_trial(c, 21, 0);
    const auto lim = asymptotic_rate(c);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 2; ++k)
        {
            CHECK(one.mean_rate(i, k, 0) == trial.rate_total(i, k));
            CHECK(one.std_rate(i, k, 0) == 0.0);
            CHECK(one.asymptotic_rate(i, k) == lim.rate_limit(i, k));
            CHECK(one.gap(i, k, 0) == std::abs(trial.rate_total(i, k) - lim.rate_limit(i, k)));
            CHECK(one.mean_sinr_sr(i, k, 0) == trial.sinr_sr(i, k));
        }
    CHECK(one.config_digest == config_digest(c));
    CHECK(one.trials == 1);
    CHECK(one.seed == 21);

    const auto serial = run_sweep(c, {4, 8, 16}, 12, 5, 1);
    const auto parallel = run_sweep(c, {4, 8, 16}, 12, 5, 8);
    CHECK(serial == parallel);
    CHECK(emit_json(serial) == emit_json(parallel));
    CHECK(emit_csv(serial) == emit_csv(parallel));

    // Trials evaluated in reverse order and reduced canonically give the same means.
    const auto cfg = with_antennas(c, 8);
    std::vector<double> slots(12);
    for (std::size_t t = 12; t-- > 0;)
        slots[t] = run_trial(cfg, 5, t).rate_total(1, 0);
    CHECK(summarize(slots).mean == serial.mean_rate(1, 0, 1));
    CHECK(summarize(slots).stddev == serial.std_rate(1, 0, 1));
}

TEST_CASE("Experiment - sweep errors")
{
    auto c = make_uniform_config({.num_pairs = 2, .num_subcarriers = 1, .num_antennas = 4});
    c.psi_hat_rd(1, 0) = 0.0;
    try
    {
        run_sweep(c, {4, 8}, 3, 1, 2);
        FAIL("expected TrialError");
    }
    catch (const TrialError &e)
    {
        CHECK(e.n() == 4);
        CHECK(e.trial() == 0);
        CHECK_THROWS_AS(std::rethrow_exception(e.cause()), ZeroChannel);
        CHECK(std::string(e.what()).find("N=4, trial 0") != std::string::npos);
    }

    const auto ok = make_uniform_config({.num_antennas = 4});
    CHECK_THROWS_AS(run_sweep(ok, {}, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_sweep(ok, {8, 4}, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_sweep(ok, {0, 4}, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_sweep(ok, {4}, 0, 1), std::invalid_argument);
    auto bad = ok;
    bad.kappa_s_tilde(0) = 1.0;
    CHECK_THROWS_AS(run_sweep(bad, {4}, 1, 1), ConfigError);
}

TEST_CASE("Experiment - result files")
{
    std::mt19937_64 g(8);
    const auto c = fdrelay_test::random_config(g, 2, 3, 4);
    const auto r = run_sweep(c, {4, 16}, 5, 99, 2);

    CHECK(parse_sweep_json(emit_json(r)) == r);

    const auto rows = parse_csv(emit_csv(r));
    CHECK(rows == sweep_rows(r));
    REQUIRE(rows.size() == 2 * 3 * 2);
    CHECK(rows[0].pair == 0);
    CHECK(rows[0].subcarrier == 0);
    CHECK(rows[0].n == 4);
    CHECK(rows[1].n == 16);
    CHECK(rows[2].subcarrier == 1);
    CHECK(emit_csv(r).starts_with("pair,subcarrier,n,mean_rate,std_rate,asymptotic_rate,gap\n"));

    // Infinite limits survive both formats.
    const auto ideal = make_uniform_config({.num_antennas = 4});
    const auto ri = run_sweep(ideal, {4}, 2, 1, 1);
    CHECK(std::isinf(ri.asymptotic_rate(0, 0)));
    CHECK(parse_sweep_json(emit_json(ri)) == ri);
    CHECK(parse_csv(emit_csv(ri)) == sweep_rows(ri));

    CHECK_THROWS_AS(parse_sweep_json("{"), ResultFormatError);
    CHECK_THROWS_AS(parse_sweep_json(R"({"n_values": [1]})"), ResultFormatError);
    CHECK_THROWS_AS(parse_csv("a,b\n"), ResultFormatError);
    CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\n0,0,4,1.0,x,1,1\n"), ResultFormatError);
    CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\n0,0,4,1.0\n"), ResultFormatError);
}

TEST_CASE("Experiment - statistics")
{
    std::vector<double> x(1000);
    std::iota(x.begin(), x.end(), 1.0);
    CHECK(pairwise_sum(x) == 500500.0);
    const auto s = summarize(x);
    CHECK(s.mean == 500.5);
    CHECK(s.median == 500.5);
    CHECK(s.stddev == Catch::Approx(std::sqrt(1000.0 * 1001.0 / 12.0)).epsilon(1e-12));

    // Pairwise summation keeps the error of many small terms tiny.
    std::vector<double> tenth(1 << 20, 0.1);
    CHECK(std::abs(pairwise_sum(tenth) - 0.1 * (1 << 20)) <= 1e-8);

    const std::vector<double> three = {3.0, 1.0, 2.0};
    CHECK(summarize(three).median == 2.0);
    const std::vector<double> single = {4.0};
    CHECK(summarize(single).stddev == 0.0);
}

TEST_CASE("Experiment - parallelism resolution")
{
    CHECK(resolve_parallelism(3) == 3);
    CHECK(resolve_parallelism(0) >= 1);

    // The lowest failing index is reported regardless of scheduling.
    for (std::size_t workers : {1u, 4u})
    {
        try
        {
            parallel_for(50, workers, [](std::size_t n) {
                if (n == 17 || n == 31)
                    throw std::runtime_error(std::to_string(n));
            });
            FAIL("expected an exception");
        }
        catch (const std::runtime_error &e)
        {
            CHECK(std::string(e.what()) == "17");
        }
    }
}
