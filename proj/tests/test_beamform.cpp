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

#include "test_support.hpp"

// Covered tests:
// - Normalization examples for MRC and MRT
// - Unit norm of every filter in random realizations
// - ZeroChannel on both links
// - Phase equivariance and scale invariance

using namespace fdrelay;
using namespace std::complex_literals;

TEST_CASE("Beamform - examples")
{
    auto ch = fdrelay_test::manual_channels(1, 1, 2);
    ch.h_hat_sr(0, 0) << 3.0, 4.0i;
    ch.h_hat_rd(0, 0) << 1.0, 1.0;
    const auto f = build_mrc_mrt(ch);
    CHECK(std::abs(f.u_r(0, 0)[0] - 0.6) < 1e-15);
    CHECK(std::abs(f.u_r(0, 0)[1] - 0.8i) < 1e-15);
    CHECK(std::abs(f.v_r(0, 0)[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(f.v_r(0, 0)[1] - 1.0 / std::sqrt(2.0)) < 1e-15);

    // MRT conjugates the row channel.
    ch.h_hat_rd(0, 0) << 1.0i, 0.0;
    CHECK(std::abs(build_mrc_mrt(ch).v_r(0, 0)[0] + 1.0i) < 1e-15);
}

TEST_CASE("Beamform - unit norm")
{
    std::mt19937_64 g(3);
    for (int rep = 0; rep < 10; ++rep)
    {
        const auto c = fdrelay_test::random_config(g, 3, 2, 16);
        const auto ch = sample_channels(c, rep, 0, {.self_interference = false});
        const auto f = build_mrc_mrt(ch);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < 2; ++k)
            {
                CHECK(std::abs(f.u_r(i, k).norm() - 1.0) <= 1e-12);
                CHECK(std::abs(f.v_r(i, k).norm() - 1.0) <= 1e-12);
                // Matched filters achieve |u^H h| = ||h||.
                CHECK(std::abs(f.u_r(i, k).dot(ch.h_hat_sr(i, k))) ==
                      Catch::Approx(ch.h_hat_sr(i, k).norm()).epsilon(1e-12));
            }
    }
}

TEST_CASE("Beamform - zero channel")
{
    auto ch = fdrelay_test::manual_channels(2, 2, 3);
    for (auto &h : ch.h_hat_sr)
        h.setOnes();
    for (auto &h : ch.h_hat_rd)
        h.setOnes();
    ch.h_hat_sr(1, 0).setZero();
    try
    {
        build_mrc_mrt(ch);
        FAIL("expected ZeroChannel");
    }
    catch (const ZeroChannel &e)
    {
        CHECK(e.pair() == 1);
        CHECK(e.subcarrier() == 0);
        CHECK(e.link() == Link::SourceRelay);
    }

    ch.h_hat_sr(1, 0).setOnes();
    ch.h_hat_rd(0, 1).setZero();
    try
    {
        build_mrc_mrt(ch);
        FAIL("expected ZeroChannel");
    }
    catch (const ZeroChannel &e)
    {
        CHECK(e.pair() == 0);
        CHECK(e.subcarrier() == 1);
        CHECK(e.link() == Link::RelayDest);
    }

    // Sampling with zero variance triggers it as well.
    auto c = make_uniform_config({.num_antennas = 4});
    c.psi_hat_sr(0, 0) = 0.0;
    CHECK_THROWS_AS(build_mrc_mrt(sample_channels(c, 1, 0)), ZeroChannel);
}

TEST_CASE("Beamform - phase and scale")
{
    const auto c = make_uniform_config({.num_antennas = 8});
    const auto ch = sample_channels(c, 4, 0, {.self_interference = false});
    const auto f = build_mrc_mrt(ch);
    const double mu = std::norm(f.u_r(0, 0).dot(ch.h_hat_sr(0, 0)));

    auto rotated = ch;
    const std::complex<double> phase = std::polar(1.0, 0.7);
    rotated.h_hat_sr(0, 0) *= phase;
    const auto fr = build_mrc_mrt(rotated);
    CHECK((fr.u_r(0, 0) - phase * f.u_r(0, 0)).norm() <= 1e-14);
    CHECK(std::norm(fr.u_r(0, 0).dot(rotated.h_hat_sr(0, 0))) == Catch::Approx(mu).epsilon(1e-13));

    auto scaled = ch;
    scaled.h_hat_sr(0, 0) *= 3.5;
    scaled.h_hat_rd(0, 0) *= 0.25;
    const auto fs = build_mrc_mrt(scaled);
    CHECK((fs.u_r(0, 0) - f.u_r(0, 0)).norm() <= 1e-14);
    CHECK((fs.v_r(0, 0) - f.v_r(0, 0)).norm() <= 1e-14);
}
