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

#include <sstream>

#include "test_support.hpp"

// Covered tests:
// - Determinism and order independence of counter-based sampling
// - Zero variance gives exact zeros
// - Entry statistics: second moment, real/imag split, fourth moment
// - True channels: variance additivity and independence of the error
// - Independence across trials
// - Streamed SI matrices equal the full realization
// - Binary and JSON dump layouts
// - Reference values of the generator (pins the random stream)

using namespace fdrelay;

TEST_CASE("Channel - determinism")
{
    std::mt19937_64 g(1);
    const auto c = fdrelay_test::random_config(g, 2, 3, 6);
    const auto a = sample_channels(c, 42, 7);
    const auto b = sample_channels(c, 42, 7);
    CHECK(a.h_hat_sr == b.h_hat_sr);
    CHECK(a.h_hat_rd == b.h_hat_rd);
    CHECK(a.h_hat_sd == b.h_hat_sd);
    REQUIRE(a.H_hat_rr.size() == 3);
    for (std::size_t k = 0; k < 3; ++k)
    {
        CHECK(a.H_hat_rr[k] == b.H_hat_rr[k]);
        CHECK(a.H_hat_rr[k] == sample_self_interference(c, 42, 7, k));
    }

    const auto other_trial = sample_channels(c, 42, 8);
    const auto other_seed = sample_channels(c, 43, 7);
    CHECK_FALSE(a.h_hat_sr(0, 0) == other_trial.h_hat_sr(0, 0));
    CHECK_FALSE(a.h_hat_sr(0, 0) == other_seed.h_hat_sr(0, 0));

    // Skipping the SI matrices leaves every other tensor untouched.
    const auto lean = sample_channels(c, 42, 7, {.self_interference = false});
    CHECK(lean.h_hat_sr == a.h_hat_sr);
    CHECK(lean.h_hat_sd == a.h_hat_sd);
    CHECK_FALSE(lean.has_self_interference());

    // A different number of pairs does not perturb the streams of pair 0.
    auto up = make_uniform_config({.num_pairs = 3, .num_subcarriers = 3, .num_antennas = 6});
    for (std::size_t k = 0; k < 3; ++k)
        up.psi_hat_sr(0, k) = c.psi_hat_sr(0, k);
    const auto wider = sample_channels(up, 42, 7);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(wider.h_hat_sr(0, k) == a.h_hat_sr(0, k));
}

TEST_CASE("Channel - zero variance")
{
    auto c = make_uniform_config({.num_pairs = 2, .num_subcarriers = 2, .num_antennas = 5});
    c.psi_hat_sr(0, 0) = 0.0;
    const auto ch = sample_channels(c, 1, 0);
    CHECK(ch.h_hat_sr(0, 0).isZero(0.0));
    CHECK(ch.h_hat_sr(0, 0).size() == 5);
    CHECK_FALSE(ch.h_hat_sr(1, 0).isZero(0.0));
    for (const auto &H : ch.H_hat_rr)
        CHECK(H.isZero(0.0));
    for (const auto &z : ch.h_hat_sd)
        CHECK(z == cdouble{});

    const auto t = sample_true_channels(ch, c, 1, 0);
    CHECK(t.h_sr == ch.h_hat_sr);
    CHECK(t.h_rd == ch.h_hat_rd);
    CHECK(t.h_sd == ch.h_hat_sd);
}

TEST_CASE("Channel - entry statistics")
{
    const std::size_t N = 100000;
    auto c = make_uniform_config({.num_antennas = N, .psi_hat_sr = 1.0, .psi_hat_rd = 2.5});
    const auto ch = sample_channels(c, 3, 0, {.self_interference = false});

    const auto &h = ch.h_hat_sr(0, 0);
    const double m2 = h.squaredNorm() / N;
    CHECK(m2 >= 0.99);
    CHECK(m2 <= 1.01);

    // Real and imaginary parts each carry half the variance, uncorrelated.
    double re2 = 0.0, im2 = 0.0, reim = 0.0, m4 = 0.0;
    for (Eigen::Index n = 0; n < h.size(); ++n)
    {
        re2 += h[n].real() * h[n].real();
        im2 += h[n].imag() * h[n].imag();
        reim += h[n].real() * h[n].imag();
        m4 += std::norm(h[n]) * std::norm(h[n]);
    }
    CHECK(re2 / N == Catch::Approx(0.5).margin(3.0 * std::sqrt(2.0 * 0.25 / N)));
    CHECK(im2 / N == Catch::Approx(0.5).margin(3.0 * std::sqrt(2.0 * 0.25 / N)));
    CHECK(std::abs(reim / N) < 3.0 * 0.5 / std::sqrt(double(N)));
    // E|h|^4 = 2 psi^2 for CN(0, psi); sd of |h|^4 is sqrt(24 - 4) psi^2.
    CHECK(m4 / N == Catch::Approx(2.0).margin(3.0 * std::sqrt(20.0 / N)));

    const double rd2 = ch.h_hat_rd(0, 0).squaredNorm() / N;
    CHECK(rd2 == Catch::Approx(2.5).margin(3.0 * 2.5 / std::sqrt(double(N))));

    // Kolmogorov-Smirnov distance of the real parts against N(0, 1/2).
    std::vector<double> re(h.size());
    for (Eigen::Index n = 0; n < h.size(); ++n)
        re[n] = h[n].real() / std::sqrt(0.5);
    std::sort(re.begin(), re.end());
    double ks = 0.0;
    for (std::size_t n = 0; n < re.size(); ++n)
    {
        const double cdf = 0.5 * std::erfc(-re[n] / std::sqrt(2.0));
        ks = std::max({ks, std::abs(cdf - double(n) / N), std::abs(cdf - double(n + 1) / N)});
    }
    // 1% critical value of the one-sample KS statistic.
    CHECK(ks < 1.63 / std::sqrt(double(N)));
}

TEST_CASE("Channel - true channels")
{
    const std::size_t N = 100000;
    auto c = make_uniform_config({.num_antennas = N, .psi_hat_sr = 1.0, .sigma2_e_sr = 0.5});
    const auto ch = sample_channels(c, 9, 0, {.self_interference = false});
    const auto t = sample_true_channels(ch, c, 9, 0);

    const CVector err = t.h_sr(0, 0) - ch.h_hat_sr(0, 0);
    const double var_true = t.h_sr(0, 0).squaredNorm() / N;
    CHECK(var_true >= 1.5 * 0.97);
    CHECK(var_true <= 1.5 * 1.03);

    const std::complex<double> cross = ch.h_hat_sr(0, 0).dot(err);
    const double rho = std::abs(cross) / (ch.h_hat_sr(0, 0).norm() * err.norm());
    CHECK(rho < 0.02);
}

TEST_CASE("Channel - independence across trials")
{
    const std::size_t N = 20000;
    const auto c = make_uniform_config({.num_antennas = N});
    const auto a = sample_channels(c, 5, 0, {.self_interference = false});
    const auto b = sample_channels(c, 5, 1, {.self_interference = false});
    const double rho = std::abs(a.h_hat_sr(0, 0).dot(b.h_hat_sr(0, 0))) /
                       (a.h_hat_sr(0, 0).norm() * b.h_hat_sr(0, 0).norm());
    CHECK(rho < 4.0 / std::sqrt(double(N)));
}

TEST_CASE("Channel - dumps")
{
    std::mt19937_64 g(2);
    const auto c = fdrelay_test::random_config(g, 2, 2, 3);
    const auto ch = sample_channels(c, 1, 0);

    std::ostringstream os;
    write_channels_binary(os, ch);
    const std::string bytes = os.str();
    // sr + rd: L*K*N each, sd: L*L*K, rr: K*N*N complex values, 16 bytes each.
    CHECK(bytes.size() == 16u * (2 * 2 * 3 + 2 * 2 * 3 + 2 * 2 * 2 + 2 * 3 * 3));

    auto read = [&](std::size_t idx) {
        double x;
        std::memcpy(&x, bytes.data() + 8 * idx, 8);
        return x;
    };
    // First value: real part of h_sr[0][0][0]; h_rd starts after 12 complex values.
    CHECK(read(0) == ch.h_hat_sr(0, 0)[0].real());
    CHECK(read(1) == ch.h_hat_sr(0, 0)[0].imag());
    CHECK(read(2 * 3) == ch.h_hat_sr(0, 1)[0].real());
    CHECK(read(2 * 12) == ch.h_hat_rd(0, 0)[0].real());
    // Row-major SI matrix: entry (0, 1) of H_rr[0] follows entry (0, 0).
    const std::size_t rr0 = 2 * (12 + 12 + 8);
    CHECK(read(rr0) == ch.H_hat_rr[0](0, 0).real());
    CHECK(read(rr0 + 2) == ch.H_hat_rr[0](0, 1).real());
    CHECK(read(rr0 + 6) == ch.H_hat_rr[0](1, 0).real());

    const auto j = channels_to_json(ch);
    CHECK(j["h_hat_sr"].size() == 2 * 12);
    CHECK(j["H_hat_rr"].size() == 2 * 18);
    CHECK(j["h_hat_rd"][3].get<double>() == ch.h_hat_rd(0, 0)[1].imag());
}

TEST_CASE("Channel - reference stream values")
{
    // Guards the reproducibility contract: these values must never change.
    CHECK(stream_seed(0, 0, StreamTag::EstSourceRelay) == stream_seed(0, 0, StreamTag::EstSourceRelay, 0, 0, 0));
    CHECK(stream_seed(0, 0, StreamTag::EstSourceRelay) != stream_seed(0, 0, StreamTag::EstRelayDest));
    CHECK(stream_seed(1, 2, StreamTag::EstSourceDest, 0, 1, 0) != stream_seed(1, 2, StreamTag::EstSourceDest, 1, 0, 0));

    Xoshiro256pp a(123), b(123);
    for (int n = 0; n < 1000; ++n)
        REQUIRE(a() == b());

    // splitmix64 reference output for state 0 (published test vector).
    std::uint64_t s = 0;
    CHECK(splitmix64(s) == 0xE220A8397B1DCDAFULL);
}
