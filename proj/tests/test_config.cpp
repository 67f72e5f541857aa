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

#include <fstream>

#include "test_support.hpp"

// Covered tests:
// - Validation of the basic example, range and shape violations
// - Derived constants (division by K, psi = psi_hat + sigma2_e)
// - JSON parsing: broadcast, nested arrays, defaults, errors
// - Canonical serialization round trip and digest stability
// - Per-chain relay distortion

using namespace fdrelay;

static SystemConfig basic_config()
{
    UniformParameters p;
    p.num_antennas = 4;
    p.kappa_s_tilde = p.beta_d_tilde = p.kappa_r_tilde = p.beta_r_tilde = 0.01;
    p.psi_hat_sd = p.psi_hat_rr = 1.0;
    p.sigma2_e_sr = p.sigma2_e_rd = p.sigma2_e_sd = p.sigma2_e_rr = 1.0;
    p.gamma0 = 0.9;
    return make_uniform_config(p);
}

TEST_CASE("Config - validation")
{
    CHECK(validate(basic_config()).ok());

    auto c = basic_config();
    c.kappa_s_tilde(0) = 1.5;
    auto rep = validate(c);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].to_string() == "kappa_s_tilde[0] outside [0,1)");

    c = make_uniform_config({.num_pairs = 2, .num_subcarriers = 3, .num_antennas = 4});
    c.p_s = Tensor2<double>({2, 2}, 1.0);
    rep = validate(c);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].to_string().starts_with("p_s shape mismatch"));

    c = basic_config();
    c.sigma2_n_r(0) = -1.0;
    c.psi_hat_rd(0, 0) = std::numeric_limits<double>::infinity();
    c.gamma0 = 0.0;
    c.beta_r_tilde.coeffs = {0.1, 0.2};
    rep = validate(c);
    CHECK(rep.violations.size() == 4);
    CHECK_THROWS_AS(require_valid(c), ConfigError);

    c = basic_config();
    c.beta_r_tilde.coeffs = {0.1, 0.2, 0.3, 0.4};
    CHECK(validate(c).ok());
    c.beta_r_tilde.coeffs[2] = 1.0;
    rep = validate(c);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].to_string() == "beta_r_tilde[2] outside [0,1)");

    c = basic_config();
    c.num_subcarriers = 0;
    CHECK_FALSE(validate(c).ok());
}

TEST_CASE("Config - derived constants")
{
    auto c = make_uniform_config({.num_pairs = 1, .num_subcarriers = 4, .num_antennas = 2, .kappa_s_tilde = 0.04});
    CHECK(derived_constants(c).kappa_s(0) == 0.01);

    c = make_uniform_config({.psi_hat_sr = 1.0, .sigma2_e_sr = 0.1});
    CHECK(derived_constants(c).psi_sr(0, 0) == 1.1);

    c = make_uniform_config({.num_subcarriers = 8, .kappa_r_tilde = 0.0});
    for (double x : derived_constants(c).theta_t)
        CHECK(x == 0.0);

    // Derived psi >= psi_hat, with equality exactly where sigma2_e = 0.
    std::mt19937_64 g(5);
    c = fdrelay_test::random_config(g, 2, 3, 4);
    c.sigma2_e_rd(1, 2) = 0.0;
    const auto d = derived_constants(c);
    for (std::size_t n = 0; n < c.psi_hat_rd.size(); ++n)
    {
        CHECK(d.psi_rd.flat()[n] >= c.psi_hat_rd.flat()[n]);
        CHECK((d.psi_rd.flat()[n] == c.psi_hat_rd.flat()[n]) == (c.sigma2_e_rd.flat()[n] == 0.0));
    }

    c = basic_config();
    c.kappa_r_tilde.coeffs = {0.04, 0.08, 0.0, 0.0};
    const auto dc = derived_constants(c);
    CHECK(dc.theta_t == std::vector<double>{0.04, 0.08, 0.0, 0.0});
    CHECK(dc.theta_r == std::vector<double>(4, 0.01));
}

TEST_CASE("Config - JSON parsing")
{
    const std::string text = R"({
        "num_pairs": 2, "num_subcarriers": 2, "num_antennas": 8,
        "p_s": [[1, 2], [3, 4]], "p_r": 1.5,
        "kappa_s_tilde": [0.01, 0.02],
        "sigma2_n_r": [1, 0.5], "sigma2_n_d": 1,
        "psi_hat_sr": 1, "psi_hat_rd": 1,
        "psi_hat_sd": [[[0.1, 0.2], [0.3, 0.4]], [[0.5, 0.6], [0.7, 0.8]]],
        "beta_r_tilde": [0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.2]
    })";
    const auto c = parse_config(text);
    CHECK(validate(c).ok());
    CHECK(c.p_s(1, 0) == 3.0);
    CHECK(c.p_r(1, 1) == 1.5);
    CHECK(c.psi_hat_sd(1, 0, 1) == 0.6);
    CHECK(c.beta_d_tilde(1) == 0.0);
    CHECK(c.kappa_r_tilde.is_scalar());
    CHECK(c.beta_r_tilde.coeffs.size() == 8);
    CHECK(c.gamma0 == 1.0);

    CHECK_THROWS_AS(parse_config("{ not json"), ConfigParseError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigParseError);
    CHECK_THROWS_WITH(parse_config(R"({"num_pairs": 1})"), Catch::Matchers::ContainsSubstring("num_subcarriers"));
    CHECK_THROWS_WITH(parse_config(R"({"num_pairs": 1, "num_subcarriers": 1, "num_antennas": 1, "p_s": 1, "p_r": 1,
                                      "sigma2_n_r": 1, "sigma2_n_d": 1, "psi_hat_sr": 1, "psi_hat_rd": 1,
                                      "kapa_s_tilde": 0.1})"),
                      Catch::Matchers::ContainsSubstring("unknown field 'kapa_s_tilde'"));
    CHECK_THROWS_WITH(parse_config(R"({"num_pairs": 1, "num_subcarriers": 2, "num_antennas": 1, "p_s": [[1], [1, 2]],
                                      "p_r": 1, "sigma2_n_r": 1, "sigma2_n_d": 1, "psi_hat_sr": 1, "psi_hat_rd": 1})"),
                      Catch::Matchers::ContainsSubstring("ragged"));
    CHECK_THROWS_AS(parse_config(R"({"num_pairs": 1.5, "num_subcarriers": 1, "num_antennas": 1, "p_s": 1, "p_r": 1,
                                    "sigma2_n_r": 1, "sigma2_n_d": 1, "psi_hat_sr": 1, "psi_hat_rd": 1})"),
                    ConfigParseError);
    CHECK_THROWS_AS(parse_config(R"({"num_pairs": 1, "num_subcarriers": 1, "num_antennas": 1, "p_s": "x", "p_r": 1,
                                    "sigma2_n_r": 1, "sigma2_n_d": 1, "psi_hat_sr": 1, "psi_hat_rd": 1})"),
                    ConfigParseError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigParseError);

    // A rectangular array of the wrong shape parses but fails validation.
    const auto bad = parse_config(R"({"num_pairs": 2, "num_subcarriers": 2, "num_antennas": 1, "p_s": [[1, 1]],
                                      "p_r": 1, "sigma2_n_r": 1, "sigma2_n_d": 1, "psi_hat_sr": 1, "psi_hat_rd": 1})");
    const auto rep = validate(bad);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].to_string() == "p_s shape mismatch: expected (2, 2), got (1, 2)");
}

TEST_CASE("Config - serialization round trip")
{
    std::mt19937_64 g(11);
    for (int rep = 0; rep < 20; ++rep)
    {
        auto c = fdrelay_test::random_config(g, 1 + rep % 3, 1 + rep % 4, 2 + rep);
        if (rep % 5 == 0)
            c.kappa_r_tilde.coeffs.assign(c.num_antennas, 0.03);
        const auto back = parse_config(serialize_config(c));
        CHECK(back == c);
        CHECK(validate(back).ok());
        CHECK(config_digest(back) == config_digest(c));
    }

    // The digest is stable across runs and sensitive to every field.
    const auto c = basic_config();
    CHECK(config_digest(c) == config_digest(basic_config()));
    CHECK(config_digest(c).size() == 16);
    auto d = c;
    d.sigma2_e_rr(0) = 0.5;
    CHECK(config_digest(d) != config_digest(c));

    // Shipped example files parse and validate.
    for (const char *name : {"flat.json", "convergence.json", "ideal.json", "mixed.json"})
    {
        INFO(name);
        const auto f = load_config(std::string(FDRELAY_CONFIG_DIR) + "/" + name);
        CHECK(validate(f).ok());
        CHECK(parse_config(serialize_config(f)) == f);
    }
}

TEST_CASE("Config - antenna resizing")
{
    auto c = basic_config();
    const auto d = with_antennas(c, 128);
    CHECK(d.num_antennas == 128);
    CHECK(validate(d).ok());
    c.kappa_r_tilde.coeffs.assign(4, 0.01);
    CHECK_THROWS_AS(with_antennas(c, 8), std::invalid_argument);
}
