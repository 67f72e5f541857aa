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

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fdrelay/config.hpp"
#include "fdrelay/json_util.hpp"

namespace fdrelay {

// Malformed JSON, wrong value types, ragged arrays, unknown keys, I/O errors.
// Distinct from validation violations, which are reported as data.
class ConfigParseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

template <std::size_t Rank>
Tensor<double, Rank> parse_array(const nlohmann::json &j, const std::array<std::size_t, Rank> &broadcast_shape,
                                 const std::string &name)
{
    if (j.is_number())
        return Tensor<double, Rank>(broadcast_shape, j.get<double>());
    try
    {
        return tensor_from_json<double, Rank>(j);
    }
    catch (const std::exception &e)
    {
        throw ConfigParseError("field '" + name + "': " + e.what() + " (or give a single number)");
    }
}

inline std::size_t parse_count(const nlohmann::json &j, const std::string &name)
{
    if (!j.is_number())
        throw ConfigParseError("field '" + name + "': expected a non-negative integer");
    const double x = j.get<double>();
    if (!(x >= 0.0) || std::floor(x) != x || x > 1e12)
        throw ConfigParseError("field '" + name + "': expected a non-negative integer");
    return static_cast<std::size_t>(x);
}

inline RelayDistortion parse_relay(const nlohmann::json &j, const std::string &name)
{
    RelayDistortion d;
    if (j.is_number())
        d.coeffs = {j.get<double>()};
    else
    {
        const auto t = parse_array<1>(j, {0}, name);
        d.coeffs.assign(t.begin(), t.end());
    }
    return d;
}

inline ordered_json emit_relay(const RelayDistortion &d)
{
    if (d.is_scalar())
        return d.coeffs.front();
    return ordered_json(d.coeffs);
}

} // namespace detail

// Builds a SystemConfig from a parsed JSON object. A single number given for
// an array field is broadcast to the full (L, K) / (L, L, K) / (K) / (L) shape.
// Distortion, error, direct-link and SI variances default to 0; gamma0
// defaults to 1. Shape problems of rectangular arrays are left for validate().
inline SystemConfig config_from_json(const nlohmann::json &j)
{
    if (!j.is_object())
        throw ConfigParseError("configuration must be a JSON object");

    static const std::set<std::string> known = {
        "num_pairs",   "num_subcarriers", "num_antennas", "p_s",         "p_r",         "kappa_s_tilde",
        "beta_d_tilde", "kappa_r_tilde",  "beta_r_tilde", "sigma2_n_r",  "sigma2_n_d",  "psi_hat_sr",
        "psi_hat_rd",  "psi_hat_sd",      "psi_hat_rr",   "sigma2_e_sr", "sigma2_e_rd", "sigma2_e_sd",
        "sigma2_e_rr", "gamma0"};
    for (const auto &[key, _] : j.items())
        if (!known.count(key))
            throw ConfigParseError("unknown field '" + key + "'");

    auto required = [&](const char *name) -> const nlohmann::json & {
        if (!j.contains(name))
            throw ConfigParseError(std::string("missing required field '") + name + "'");
        return j.at(name);
    };
    static const nlohmann::json zero = 0.0;
    auto optional = [&](const char *name) -> const nlohmann::json & { return j.contains(name) ? j.at(name) : zero; };

    SystemConfig c;
    c.num_pairs = detail::parse_count(required("num_pairs"), "num_pairs");
    c.num_subcarriers = detail::parse_count(required("num_subcarriers"), "num_subcarriers");
    c.num_antennas = detail::parse_count(required("num_antennas"), "num_antennas");

    const auto lk = c.pair_carrier_shape();
    const auto l = c.pair_shape();
    const auto k = c.carrier_shape();
    const auto llk = c.cross_shape();
    using detail::parse_array;
    c.p_s = parse_array<2>(required("p_s"), lk, "p_s");
    c.p_r = parse_array<2>(required("p_r"), lk, "p_r");
    c.kappa_s_tilde = parse_array<1>(optional("kappa_s_tilde"), l, "kappa_s_tilde");
    c.beta_d_tilde = parse_array<1>(optional("beta_d_tilde"), l, "beta_d_tilde");
    c.kappa_r_tilde = detail::parse_relay(optional("kappa_r_tilde"), "kappa_r_tilde");
    c.beta_r_tilde = detail::parse_relay(optional("beta_r_tilde"), "beta_r_tilde");
    c.sigma2_n_r = parse_array<1>(required("sigma2_n_r"), k, "sigma2_n_r");
    c.sigma2_n_d = parse_array<2>(required("sigma2_n_d"), lk, "sigma2_n_d");
    c.psi_hat_sr = parse_array<2>(required("psi_hat_sr"), lk, "psi_hat_sr");
    c.psi_hat_rd = parse_array<2>(required("psi_hat_rd"), lk, "psi_hat_rd");
    c.psi_hat_sd = parse_array<3>(optional("psi_hat_sd"), llk, "psi_hat_sd");
    c.psi_hat_rr = parse_array<1>(optional("psi_hat_rr"), k, "psi_hat_rr");
    c.sigma2_e_sr = parse_array<2>(optional("sigma2_e_sr"), lk, "sigma2_e_sr");
    c.sigma2_e_rd = parse_array<2>(optional("sigma2_e_rd"), lk, "sigma2_e_rd");
    c.sigma2_e_sd = parse_array<3>(optional("sigma2_e_sd"), llk, "sigma2_e_sd");
    c.sigma2_e_rr = parse_array<1>(optional("sigma2_e_rr"), k, "sigma2_e_rr");
    if (j.contains("gamma0"))
    {
        if (!j.at("gamma0").is_number())
            throw ConfigParseError("field 'gamma0': expected a number");
        c.gamma0 = j.at("gamma0").get<double>();
    }
    return c;
}

inline SystemConfig parse_config(const std::string &text)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw ConfigParseError(std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(j);
}

inline SystemConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigParseError("cannot open configuration file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// Canonical form: fixed key order, every array written out in full.
inline ordered_json config_to_json(const SystemConfig &c)
{
    ordered_json j;
    j["num_pairs"] = c.num_pairs;
    j["num_subcarriers"] = c.num_subcarriers;
    j["num_antennas"] = c.num_antennas;
    j["p_s"] = tensor_to_json(c.p_s);
    j["p_r"] = tensor_to_json(c.p_r);
    j["kappa_s_tilde"] = tensor_to_json(c.kappa_s_tilde);
    j["beta_d_tilde"] = tensor_to_json(c.beta_d_tilde);
    j["kappa_r_tilde"] = detail::emit_relay(c.kappa_r_tilde);
    j["beta_r_tilde"] = detail::emit_relay(c.beta_r_tilde);
    j["sigma2_n_r"] = tensor_to_json(c.sigma2_n_r);
    j["sigma2_n_d"] = tensor_to_json(c.sigma2_n_d);
    j["psi_hat_sr"] = tensor_to_json(c.psi_hat_sr);
    j["psi_hat_rd"] = tensor_to_json(c.psi_hat_rd);
    j["psi_hat_sd"] = tensor_to_json(c.psi_hat_sd);
    j["psi_hat_rr"] = tensor_to_json(c.psi_hat_rr);
    j["sigma2_e_sr"] = tensor_to_json(c.sigma2_e_sr);
    j["sigma2_e_rd"] = tensor_to_json(c.sigma2_e_rd);
    j["sigma2_e_sd"] = tensor_to_json(c.sigma2_e_sd);
    j["sigma2_e_rr"] = tensor_to_json(c.sigma2_e_rr);
    j["gamma0"] = c.gamma0;
    return j;
}

inline std::string serialize_config(const SystemConfig &c) { return config_to_json(c).dump(); }

// FNV-1a over the canonical serialization, as 16 hex digits.
inline std::string config_digest(const SystemConfig &c)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize_config(c))
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace fdrelay
