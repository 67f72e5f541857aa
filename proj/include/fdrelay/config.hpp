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
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdrelay/tensor.hpp"

namespace fdrelay {

// Relay chain distortion coefficient: either one value shared by all N
// chains, or one value per chain.
struct RelayDistortion
{
    std::vector<double> coeffs{0.0};

    bool is_scalar() const noexcept { return coeffs.size() == 1; }

    // Per-chain coefficients, length N.
    std::vector<double> per_chain(std::size_t num_antennas) const
    {
        if (is_scalar())
            return std::vector<double>(num_antennas, coeffs.front());
        return coeffs;
    }

    bool operator==(const RelayDistortion &) const = default;
};

// Full parameter set of the relay network. Powers and variances are linear
// (watts / dimensionless gains). Estimated-channel variances psi_hat and
// estimation-error variances sigma2_e are stored; true variances are derived.
struct SystemConfig
{
    std::size_t num_pairs = 1;       // L
    std::size_t num_subcarriers = 1; // K
    std::size_t num_antennas = 1;    // N

    Tensor2<double> p_s; // [i][k]
    Tensor2<double> p_r; // [i][k]

    Tensor1<double> kappa_s_tilde; // [i]
    Tensor1<double> beta_d_tilde;  // [i]
    RelayDistortion kappa_r_tilde;
    RelayDistortion beta_r_tilde;

    Tensor1<double> sigma2_n_r; // [k]
    Tensor2<double> sigma2_n_d; // [i][k]

    Tensor2<double> psi_hat_sr; // [i][k]
    Tensor2<double> psi_hat_rd; // [i][k]
    Tensor3<double> psi_hat_sd; // [i][j][k], destination i, source j
    Tensor1<double> psi_hat_rr; // [k]

    Tensor2<double> sigma2_e_sr;
    Tensor2<double> sigma2_e_rd;
    Tensor3<double> sigma2_e_sd;
    Tensor1<double> sigma2_e_rr;

    double gamma0 = 1.0;

    std::array<std::size_t, 1> pair_shape() const { return {num_pairs}; }
    std::array<std::size_t, 1> carrier_shape() const { return {num_subcarriers}; }
    std::array<std::size_t, 2> pair_carrier_shape() const { return {num_pairs, num_subcarriers}; }
    std::array<std::size_t, 3> cross_shape() const { return {num_pairs, num_pairs, num_subcarriers}; }

    bool operator==(const SystemConfig &) const = default;
};

// Scalar parameters broadcast to every array. Convenient for tests and for
// building homogeneous scenarios programmatically.
struct UniformParameters
{
    std::size_t num_pairs = 1;
    std::size_t num_subcarriers = 1;
    std::size_t num_antennas = 1;
    double p_s = 1.0;
    double p_r = 1.0;
    double kappa_s_tilde = 0.0;
    double beta_d_tilde = 0.0;
    double kappa_r_tilde = 0.0;
    double beta_r_tilde = 0.0;
    double sigma2_n_r = 1.0;
    double sigma2_n_d = 1.0;
    double psi_hat_sr = 1.0;
    double psi_hat_rd = 1.0;
    double psi_hat_sd = 0.0;
    double psi_hat_rr = 0.0;
    double sigma2_e_sr = 0.0;
    double sigma2_e_rd = 0.0;
    double sigma2_e_sd = 0.0;
    double sigma2_e_rr = 0.0;
    double gamma0 = 1.0;
};

inline SystemConfig make_uniform_config(const UniformParameters &u)
{
    SystemConfig c;
    c.num_pairs = u.num_pairs;
    c.num_subcarriers = u.num_subcarriers;
    c.num_antennas = u.num_antennas;
    const auto lk = c.pair_carrier_shape();
    const auto l = c.pair_shape();
    const auto k = c.carrier_shape();
    const auto llk = c.cross_shape();
    c.p_s = Tensor2<double>(lk, u.p_s);
    c.p_r = Tensor2<double>(lk, u.p_r);
    c.kappa_s_tilde = Tensor1<double>(l, u.kappa_s_tilde);
    c.beta_d_tilde = Tensor1<double>(l, u.beta_d_tilde);
    c.kappa_r_tilde.coeffs = {u.kappa_r_tilde};
    c.beta_r_tilde.coeffs = {u.beta_r_tilde};
    c.sigma2_n_r = Tensor1<double>(k, u.sigma2_n_r);
    c.sigma2_n_d = Tensor2<double>(lk, u.sigma2_n_d);
    c.psi_hat_sr = Tensor2<double>(lk, u.psi_hat_sr);
    c.psi_hat_rd = Tensor2<double>(lk, u.psi_hat_rd);
    c.psi_hat_sd = Tensor3<double>(llk, u.psi_hat_sd);
    c.psi_hat_rr = Tensor1<double>(k, u.psi_hat_rr);
    c.sigma2_e_sr = Tensor2<double>(lk, u.sigma2_e_sr);
    c.sigma2_e_rd = Tensor2<double>(lk, u.sigma2_e_rd);
    c.sigma2_e_sd = Tensor3<double>(llk, u.sigma2_e_sd);
    c.sigma2_e_rr = Tensor1<double>(k, u.sigma2_e_rr);
    c.gamma0 = u.gamma0;
    return c;
}

// ---- Validation ---------------------------------------------------------

struct Violation
{
    std::string field;
    std::string index; // e.g. "[0]" or "[1][0]"; empty for whole-field issues
    std::string message;

    std::string to_string() const { return field + index + " " + message; }
};

struct ValidationReport
{
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    explicit operator bool() const noexcept { return ok(); }

    std::string to_string() const
    {
        std::ostringstream os;
        for (const auto &v : violations)
            os << v.to_string() << '\n';
        return os.str();
    }
};

namespace detail {

template <std::size_t Rank>
std::string index_string(std::size_t flat, const std::array<std::size_t, Rank> &shape)
{
    std::array<std::size_t, Rank> idx{};
    for (std::size_t d = Rank; d-- > 0;)
    {
        idx[d] = flat % shape[d];
        flat /= shape[d];
    }
    std::string s;
    for (auto i : idx)
        s += "[" + std::to_string(i) + "]";
    return s;
}

enum class Bound
{
    NonNegative,    // finite, >= 0
    UnitInterval,   // [0, 1)
};

template <std::size_t Rank>
void check_array(ValidationReport &rep, const std::string &name, const Tensor<double, Rank> &t,
                 const std::array<std::size_t, Rank> &expected, Bound bound)
{
    if (t.shape() != expected)
    {
        rep.violations.push_back({name, "", "shape mismatch: expected " + shape_string(expected) +
                                                ", got " + shape_string(t.shape())});
        return;
    }
    const auto flat = t.flat();
    for (std::size_t n = 0; n < flat.size(); ++n)
    {
        const double x = flat[n];
        if (bound == Bound::UnitInterval)
        {
            if (!(std::isfinite(x) && x >= 0.0 && x < 1.0))
                rep.violations.push_back({name, index_string(n, expected), "outside [0,1)"});
        }
        else if (!(std::isfinite(x) && x >= 0.0))
            rep.violations.push_back({name, index_string(n, expected), "must be finite and non-negative"});
    }
}

inline void check_relay(ValidationReport &rep, const std::string &name, const RelayDistortion &d,
                        std::size_t num_antennas)
{
    if (d.coeffs.empty() || (!d.is_scalar() && d.coeffs.size() != num_antennas))
    {
        rep.violations.push_back({name, "", "shape mismatch: expected a scalar or " +
                                                std::to_string(num_antennas) + " per-chain values, got " +
                                                std::to_string(d.coeffs.size())});
        return;
    }
    for (std::size_t n = 0; n < d.coeffs.size(); ++n)
    {
        const double x = d.coeffs[n];
        if (!(std::isfinite(x) && x >= 0.0 && x < 1.0))
            rep.violations.push_back({name, d.is_scalar() ? "" : "[" + std::to_string(n) + "]", "outside [0,1)"});
    }
}

} // namespace detail

// Checks shapes, finiteness, signs and coefficient ranges. Never throws;
// every problem found is reported.
inline ValidationReport validate(const SystemConfig &c)
{
    using detail::Bound;
    ValidationReport rep;
    if (c.num_pairs == 0)
        rep.violations.push_back({"num_pairs", "", "must be a positive integer"});
    if (c.num_subcarriers == 0)
        rep.violations.push_back({"num_subcarriers", "", "must be a positive integer"});
    if (c.num_antennas == 0)
        rep.violations.push_back({"num_antennas", "", "must be a positive integer"});

    const auto lk = c.pair_carrier_shape();
    const auto l = c.pair_shape();
    const auto k = c.carrier_shape();
    const auto llk = c.cross_shape();

    detail::check_array(rep, "p_s", c.p_s, lk, Bound::NonNegative);
    detail::check_array(rep, "p_r", c.p_r, lk, Bound::NonNegative);
    detail::check_array(rep, "kappa_s_tilde", c.kappa_s_tilde, l, Bound::UnitInterval);
    detail::check_array(rep, "beta_d_tilde", c.beta_d_tilde, l, Bound::UnitInterval);
    detail::check_relay(rep, "kappa_r_tilde", c.kappa_r_tilde, c.num_antennas);
    detail::check_relay(rep, "beta_r_tilde", c.beta_r_tilde, c.num_antennas);
    detail::check_array(rep, "sigma2_n_r", c.sigma2_n_r, k, Bound::NonNegative);
    detail::check_array(rep, "sigma2_n_d", c.sigma2_n_d, lk, Bound::NonNegative);
    detail::check_array(rep, "psi_hat_sr", c.psi_hat_sr, lk, Bound::NonNegative);
    detail::check_array(rep, "psi_hat_rd", c.psi_hat_rd, lk, Bound::NonNegative);
    detail::check_array(rep, "psi_hat_sd", c.psi_hat_sd, llk, Bound::NonNegative);
    detail::check_array(rep, "psi_hat_rr", c.psi_hat_rr, k, Bound::NonNegative);
    detail::check_array(rep, "sigma2_e_sr", c.sigma2_e_sr, lk, Bound::NonNegative);
    detail::check_array(rep, "sigma2_e_rd", c.sigma2_e_rd, lk, Bound::NonNegative);
    detail::check_array(rep, "sigma2_e_sd", c.sigma2_e_sd, llk, Bound::NonNegative);
    detail::check_array(rep, "sigma2_e_rr", c.sigma2_e_rr, k, Bound::NonNegative);

    if (!(std::isfinite(c.gamma0) && c.gamma0 > 0.0 && c.gamma0 <= 1.0))
        rep.violations.push_back({"gamma0", "", "outside (0,1]"});
    return rep;
}

class ConfigError : public std::runtime_error
{
public:
    explicit ConfigError(const ValidationReport &rep)
        : std::runtime_error("invalid configuration:\n" + rep.to_string()), report_(rep) {}
    const ValidationReport &report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

inline void require_valid(const SystemConfig &c)
{
    if (auto rep = validate(c); !rep.ok())
        throw ConfigError(rep);
}

// ---- Derived constants --------------------------------------------------

// Per-subcarrier distortion coefficients (tilde values divided by K) and
// true channel variances psi = psi_hat + sigma2_e.
struct DerivedConstants
{
    Tensor1<double> kappa_s; // [i]
    Tensor1<double> beta_d;  // [i]
    std::vector<double> theta_t; // relay transmit distortion, per chain (length N)
    std::vector<double> theta_r; // relay receive distortion, per chain (length N)

    Tensor2<double> psi_sr;
    Tensor2<double> psi_rd;
    Tensor3<double> psi_sd;
    Tensor1<double> psi_rr;
};

namespace detail {
template <std::size_t Rank>
Tensor<double, Rank> add(const Tensor<double, Rank> &a, const Tensor<double, Rank> &b)
{
    Tensor<double, Rank> out(a.shape());
    for (std::size_t n = 0; n < out.size(); ++n)
        out.flat()[n] = a.flat()[n] + b.flat()[n];
    return out;
}
} // namespace detail

inline DerivedConstants derived_constants(const SystemConfig &c)
{
    const double K = static_cast<double>(c.num_subcarriers);
    DerivedConstants d;
    d.kappa_s = Tensor1<double>(c.pair_shape());
    d.beta_d = Tensor1<double>(c.pair_shape());
    for (std::size_t i = 0; i < c.num_pairs; ++i)
    {
        d.kappa_s(i) = c.kappa_s_tilde(i) / K;
        d.beta_d(i) = c.beta_d_tilde(i) / K;
    }
    d.theta_t = c.kappa_r_tilde.per_chain(c.num_antennas);
    d.theta_r = c.beta_r_tilde.per_chain(c.num_antennas);
    for (auto &x : d.theta_t)
        x /= K;
    for (auto &x : d.theta_r)
        x /= K;
    d.psi_sr = detail::add(c.psi_hat_sr, c.sigma2_e_sr);
    d.psi_rd = detail::add(c.psi_hat_rd, c.sigma2_e_rd);
    d.psi_sd = detail::add(c.psi_hat_sd, c.sigma2_e_sd);
    d.psi_rr = detail::add(c.psi_hat_rr, c.sigma2_e_rr);
    return d;
}

// Copy of `c` with a different relay array size. Per-chain relay distortion
// vectors cannot be resized and are rejected.
inline SystemConfig with_antennas(SystemConfig c, std::size_t num_antennas)
{
    if (!c.kappa_r_tilde.is_scalar() || !c.beta_r_tilde.is_scalar())
        throw std::invalid_argument("with_antennas: per-chain relay distortion is tied to a fixed N");
    c.num_antennas = num_antennas;
    return c;
}

} // namespace fdrelay
