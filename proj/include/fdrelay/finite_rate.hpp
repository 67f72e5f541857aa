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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string_view>

#include <Eigen/Dense>

#include "fdrelay/beamform.hpp"
#include "fdrelay/channel.hpp"
#include "fdrelay/config.hpp"
#include "fdrelay/json_util.hpp"

namespace fdrelay {

// ---- Interference origins ------------------------------------------------

enum class UplinkOrigin : std::size_t
{
    CoChannel,           // other sources plus source-relay estimation error
    SourceTxDistortion,  // transmit distortion of the sources
    RelayRxDistortion,   // receive distortion of the relay (all images)
    RelayTxDistortion,   // relay transmit distortion leaking through the SI channel
    SiEstimationError,   // residual SI from the SI-channel estimation error
    ThermalNoise,
    Count
};

enum class DownlinkOrigin : std::size_t
{
    CoChannel,           // precoders of other pairs plus relay-destination estimation error
    SourceTxDistortion,
    DirectChannel,       // source-to-destination interference
    RelayTxDistortion,
    DestRxDistortion,    // receive distortion of the destination
    ThermalNoise,
    Count
};

inline constexpr std::array<std::string_view, 6> kUplinkOriginNames = {
    "co_channel", "source_tx_distortion", "relay_rx_distortion", "relay_tx_distortion", "si_estimation_error",
    "thermal_noise"};
inline constexpr std::array<std::string_view, 6> kDownlinkOriginNames = {
    "co_channel", "source_tx_distortion", "direct_channel", "relay_tx_distortion", "dest_rx_distortion",
    "thermal_noise"};

// Per-(i, k) signal gains and interference coefficients. The gamma tensors
// are indexed [i][j][k][m]: receiver pair i on subcarrier k, interfering
// pair j on subcarrier m. gamma_* multiply p_s[j][m], gamma_*_r multiply
// p_r[j][m]. *_by_origin holds the same denominators split by physical
// origin, already weighted by the configured powers: [i][k][origin].
struct InterferenceBreakdown
{
    Tensor2<double> mu_s;
    Tensor2<double> mu_r;
    Tensor4<double> gamma_s;
    Tensor4<double> gamma_r;
    Tensor4<double> gamma_bar_s;
    Tensor4<double> gamma_bar_r;
    Tensor2<double> alpha_n_r;
    Tensor2<double> alpha_n_d;
    Tensor3<double> uplink_by_origin;
    Tensor3<double> downlink_by_origin;
};

// Images of the MRC filters and MRT precoders through the estimated SI
// channel: rx(i, k) = H_rr[k]^H u[i][k],  tx(j, m) = H_rr[m] v[j][m].
// These are the only SI-channel quantities the rate formulas need, so a
// realization can be processed one N x N matrix at a time.
struct SiProjections
{
    Tensor2<CVector> rx;
    Tensor2<CVector> tx;
};

inline SiProjections make_si_projections(std::size_t num_pairs, std::size_t num_subcarriers)
{
    return {Tensor2<CVector>({num_pairs, num_subcarriers}), Tensor2<CVector>({num_pairs, num_subcarriers})};
}

inline void project_self_interference(const CMatrix &H, const FilterSet &f, std::size_t k, SiProjections &out)
{
    const std::size_t L = f.u_r.extent(0);
    for (std::size_t i = 0; i < L; ++i)
    {
        out.rx(i, k).noalias() = H.adjoint() * f.u_r(i, k);
        out.tx(i, k).noalias() = H * f.v_r(i, k);
    }
}

// All-zero images. The images enter the terms only through the relay
// distortion coefficients, so these are exact when both are 0.
inline void zero_self_interference(std::size_t num_antennas, std::size_t k, SiProjections &out)
{
    for (std::size_t i = 0; i < out.rx.extent(0); ++i)
    {
        out.rx(i, k) = CVector::Zero(static_cast<Eigen::Index>(num_antennas));
        out.tx(i, k) = CVector::Zero(static_cast<Eigen::Index>(num_antennas));
    }
}

inline SiProjections si_projections(const ChannelSet &ch, const FilterSet &f)
{
    if (!ch.has_self_interference())
        throw std::invalid_argument("si_projections: channel set was sampled without SI matrices");
    auto out = make_si_projections(ch.num_pairs, ch.num_subcarriers);
    for (std::size_t k = 0; k < ch.num_subcarriers; ++k)
        project_self_interference(ch.H_hat_rr[k], f, k, out);
    return out;
}

namespace detail {

// sum_l w[l] * |x[l]|^2 evaluated left to right.
inline double weighted_energy(const std::vector<double> &w, const CVector &x)
{
    double acc = 0.0;
    for (Eigen::Index l = 0; l < x.size(); ++l)
        acc += w[static_cast<std::size_t>(l)] * std::norm(x[l]);
    return acc;
}

// sum_l w[l] * |x[l]|^2 * |y[l]|^2
inline double weighted_energy(const std::vector<double> &w, const CVector &x, const CVector &y)
{
    double acc = 0.0;
    for (Eigen::Index l = 0; l < x.size(); ++l)
        acc += w[static_cast<std::size_t>(l)] * std::norm(x[l]) * std::norm(y[l]);
    return acc;
}

inline double sum_over_subcarriers(const Tensor2<double> &t, std::size_t i)
{
    double acc = 0.0;
    for (std::size_t m = 0; m < t.extent(1); ++m)
        acc += t(i, m);
    return acc;
}

inline double delta(std::size_t a, std::size_t b) { return a == b ? 1.0 : 0.0; }

} // namespace detail

// mu_s, gamma_s, gamma_r and alpha_n_r for every (i, k), using precomputed
// SI images. Every term is a non-negative coefficient times a non-negative
// quadratic form, summed in a fixed order.
inline void uplink_terms(const ChannelSet &ch, const FilterSet &f, const SiProjections &si, const SystemConfig &c,
                         InterferenceBreakdown &out)
{
    using detail::delta;
    using detail::weighted_energy;
    const std::size_t L = c.num_pairs, K = c.num_subcarriers;
    const DerivedConstants d = derived_constants(c);
    const auto U = static_cast<std::size_t>(UplinkOrigin::Count);

    out.mu_s = Tensor2<double>({L, K});
    out.gamma_s = Tensor4<double>({L, L, K, K});
    out.gamma_r = Tensor4<double>({L, L, K, K});
    out.alpha_n_r = Tensor2<double>({L, K});
    out.uplink_by_origin = Tensor3<double>({L, K, U});

    double noise_sum = 0.0;
    for (std::size_t m = 0; m < K; ++m)
        noise_sum += c.sigma2_n_r(m);

    // |u[i][k]^H h_sr[j][k]|^2
    Tensor3<double> cross({L, L, K});
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j)
            for (std::size_t k = 0; k < K; ++k)
                cross(i, j, k) = std::norm(f.u_r(i, k).dot(ch.h_hat_sr(j, k)));

    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t k = 0; k < K; ++k)
        {
            const CVector &u = f.u_r(i, k);
            out.mu_s(i, k) = std::norm(u.dot(ch.h_hat_sr(i, k)));

            auto origin = [&](UplinkOrigin o) -> double & { return out.uplink_by_origin(i, k, static_cast<std::size_t>(o)); };

            // u^H Theta_rr u, used by every relay receive-distortion image of a
            // scaled identity.
            const double u_theta_r_u = weighted_energy(d.theta_r, u);

            for (std::size_t j = 0; j < L; ++j)
                for (std::size_t m = 0; m < K; ++m)
                {
                    const double dkm = delta(k, m);
                    const double e_sr_jk = ch.sigma2_e_sr(j, k);
                    const double e_sr_jm = ch.sigma2_e_sr(j, m);

                    // Source-driven interference.
                    const double co = dkm * (1.0 - delta(i, j)) * cross(i, j, k) + dkm * e_sr_jk;
                    const double src_tx = d.kappa_s(j) * cross(i, j, k) + e_sr_jk * d.kappa_s(j);
                    const double relay_rx_s =
                        weighted_energy(d.theta_r, u, ch.h_hat_sr(j, m)) + e_sr_jm * u_theta_r_u;
                    out.gamma_s(i, j, k, m) = co + src_tx + relay_rx_s;

                    // Relay-driven interference.
                    const CVector &v = f.v_r(j, m);
                    const double e_rr_k = ch.sigma2_e_rr(k);
                    const double e_rr_m = ch.sigma2_e_rr(m);
                    const double relay_tx = weighted_energy(d.theta_t, v, si.rx(i, k)) +
                                            e_rr_k * weighted_energy(d.theta_t, v);
                    const double si_err = dkm * e_rr_k;
                    const double relay_rx_r = weighted_energy(d.theta_r, u, si.tx(j, m)) + e_rr_m * u_theta_r_u;
                    out.gamma_r(i, j, k, m) = relay_tx + si_err + relay_rx_r;

                    const double ps = c.p_s(j, m), pr = c.p_r(j, m);
                    origin(UplinkOrigin::CoChannel) += co * ps;
                    origin(UplinkOrigin::SourceTxDistortion) += src_tx * ps;
                    origin(UplinkOrigin::RelayRxDistortion) += relay_rx_s * ps + relay_rx_r * pr;
                    origin(UplinkOrigin::RelayTxDistortion) += relay_tx * pr;
                    origin(UplinkOrigin::SiEstimationError) += si_err * pr;
                }

            const double alpha_rx = u_theta_r_u * noise_sum;
            const double alpha_thermal = c.sigma2_n_r(k) * u.squaredNorm();
            out.alpha_n_r(i, k) = alpha_rx + alpha_thermal;
            origin(UplinkOrigin::RelayRxDistortion) += alpha_rx;
            origin(UplinkOrigin::ThermalNoise) += alpha_thermal;
        }
}

// mu_r, gamma_bar_s, gamma_bar_r and alpha_n_d for every (i, k).
inline void downlink_terms(const ChannelSet &ch, const FilterSet &f, const SystemConfig &c, InterferenceBreakdown &out)
{
    using detail::delta;
    using detail::weighted_energy;
    const std::size_t L = c.num_pairs, K = c.num_subcarriers;
    const DerivedConstants d = derived_constants(c);
    const auto D = static_cast<std::size_t>(DownlinkOrigin::Count);

    out.mu_r = Tensor2<double>({L, K});
    out.gamma_bar_s = Tensor4<double>({L, L, K, K});
    out.gamma_bar_r = Tensor4<double>({L, L, K, K});
    out.alpha_n_d = Tensor2<double>({L, K});
    out.downlink_by_origin = Tensor3<double>({L, K, D});

    // |h_rd[i][k] v[j][k]|^2
    Tensor3<double> cross({L, L, K});
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j)
            for (std::size_t k = 0; k < K; ++k)
                cross(i, j, k) = std::norm(ch.h_hat_rd(i, k).cwiseProduct(f.v_r(j, k)).sum());

    for (std::size_t i = 0; i < L; ++i)
    {
        double noise_sum = 0.0;
        for (std::size_t m = 0; m < K; ++m)
            noise_sum += c.sigma2_n_d(i, m);

        for (std::size_t k = 0; k < K; ++k)
        {
            out.mu_r(i, k) = cross(i, i, k);
            auto origin = [&](DownlinkOrigin o) -> double & {
                return out.downlink_by_origin(i, k, static_cast<std::size_t>(o));
            };
            const CVector &h = ch.h_hat_rd(i, k);
            const double e_rd_k = ch.sigma2_e_rd(i, k);
            const double beta = d.beta_d(i);

            for (std::size_t j = 0; j < L; ++j)
                for (std::size_t m = 0; m < K; ++m)
                {
                    const double dkm = delta(k, m);

                    const double sd_k = std::norm(ch.h_hat_sd(i, j, k));
                    const double sd_m = std::norm(ch.h_hat_sd(i, j, m));
                    const double e_sd_k = ch.sigma2_e_sd(i, j, k);
                    const double e_sd_m = ch.sigma2_e_sd(i, j, m);
                    const double direct = dkm * sd_k + dkm * e_sd_k;
                    const double src_tx = sd_k * d.kappa_s(j) + e_sd_k * d.kappa_s(j);
                    const double dest_rx_s = beta * (sd_m + e_sd_m);
                    out.gamma_bar_s(i, j, k, m) = direct + src_tx + dest_rx_s;

                    const CVector &v = f.v_r(j, m);
                    const double co = dkm * (1.0 - delta(i, j)) * cross(i, j, k) + dkm * e_rd_k;
                    const double relay_tx = weighted_energy(d.theta_t, v, h) + e_rd_k * weighted_energy(d.theta_t, v);
                    const double dest_rx_r = beta * (cross(i, j, m) + ch.sigma2_e_rd(i, m));
                    out.gamma_bar_r(i, j, k, m) = co + relay_tx + dest_rx_r;

                    const double ps = c.p_s(j, m), pr = c.p_r(j, m);
                    origin(DownlinkOrigin::DirectChannel) += direct * ps;
                    origin(DownlinkOrigin::SourceTxDistortion) += src_tx * ps;
                    origin(DownlinkOrigin::DestRxDistortion) += dest_rx_s * ps + dest_rx_r * pr;
                    origin(DownlinkOrigin::CoChannel) += co * pr;
                    origin(DownlinkOrigin::RelayTxDistortion) += relay_tx * pr;
                }

            const double alpha_rx = beta * noise_sum;
            const double alpha_thermal = c.sigma2_n_d(i, k);
            out.alpha_n_d(i, k) = alpha_rx + alpha_thermal;
            origin(DownlinkOrigin::DestRxDistortion) += alpha_rx;
            origin(DownlinkOrigin::ThermalNoise) += alpha_thermal;
        }
    }
}

// Convenience: full breakdown from a ChannelSet that carries the SI matrices.
inline InterferenceBreakdown interference_breakdown(const ChannelSet &ch, const FilterSet &f, const SystemConfig &c)
{
    InterferenceBreakdown b;
    uplink_terms(ch, f, si_projections(ch, f), c, b);
    downlink_terms(ch, f, c, b);
    return b;
}

// alpha_n_r + sum_m sum_j (gamma_s p_s + gamma_r p_r)
inline double uplink_denominator(const InterferenceBreakdown &b, const SystemConfig &c, std::size_t i, std::size_t k)
{
    double acc = b.alpha_n_r(i, k);
    for (std::size_t m = 0; m < c.num_subcarriers; ++m)
        for (std::size_t j = 0; j < c.num_pairs; ++j)
        {
            acc += b.gamma_s(i, j, k, m) * c.p_s(j, m);
            acc += b.gamma_r(i, j, k, m) * c.p_r(j, m);
        }
    return acc;
}

inline double downlink_denominator(const InterferenceBreakdown &b, const SystemConfig &c, std::size_t i, std::size_t k)
{
    double acc = b.alpha_n_d(i, k);
    for (std::size_t m = 0; m < c.num_subcarriers; ++m)
        for (std::size_t j = 0; j < c.num_pairs; ++j)
        {
            acc += b.gamma_bar_s(i, j, k, m) * c.p_s(j, m);
            acc += b.gamma_bar_r(i, j, k, m) * c.p_r(j, m);
        }
    return acc;
}

// ---- Covariance oracles -------------------------------------------------
//
// Direct assemblies of the interference-plus-noise covariance at the relay
// (N x N) and at a destination (scalar), block by block from the signal
// model. They share no code with the gamma decomposition above and exist to
// cross-check it.

namespace detail {

inline Eigen::MatrixXcd precoder_covariance(const FilterSet &f, const SystemConfig &c, std::size_t m,
                                            std::size_t skip_pair = std::numeric_limits<std::size_t>::max())
{
    const auto N = static_cast<Eigen::Index>(c.num_antennas);
    Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(N, N);
    for (std::size_t j = 0; j < c.num_pairs; ++j)
        if (j != skip_pair)
            Q += c.p_r(j, m) * f.v_r(j, m) * f.v_r(j, m).adjoint();
    return Q;
}

inline Eigen::MatrixXcd diag_part(const Eigen::MatrixXcd &A)
{
    return A.diagonal().asDiagonal();
}

inline Eigen::MatrixXcd diag_matrix(const std::vector<double> &w)
{
    Eigen::VectorXcd d(static_cast<Eigen::Index>(w.size()));
    for (std::size_t l = 0; l < w.size(); ++l)
        d[static_cast<Eigen::Index>(l)] = w[l];
    return d.asDiagonal();
}

} // namespace detail

inline Eigen::MatrixXcd covariance_relay(std::size_t i, std::size_t k, const ChannelSet &ch, const FilterSet &f,
                                         const SystemConfig &c)
{
    if (!ch.has_self_interference())
        throw std::invalid_argument("covariance_relay: channel set was sampled without SI matrices");
    const std::size_t L = c.num_pairs, K = c.num_subcarriers;
    const auto N = static_cast<Eigen::Index>(c.num_antennas);
    const DerivedConstants d = derived_constants(c);
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N, N);
    const Eigen::MatrixXcd theta_t = detail::diag_matrix(d.theta_t);
    const Eigen::MatrixXcd theta_r = detail::diag_matrix(d.theta_r);

    auto outer = [](const CVector &x) -> Eigen::MatrixXcd { return x * x.adjoint(); };

    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(N, N);

    // Co-channel interference.
    double err_power = 0.0;
    for (std::size_t j = 0; j < L; ++j)
    {
        if (j != i)
            S += c.p_s(j, k) * outer(ch.h_hat_sr(j, k));
        err_power += c.sigma2_e_sr(j, k) * c.p_s(j, k);
    }
    S += err_power * I;

    // Source transmit distortion.
    double src_err = 0.0;
    for (std::size_t j = 0; j < L; ++j)
    {
        const double total_ps = detail::sum_over_subcarriers(c.p_s, j);
        S += d.kappa_s(j) * total_ps * outer(ch.h_hat_sr(j, k));
        src_err += c.sigma2_e_sr(j, k) * d.kappa_s(j) * total_ps;
    }
    S += src_err * I;

    // SI channel estimation error.
    const Eigen::MatrixXcd Qk = detail::precoder_covariance(f, c, k);
    S += c.sigma2_e_rr(k) * Qk.trace().real() * I;

    // Relay transmit distortion.
    Eigen::MatrixXcd Qall = Eigen::MatrixXcd::Zero(N, N);
    for (std::size_t m = 0; m < K; ++m)
        Qall += detail::precoder_covariance(f, c, m);
    const Eigen::MatrixXcd tx_dist = theta_t * detail::diag_part(Qall);
    const Eigen::MatrixXcd Hk = ch.H_hat_rr[k];
    S += Hk * tx_dist * Hk.adjoint();
    S += c.sigma2_e_rr(k) * tx_dist.trace().real() * I;

    // Thermal noise.
    S += c.sigma2_n_r(k) * I;

    // Relay receive distortion.
    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(N, N);
    for (std::size_t m = 0; m < K; ++m)
    {
        Eigen::MatrixXcd Rm = Eigen::MatrixXcd::Zero(N, N);
        double err_m = 0.0;
        for (std::size_t j = 0; j < L; ++j)
        {
            Rm += c.p_s(j, m) * outer(ch.h_hat_sr(j, m));
            err_m += c.sigma2_e_sr(j, m) * c.p_s(j, m);
        }
        Rm += err_m * I;
        const Eigen::MatrixXcd Qm = detail::precoder_covariance(f, c, m);
        const Eigen::MatrixXcd Hm = ch.H_hat_rr[m];
        Rm += Hm * Qm * Hm.adjoint();
        Rm += c.sigma2_e_rr(m) * Qm.trace().real() * I;
        Rm += c.sigma2_n_r(m) * I;
        R += detail::diag_part(Rm);
    }
    S += theta_r * R;
    return S;
}

inline double covariance_dest(std::size_t i, std::size_t k, const ChannelSet &ch, const FilterSet &f,
                              const SystemConfig &c)
{
    const std::size_t L = c.num_pairs, K = c.num_subcarriers;
    const DerivedConstants d = derived_constants(c);
    const Eigen::MatrixXcd theta_t = detail::diag_matrix(d.theta_t);

    auto quad = [](const CVector &row, const Eigen::MatrixXcd &A) {
        // row A row^H for a 1 x N row vector stored as its entries.
        return (row.transpose() * A * row.conjugate()).value().real();
    };
    const CVector &h = ch.h_hat_rd(i, k);

    double s = 0.0;

    // Co-channel interference.
    const Eigen::MatrixXcd Qk_others = detail::precoder_covariance(f, c, k, i);
    const Eigen::MatrixXcd Qk = detail::precoder_covariance(f, c, k);
    s += quad(h, Qk_others) + c.sigma2_e_rd(i, k) * Qk.trace().real();

    // Source transmit distortion.
    for (std::size_t j = 0; j < L; ++j)
    {
        const double total_ps = detail::sum_over_subcarriers(c.p_s, j);
        s += std::norm(ch.h_hat_sd(i, j, k)) * d.kappa_s(j) * total_ps;
        s += c.sigma2_e_sd(i, j, k) * d.kappa_s(j) * total_ps;
    }

    // Thermal noise.
    s += c.sigma2_n_d(i, k);

    // Relay transmit distortion.
    Eigen::MatrixXcd Qall = Eigen::MatrixXcd::Zero(Qk.rows(), Qk.cols());
    for (std::size_t m = 0; m < K; ++m)
        Qall += detail::precoder_covariance(f, c, m);
    const Eigen::MatrixXcd tx_dist = theta_t * detail::diag_part(Qall);
    s += quad(h, tx_dist) + c.sigma2_e_rd(i, k) * tx_dist.trace().real();

    // Direct channel interference.
    for (std::size_t j = 0; j < L; ++j)
        s += std::norm(ch.h_hat_sd(i, j, k)) * c.p_s(j, k) + c.sigma2_e_sd(i, j, k) * c.p_s(j, k);

    // Destination receive distortion.
    double rx = 0.0;
    for (std::size_t j = 0; j < L; ++j)
        for (std::size_t m = 0; m < K; ++m)
        {
            const Eigen::MatrixXcd P = c.p_r(j, m) * f.v_r(j, m) * f.v_r(j, m).adjoint();
            rx += quad(ch.h_hat_rd(i, m), P) + c.sigma2_e_rd(i, m) * P.trace().real();
            rx += std::norm(ch.h_hat_sd(i, j, m)) * c.p_s(j, m) + c.sigma2_e_sd(i, j, m) * c.p_s(j, m);
        }
    double noise_sum = 0.0;
    for (std::size_t m = 0; m < K; ++m)
        noise_sum += c.sigma2_n_d(i, m);
    s += d.beta_d(i) * rx + d.beta_d(i) * noise_sum;
    return s;
}

// ---- Rates --------------------------------------------------------------

struct RateReport
{
    Tensor2<double> sinr_sr;
    Tensor2<double> sinr_rd;
    Tensor2<double> rate_sr;
    Tensor2<double> rate_rd;
    Tensor2<double> rate_total;
    // Set where a denominator was exactly 0 with a positive numerator; the
    // corresponding SINR is +inf.
    Tensor2<unsigned char> unbounded_sr;
    Tensor2<unsigned char> unbounded_rd;
};

namespace detail {
inline double safe_sinr(double num, double den, unsigned char &unbounded)
{
    unbounded = 0;
    if (num <= 0.0)
        return 0.0;
    if (den == 0.0)
    {
        unbounded = 1;
        return std::numeric_limits<double>::infinity();
    }
    return num / den;
}
} // namespace detail

inline RateReport rates(const InterferenceBreakdown &b, const SystemConfig &c)
{
    const std::size_t L = c.num_pairs, K = c.num_subcarriers;
    RateReport r;
    for (auto *t : {&r.sinr_sr, &r.sinr_rd, &r.rate_sr, &r.rate_rd, &r.rate_total})
        *t = Tensor2<double>({L, K});
    r.unbounded_sr = Tensor2<unsigned char>({L, K});
    r.unbounded_rd = Tensor2<unsigned char>({L, K});

    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t k = 0; k < K; ++k)
        {
            r.sinr_sr(i, k) = detail::safe_sinr(b.mu_s(i, k) * c.p_s(i, k), uplink_denominator(b, c, i, k),
                                                r.unbounded_sr(i, k));
            r.sinr_rd(i, k) = detail::safe_sinr(b.mu_r(i, k) * c.p_r(i, k), downlink_denominator(b, c, i, k),
                                                r.unbounded_rd(i, k));
            r.rate_sr(i, k) = c.gamma0 * std::log2(1.0 + r.sinr_sr(i, k));
            r.rate_rd(i, k) = c.gamma0 * std::log2(1.0 + r.sinr_rd(i, k));
            r.rate_total(i, k) = std::min(r.rate_sr(i, k), r.rate_rd(i, k));
        }
    return r;
}

// ---- Serialization ------------------------------------------------------

inline ordered_json to_json(const RateReport &r)
{
    ordered_json j;
    j["sinr_sr"] = tensor_to_json(r.sinr_sr);
    j["sinr_rd"] = tensor_to_json(r.sinr_rd);
    j["rate_sr"] = tensor_to_json(r.rate_sr);
    j["rate_rd"] = tensor_to_json(r.rate_rd);
    j["rate_total"] = tensor_to_json(r.rate_total);
    j["unbounded_sr"] = tensor_to_json(r.unbounded_sr);
    j["unbounded_rd"] = tensor_to_json(r.unbounded_rd);
    return j;
}

inline ordered_json to_json(const InterferenceBreakdown &b)
{
    ordered_json j;
    j["mu_s"] = tensor_to_json(b.mu_s);
    j["mu_r"] = tensor_to_json(b.mu_r);
    j["alpha_n_r"] = tensor_to_json(b.alpha_n_r);
    j["alpha_n_d"] = tensor_to_json(b.alpha_n_d);
    j["gamma_s"] = tensor_to_json(b.gamma_s);
    j["gamma_r"] = tensor_to_json(b.gamma_r);
    j["gamma_bar_s"] = tensor_to_json(b.gamma_bar_s);
    j["gamma_bar_r"] = tensor_to_json(b.gamma_bar_r);

    auto by_origin = [](const Tensor3<double> &t, const auto &names) {
        ordered_json pairs = ordered_json::array();
        for (std::size_t i = 0; i < t.extent(0); ++i)
        {
            ordered_json carriers = ordered_json::array();
            for (std::size_t k = 0; k < t.extent(1); ++k)
            {
                ordered_json o;
                for (std::size_t n = 0; n < names.size(); ++n)
                    o[std::string(names[n])] = json_number(t(i, k, n));
                carriers.push_back(o);
            }
            pairs.push_back(carriers);
        }
        return pairs;
    };
    j["uplink_by_origin"] = by_origin(b.uplink_by_origin, kUplinkOriginNames);
    j["downlink_by_origin"] = by_origin(b.downlink_by_origin, kDownlinkOriginNames);
    return j;
}

} // namespace fdrelay
