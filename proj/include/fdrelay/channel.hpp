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

#include <bit>
#include <complex>
#include <cstdint>
#include <cstring>
#include <ostream>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fdrelay/config.hpp"
#include "fdrelay/rng.hpp"

namespace fdrelay {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One Monte Carlo realization of all estimated channels.
//
// h_hat_rd[i][k] holds the N entries of the 1 x N row vector; the inner
// product with a precoder v is the plain (unconjugated) sum h.transpose() * v.
// H_hat_rr is empty when the realization was sampled without the SI matrices
// (see ChannelSampling::self_interference).
struct ChannelSet
{
    std::size_t num_pairs = 0;
    std::size_t num_subcarriers = 0;
    std::size_t num_antennas = 0;

    Tensor2<CVector> h_hat_sr; // [i][k]
    Tensor2<CVector> h_hat_rd; // [i][k]
    Tensor3<cdouble> h_hat_sd; // [i][j][k]
    std::vector<CMatrix> H_hat_rr; // [k]

    Tensor2<double> sigma2_e_sr;
    Tensor2<double> sigma2_e_rd;
    Tensor3<double> sigma2_e_sd;
    Tensor1<double> sigma2_e_rr;

    bool has_self_interference() const noexcept { return H_hat_rr.size() == num_subcarriers; }
};

// Realization of the true channels h = h_hat + h_tilde.
struct TrueChannelSet
{
    Tensor2<CVector> h_sr;
    Tensor2<CVector> h_rd;
    Tensor3<cdouble> h_sd;
    std::vector<CMatrix> H_rr;
};

struct ChannelSampling
{
    // The N x N SI matrices dominate memory and time at large N; callers that
    // stream them per subcarrier (sample_self_interference) can skip them here.
    bool self_interference = true;
};

// Estimated SI channel for one subcarrier; identical to the matrix
// sample_channels() produces for the same (seed, trial_index, k).
inline CMatrix sample_self_interference(const SystemConfig &c, std::uint64_t seed, std::uint64_t trial_index,
                                        std::size_t k)
{
    const auto N = static_cast<Eigen::Index>(c.num_antennas);
    CMatrix H(N, N);
    ComplexGaussianStream rng(stream_seed(seed, trial_index, StreamTag::EstSelfInterference, 0, 0, k));
    rng.fill(H, c.psi_hat_rr(k));
    return H;
}

// Draws every estimated channel entry i.i.d. CN(0, psi_hat) from a stream
// keyed on (seed, trial_index, link, i, j, k), so any subset of tensors can be
// regenerated independently and in any order.
inline ChannelSet sample_channels(const SystemConfig &c, std::uint64_t seed, std::uint64_t trial_index,
                                  ChannelSampling opts = {})
{
    const std::size_t L = c.num_pairs, K = c.num_subcarriers;
    const auto N = static_cast<Eigen::Index>(c.num_antennas);

    ChannelSet ch;
    ch.num_pairs = L;
    ch.num_subcarriers = K;
    ch.num_antennas = c.num_antennas;
    ch.h_hat_sr = Tensor2<CVector>(c.pair_carrier_shape());
    ch.h_hat_rd = Tensor2<CVector>(c.pair_carrier_shape());
    ch.h_hat_sd = Tensor3<cdouble>(c.cross_shape());

    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t k = 0; k < K; ++k)
        {
            CVector &sr = ch.h_hat_sr(i, k);
            sr.resize(N);
            ComplexGaussianStream rs(stream_seed(seed, trial_index, StreamTag::EstSourceRelay, i, 0, k));
            rs.fill(sr, c.psi_hat_sr(i, k));

            CVector &rd = ch.h_hat_rd(i, k);
            rd.resize(N);
            ComplexGaussianStream rr(stream_seed(seed, trial_index, StreamTag::EstRelayDest, i, 0, k));
            rr.fill(rd, c.psi_hat_rd(i, k));

            for (std::size_t j = 0; j < L; ++j)
            {
                const double var = c.psi_hat_sd(i, j, k);
                ComplexGaussianStream sd(stream_seed(seed, trial_index, StreamTag::EstSourceDest, i, j, k));
                ch.h_hat_sd(i, j, k) = var == 0.0 ? cdouble{} : sd.draw(var);
            }
        }

    if (opts.self_interference)
    {
        ch.H_hat_rr.reserve(K);
        for (std::size_t k = 0; k < K; ++k)
            ch.H_hat_rr.push_back(sample_self_interference(c, seed, trial_index, k));
    }

    ch.sigma2_e_sr = c.sigma2_e_sr;
    ch.sigma2_e_rd = c.sigma2_e_rd;
    ch.sigma2_e_sd = c.sigma2_e_sd;
    ch.sigma2_e_rr = c.sigma2_e_rr;
    return ch;
}

// Adds independent estimation errors, entries i.i.d. CN(0, sigma2_e), to the
// estimates. Rate formulas never need this; it exists to check the error model.
inline TrueChannelSet sample_true_channels(const ChannelSet &ch, const SystemConfig &c, std::uint64_t seed,
                                           std::uint64_t trial_index)
{
    const std::size_t L = ch.num_pairs, K = ch.num_subcarriers;
    const auto N = static_cast<Eigen::Index>(ch.num_antennas);

    TrueChannelSet t;
    t.h_sr = ch.h_hat_sr;
    t.h_rd = ch.h_hat_rd;
    t.h_sd = ch.h_hat_sd;
    t.H_rr = ch.H_hat_rr;

    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t k = 0; k < K; ++k)
        {
            CVector err(N);
            ComplexGaussianStream es(stream_seed(seed, trial_index, StreamTag::ErrSourceRelay, i, 0, k));
            es.fill(err, c.sigma2_e_sr(i, k));
            t.h_sr(i, k) += err;

            ComplexGaussianStream ed(stream_seed(seed, trial_index, StreamTag::ErrRelayDest, i, 0, k));
            ed.fill(err, c.sigma2_e_rd(i, k));
            t.h_rd(i, k) += err;

            for (std::size_t j = 0; j < L; ++j)
            {
                const double var = c.sigma2_e_sd(i, j, k);
                ComplexGaussianStream e(stream_seed(seed, trial_index, StreamTag::ErrSourceDest, i, j, k));
                if (var != 0.0)
                    t.h_sd(i, j, k) += e.draw(var);
            }
        }

    for (std::size_t k = 0; k < t.H_rr.size(); ++k)
    {
        CMatrix err(N, N);
        ComplexGaussianStream e(stream_seed(seed, trial_index, StreamTag::ErrSelfInterference, 0, 0, k));
        e.fill(err, c.sigma2_e_rr(k));
        t.H_rr[k] += err;
    }
    return t;
}

// ---- Dumps ---------------------------------------------------------------
//
// Binary layout: little-endian float64, interleaved (re, im), row-major.
// Tensors follow each other in the order h_hat_sr [L][K][N],
// h_hat_rd [L][K][N], h_hat_sd [L][L][K], H_hat_rr [K][N][N] (if present).
// No header; shapes are known from the configuration.

namespace detail {

inline void write_f64_le(std::ostream &os, double x)
{
    std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    if constexpr (std::endian::native == std::endian::big)
        bits = __builtin_bswap64(bits);
    char buf[8];
    std::memcpy(buf, &bits, 8);
    os.write(buf, 8);
}

inline void write_complex_le(std::ostream &os, cdouble z)
{
    write_f64_le(os, z.real());
    write_f64_le(os, z.imag());
}

inline nlohmann::json complex_list(const CVector &v)
{
    nlohmann::json a = nlohmann::json::array();
    for (Eigen::Index n = 0; n < v.size(); ++n)
    {
        a.push_back(v[n].real());
        a.push_back(v[n].imag());
    }
    return a;
}

} // namespace detail

// Writes any complex matrix in the dump layout (row-major, interleaved).
template <typename Derived>
void write_complex_matrix(std::ostream &os, const Eigen::MatrixBase<Derived> &m)
{
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index col = 0; col < m.cols(); ++col)
            detail::write_complex_le(os, m(r, col));
}

inline void write_channels_binary(std::ostream &os, const ChannelSet &ch)
{
    for (const auto &v : ch.h_hat_sr)
        write_complex_matrix(os, v.transpose());
    for (const auto &v : ch.h_hat_rd)
        write_complex_matrix(os, v.transpose());
    for (const auto &z : ch.h_hat_sd)
        detail::write_complex_le(os, z);
    for (const auto &H : ch.H_hat_rr)
        write_complex_matrix(os, H);
}

// JSON dump: each tensor flattened row-major with interleaved re/im.
inline nlohmann::json channels_to_json(const ChannelSet &ch)
{
    nlohmann::json j;
    j["num_pairs"] = ch.num_pairs;
    j["num_subcarriers"] = ch.num_subcarriers;
    j["num_antennas"] = ch.num_antennas;
    auto flat_vectors = [](const Tensor2<CVector> &t) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto &v : t)
            for (auto &x : detail::complex_list(v))
                a.push_back(x);
        return a;
    };
    j["h_hat_sr"] = flat_vectors(ch.h_hat_sr);
    j["h_hat_rd"] = flat_vectors(ch.h_hat_rd);
    nlohmann::json sd = nlohmann::json::array();
    for (const auto &z : ch.h_hat_sd)
    {
        sd.push_back(z.real());
        sd.push_back(z.imag());
    }
    j["h_hat_sd"] = sd;
    nlohmann::json rr = nlohmann::json::array();
    for (const auto &H : ch.H_hat_rr)
        for (Eigen::Index r = 0; r < H.rows(); ++r)
            for (Eigen::Index col = 0; col < H.cols(); ++col)
            {
                rr.push_back(H(r, col).real());
                rr.push_back(H(r, col).imag());
            }
    j["H_hat_rr"] = rr;
    return j;
}

} // namespace fdrelay
