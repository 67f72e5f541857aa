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

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>

#include <Eigen/Dense>
#include <boost/random/normal_distribution.hpp>

namespace fdrelay {

// Identifies which random tensor a stream feeds. Values are part of the
// reproducibility contract; never renumber.
enum class StreamTag : std::uint64_t
{
    EstSourceRelay = 1,
    EstRelayDest = 2,
    EstSourceDest = 3,
    EstSelfInterference = 4,
    ErrSourceRelay = 11,
    ErrRelayDest = 12,
    ErrSourceDest = 13,
    ErrSelfInterference = 14,
    LemmaP = 21,
    LemmaQ = 22,
    LemmaMatrix = 23,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t &state) noexcept
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Folds a key tuple into one 64-bit stream seed. Each word passes through a
// full splitmix round so nearby tuples land on unrelated seeds.
inline constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t trial, StreamTag tag,
                                           std::uint64_t i = 0, std::uint64_t j = 0, std::uint64_t k = 0) noexcept
{
    std::uint64_t state = 0x6A09E667F3BCC909ULL;
    for (std::uint64_t word : {seed, trial, static_cast<std::uint64_t>(tag), i, j, k})
    {
        state ^= word;
        state = splitmix64(state);
    }
    return state;
}

// xoshiro256++ (Blackman & Vigna), seeded through splitmix64.
class Xoshiro256pp
{
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed) noexcept
    {
        for (auto &w : s_)
            w = splitmix64(seed);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_{};
};

// Circularly-symmetric complex Gaussian source, CN(0, variance):
// real and imaginary parts are independent N(0, variance / 2).
class ComplexGaussianStream
{
public:
    explicit ComplexGaussianStream(std::uint64_t seed) : engine_(seed) {}

    std::complex<double> draw(double variance)
    {
        const double scale = std::sqrt(0.5 * variance);
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {scale * re, scale * im};
    }

    // Zero variance yields exact zeros without consuming the stream.
    template <typename Derived>
    void fill(Eigen::DenseBase<Derived> &out, double variance)
    {
        if (variance == 0.0)
        {
            out.setZero();
            return;
        }
        const double scale = std::sqrt(0.5 * variance);
        // Row-major traversal regardless of storage order so dumps and
        // cross-implementation comparisons see the same element sequence.
        for (Eigen::Index r = 0; r < out.rows(); ++r)
            for (Eigen::Index c = 0; c < out.cols(); ++c)
            {
                const double re = normal_(engine_);
                const double im = normal_(engine_);
                out(r, c) = std::complex<double>(scale * re, scale * im);
            }
    }

private:
    Xoshiro256pp engine_;
    boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace fdrelay
