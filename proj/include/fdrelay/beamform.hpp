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

#include <stdexcept>
#include <string>

#include "fdrelay/channel.hpp"

namespace fdrelay {

enum class Link
{
    SourceRelay,
    RelayDest,
};

inline const char *link_name(Link l) { return l == Link::SourceRelay ? "source-relay" : "relay-destination"; }

// An estimated channel vector with zero norm; MRC/MRT is undefined for it.
class ZeroChannel : public std::runtime_error
{
public:
    ZeroChannel(std::size_t pair, std::size_t subcarrier, Link link)
        : std::runtime_error(std::string("zero ") + link_name(link) + " channel at pair " + std::to_string(pair) +
                             ", subcarrier " + std::to_string(subcarrier)),
          pair_(pair), subcarrier_(subcarrier), link_(link) {}

    std::size_t pair() const noexcept { return pair_; }
    std::size_t subcarrier() const noexcept { return subcarrier_; }
    Link link() const noexcept { return link_; }

private:
    std::size_t pair_, subcarrier_;
    Link link_;
};

// Unit-norm MRC receive filters and MRT transmit precoders.
struct FilterSet
{
    Tensor2<CVector> u_r; // [i][k], receive filter
    Tensor2<CVector> v_r; // [i][k], transmit precoder (column)
};

inline constexpr double kZeroNormFloor = 1e-300;

// u = h_sr / ||h_sr||,  v = h_rd^H / ||h_rd||.
inline FilterSet build_mrc_mrt(const ChannelSet &ch)
{
    FilterSet f;
    f.u_r = Tensor2<CVector>(ch.h_hat_sr.shape());
    f.v_r = Tensor2<CVector>(ch.h_hat_rd.shape());
    for (std::size_t i = 0; i < ch.num_pairs; ++i)
        for (std::size_t k = 0; k < ch.num_subcarriers; ++k)
        {
            const CVector &hsr = ch.h_hat_sr(i, k);
            const double nsr = hsr.norm();
            if (!(nsr >= kZeroNormFloor))
                throw ZeroChannel(i, k, Link::SourceRelay);
            f.u_r(i, k) = hsr / nsr;

            const CVector &hrd = ch.h_hat_rd(i, k);
            const double nrd = hrd.norm();
            if (!(nrd >= kZeroNormFloor))
                throw ZeroChannel(i, k, Link::RelayDest);
            f.v_r(i, k) = hrd.conjugate() / nrd;
        }
    return f;
}

} // namespace fdrelay
