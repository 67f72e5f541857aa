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
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdrelay {

// Dense row-major tensor with a runtime shape. Index order follows the
// physical notation used throughout: [pair][subcarrier], [i][j][k], [i][j][k][m].
template <typename T, std::size_t Rank>
class Tensor
{
public:
    using value_type = T;
    using shape_type = std::array<std::size_t, Rank>;

    Tensor() { shape_.fill(0); }

    explicit Tensor(const shape_type &shape, const T &fill = T{})
        : shape_(shape), data_(element_count(shape), fill) {}

    Tensor(const shape_type &shape, std::vector<T> data)
        : shape_(shape), data_(std::move(data))
    {
        if (data_.size() != element_count(shape_))
            throw std::invalid_argument("Tensor: data size does not match shape");
    }

    const shape_type &shape() const noexcept { return shape_; }
    std::size_t extent(std::size_t dim) const { return shape_.at(dim); }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    template <typename... Idx>
    T &operator()(Idx... idx)
    {
        static_assert(sizeof...(Idx) == Rank, "index count must equal tensor rank");
        return data_[offset({static_cast<std::size_t>(idx)...})];
    }

    template <typename... Idx>
    const T &operator()(Idx... idx) const
    {
        static_assert(sizeof...(Idx) == Rank, "index count must equal tensor rank");
        return data_[offset({static_cast<std::size_t>(idx)...})];
    }

    std::span<T> flat() noexcept { return data_; }
    std::span<const T> flat() const noexcept { return data_; }
    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    bool operator==(const Tensor &) const = default;

    static std::size_t element_count(const shape_type &shape)
    {
        return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
    }

private:
    std::size_t offset(const shape_type &idx) const
    {
        std::size_t off = 0;
        for (std::size_t d = 0; d < Rank; ++d)
            off = off * shape_[d] + idx[d];
        return off;
    }

    shape_type shape_;
    std::vector<T> data_;
};

template <typename T> using Tensor1 = Tensor<T, 1>;
template <typename T> using Tensor2 = Tensor<T, 2>;
template <typename T> using Tensor3 = Tensor<T, 3>;
template <typename T> using Tensor4 = Tensor<T, 4>;

template <std::size_t Rank>
std::string shape_string(const std::array<std::size_t, Rank> &shape)
{
    std::string s = "(";
    for (std::size_t d = 0; d < Rank; ++d)
    {
        if (d)
            s += ", ";
        s += std::to_string(shape[d]);
    }
    return s + ")";
}

} // namespace fdrelay
