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
#include <limits>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fdrelay/tensor.hpp"

namespace fdrelay {

using ordered_json = nlohmann::ordered_json;

class JsonFormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// JSON has no infinities; they travel as the strings "inf" / "-inf" / "nan".
inline ordered_json json_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    return x;
}

inline double number_from_json(const nlohmann::json &j)
{
    if (j.is_number())
        return j.get<double>();
    if (j.is_string())
    {
        const auto &s = j.get_ref<const std::string &>();
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
        if (s == "nan")
            return std::numeric_limits<double>::quiet_NaN();
    }
    throw JsonFormatError("expected a number, got " + j.dump());
}

namespace detail {

template <typename T, std::size_t Rank>
ordered_json nested(const Tensor<T, Rank> &t, std::size_t dim, std::size_t &pos)
{
    ordered_json arr = ordered_json::array();
    for (std::size_t n = 0; n < t.shape()[dim]; ++n)
    {
        if (dim + 1 == Rank)
        {
            if constexpr (std::is_floating_point_v<T>)
                arr.push_back(json_number(t.flat()[pos++]));
            else
                arr.push_back(t.flat()[pos++]);
        }
        else
            arr.push_back(nested<T, Rank>(t, dim + 1, pos));
    }
    return arr;
}

} // namespace detail

// Nested row-major JSON arrays, outermost index first.
template <typename T, std::size_t Rank>
ordered_json tensor_to_json(const Tensor<T, Rank> &t)
{
    std::size_t pos = 0;
    return detail::nested<T, Rank>(t, 0, pos);
}

namespace detail {

template <std::size_t Rank>
void collect(const nlohmann::json &j, std::size_t depth, std::array<std::size_t, Rank> &shape,
             std::array<bool, Rank> &seen, std::vector<nlohmann::json> &leaves)
{
    if (depth == Rank)
    {
        leaves.push_back(j);
        return;
    }
    if (!j.is_array())
        throw JsonFormatError("expected an array nested " + std::to_string(Rank) + " level(s) deep");
    if (!seen[depth])
    {
        shape[depth] = j.size();
        seen[depth] = true;
    }
    else if (shape[depth] != j.size())
        throw JsonFormatError("ragged array at nesting depth " + std::to_string(depth));
    for (const auto &e : j)
        collect<Rank>(e, depth + 1, shape, seen, leaves);
}

} // namespace detail

template <typename T, std::size_t Rank>
Tensor<T, Rank> tensor_from_json(const nlohmann::json &j)
{
    std::array<std::size_t, Rank> shape{};
    std::array<bool, Rank> seen{};
    std::vector<nlohmann::json> leaves;
    detail::collect<Rank>(j, 0, shape, seen, leaves);
    std::vector<T> data;
    data.reserve(leaves.size());
    for (const auto &leaf : leaves)
    {
        if constexpr (std::is_floating_point_v<T>)
            data.push_back(static_cast<T>(number_from_json(leaf)));
        else
            data.push_back(leaf.get<T>());
    }
    return Tensor<T, Rank>(shape, std::move(data));
}

} // namespace fdrelay
