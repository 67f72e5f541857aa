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
#include <cmath>
#include <span>
#include <vector>

namespace fdrelay {

// Pairwise (cascade) summation in index order. The split points depend only on
// the length, so equal inputs give bit-identical sums.
inline double pairwise_sum(std::span<const double> x)
{
    if (x.size() <= 8)
    {
        double acc = 0.0;
        for (double v : x)
            acc += v;
        return acc;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

struct SampleSummary
{
    double mean = 0.0;
    double stddev = 0.0; // unbiased (n - 1); 0 for a single sample
    double median = 0.0;
};

// Statistics of per-trial values stored in ascending trial order.
inline SampleSummary summarize(std::span<const double> x)
{
    SampleSummary s;
    if (x.empty())
        return s;
    const double n = static_cast<double>(x.size());
    s.mean = pairwise_sum(x) / n;
    if (x.size() > 1)
    {
        std::vector<double> sq(x.size());
        for (std::size_t t = 0; t < x.size(); ++t)
            sq[t] = (x[t] - s.mean) * (x[t] - s.mean);
        s.stddev = std::sqrt(pairwise_sum(sq) / (n - 1.0));
    }
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    s.median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return s;
}

} // namespace fdrelay
