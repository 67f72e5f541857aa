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
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace fdrelay {

inline constexpr const char *kParallelismEnv = "FDRELAY_PARALLELISM";

// Worker count used when a caller passes 0: FDRELAY_PARALLELISM if set to a
// positive integer, otherwise the hardware concurrency (at least 1).
inline std::size_t default_parallelism()
{
    if (const char *env = std::getenv(kParallelismEnv))
    {
        char *end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

inline std::size_t resolve_parallelism(std::size_t requested)
{
    return requested == 0 ? default_parallelism() : requested;
}

// Runs body(n) for n in [0, count) on up to `workers` threads. Indices are
// handed out in ascending order; after the first failure no new index is
// started. The exception of the lowest failing index is rethrown, so the
// reported error does not depend on thread timing.
template <typename Body>
void parallel_for(std::size_t count, std::size_t workers, Body &&body)
{
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto run = [&] {
        for (;;)
        {
            if (failed.load(std::memory_order_acquire))
                return;
            const std::size_t n = next.fetch_add(1, std::memory_order_relaxed);
            if (n >= count)
                return;
            try
            {
                body(n);
            }
            catch (...)
            {
                errors[n] = std::current_exception();
                failed.store(true, std::memory_order_release);
            }
        }
    };

    if (workers == 1)
        run();
    else
    {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(run);
        for (auto &t : pool)
            t.join();
    }
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace fdrelay
