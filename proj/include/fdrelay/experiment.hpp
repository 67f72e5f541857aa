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

#include <charconv>
#include <cstdint>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdrelay/asymptotic.hpp"
#include "fdrelay/beamform.hpp"
#include "fdrelay/channel.hpp"
#include "fdrelay/config.hpp"
#include "fdrelay/config_io.hpp"
#include "fdrelay/finite_rate.hpp"
#include "fdrelay/json_util.hpp"
#include "fdrelay/parallel.hpp"
#include "fdrelay/stats.hpp"

namespace fdrelay {

// ---- Single trial -------------------------------------------------------

// Draws H_hat_rr[k] row by row from the same stream sample_self_interference()
// uses and accumulates its images through the filters, so the N x N matrix
// never exists in memory.
inline void stream_self_interference(const SystemConfig &c, std::uint64_t seed, std::uint64_t trial_index,
                                     std::size_t k, const FilterSet &f, SiProjections &out)
{
    const auto N = static_cast<Eigen::Index>(c.num_antennas);
    const std::size_t L = c.num_pairs;
    for (std::size_t i = 0; i < L; ++i)
    {
        out.rx(i, k) = CVector::Zero(N);
        out.tx(i, k) = CVector::Zero(N);
    }
    ComplexGaussianStream rng(stream_seed(seed, trial_index, StreamTag::EstSelfInterference, 0, 0, k));
    Eigen::RowVectorXcd row(N);
    for (Eigen::Index r = 0; r < N; ++r)
    {
        rng.fill(row, c.psi_hat_rr(k));
        for (std::size_t i = 0; i < L; ++i)
        {
            out.tx(i, k)[r] = row.cwiseProduct(f.v_r(i, k).transpose()).sum();
            out.rx(i, k).noalias() += row.adjoint() * f.u_r(i, k)[r];
        }
    }
}

inline bool relay_distortion_active(const SystemConfig &c)
{
    for (double x : c.kappa_r_tilde.coeffs)
        if (x != 0.0)
            return true;
    for (double x : c.beta_r_tilde.coeffs)
        if (x != 0.0)
            return true;
    return false;
}

// One Monte Carlo realization end to end. The SI images are needed only when
// relay distortion is configured; otherwise they are exact zeros and the SI
// matrices are not drawn.
inline RateReport run_trial(const SystemConfig &c, std::uint64_t seed, std::uint64_t trial_index)
{
    require_valid(c);
    const ChannelSet ch = sample_channels(c, seed, trial_index, {.self_interference = false});
    const FilterSet f = build_mrc_mrt(ch);
    SiProjections si = make_si_projections(c.num_pairs, c.num_subcarriers);
    const bool need_si = relay_distortion_active(c);
    for (std::size_t k = 0; k < c.num_subcarriers; ++k)
    {
        if (need_si)
            stream_self_interference(c, seed, trial_index, k, f, si);
        else
            zero_self_interference(c.num_antennas, k, si);
    }
    InterferenceBreakdown b;
    uplink_terms(ch, f, si, c, b);
    downlink_terms(ch, f, c, b);
    return rates(b, c);
}

// ---- Sweep --------------------------------------------------------------

// A trial failure, tagged with where it happened. cause() holds the original
// exception (ZeroChannel, ConfigError, ...).
class TrialError : public std::runtime_error
{
public:
    TrialError(std::size_t n, std::size_t trial, std::exception_ptr cause, const std::string &what)
        : std::runtime_error("N=" + std::to_string(n) + ", trial " + std::to_string(trial) + ": " + what),
          n_(n), trial_(trial), cause_(std::move(cause)) {}

    std::size_t n() const noexcept { return n_; }
    std::size_t trial() const noexcept { return trial_; }
    const std::exception_ptr &cause() const noexcept { return cause_; }

private:
    std::size_t n_, trial_;
    std::exception_ptr cause_;
};

// Sweep aggregates. Tensors over (i, k, n_index) are [pair][subcarrier][n].
struct SweepResult
{
    std::vector<std::size_t> n_values;
    Tensor3<double> mean_rate;
    Tensor3<double> std_rate;
    Tensor2<double> asymptotic_rate;
    Tensor3<double> gap;            // |mean_rate - asymptotic_rate|
    Tensor3<double> median_abs_gap; // median over trials of |rate - asymptotic_rate|
    Tensor3<double> mean_sinr_sr;
    Tensor3<double> mean_sinr_rd;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string config_digest;

    bool operator==(const SweepResult &) const = default;
};

inline std::vector<std::size_t> default_n_values() { return {16, 64, 256, 1024}; }
inline constexpr std::size_t kDefaultTrials = 100;

inline SweepResult run_sweep(const SystemConfig &config_template, const std::vector<std::size_t> &n_values,
                             std::size_t trials, std::uint64_t seed, std::size_t parallelism = 0)
{
    if (n_values.empty())
        throw std::invalid_argument("run_sweep: n_values must not be empty");
    for (std::size_t n = 0; n < n_values.size(); ++n)
        if (n_values[n] == 0 || (n > 0 && n_values[n] <= n_values[n - 1]))
            throw std::invalid_argument("run_sweep: n_values must be positive and strictly ascending");
    if (trials == 0)
        throw std::invalid_argument("run_sweep: trials must be at least 1");
    require_valid(config_template);

    const std::size_t L = config_template.num_pairs, K = config_template.num_subcarriers;
    const std::size_t S = n_values.size();
    const std::size_t workers = resolve_parallelism(parallelism);

    SweepResult res;
    res.n_values = n_values;
    res.trials = trials;
    res.seed = seed;
    res.config_digest = config_digest(config_template);
    res.asymptotic_rate = asymptotic_rate(config_template).rate_limit;
    for (auto *t : {&res.mean_rate, &res.std_rate, &res.gap, &res.median_abs_gap, &res.mean_sinr_sr,
                    &res.mean_sinr_rd})
        *t = Tensor3<double>({L, K, S});

    // Per-trial samples, slot [trial][i][k], filled in any order and reduced
    // in ascending trial order.
    Tensor3<double> rate({trials, L, K}), sinr_sr({trials, L, K}), sinr_rd({trials, L, K});
    std::vector<double> column(trials);

    for (std::size_t s = 0; s < S; ++s)
    {
        const SystemConfig cfg = with_antennas(config_template, n_values[s]);
        require_valid(cfg);
        parallel_for(trials, workers, [&](std::size_t t) {
            try
            {
                const RateReport r = run_trial(cfg, seed, t);
                for (std::size_t i = 0; i < L; ++i)
                    for (std::size_t k = 0; k < K; ++k)
                    {
                        rate(t, i, k) = r.rate_total(i, k);
                        sinr_sr(t, i, k) = r.sinr_sr(i, k);
                        sinr_rd(t, i, k) = r.sinr_rd(i, k);
                    }
            }
            catch (const std::exception &e)
            {
                throw TrialError(n_values[s], t, std::current_exception(), e.what());
            }
        });

        for (std::size_t i = 0; i < L; ++i)
            for (std::size_t k = 0; k < K; ++k)
            {
                const double limit = res.asymptotic_rate(i, k);
                for (std::size_t t = 0; t < trials; ++t)
                    column[t] = rate(t, i, k);
                const SampleSummary rs = summarize(column);
                res.mean_rate(i, k, s) = rs.mean;
                res.std_rate(i, k, s) = rs.stddev;
                res.gap(i, k, s) = std::abs(rs.mean - limit);

                for (std::size_t t = 0; t < trials; ++t)
                    column[t] = std::abs(rate(t, i, k) - limit);
                res.median_abs_gap(i, k, s) = summarize(column).median;

                for (std::size_t t = 0; t < trials; ++t)
                    column[t] = sinr_sr(t, i, k);
                res.mean_sinr_sr(i, k, s) = summarize(column).mean;
                for (std::size_t t = 0; t < trials; ++t)
                    column[t] = sinr_rd(t, i, k);
                res.mean_sinr_rd(i, k, s) = summarize(column).mean;
            }
    }
    return res;
}

// ---- Result files -------------------------------------------------------

class ResultFormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline ordered_json to_json(const SweepResult &r)
{
    ordered_json j;
    j["n_values"] = r.n_values;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["config_digest"] = r.config_digest;
    j["asymptotic_rate"] = tensor_to_json(r.asymptotic_rate);
    j["mean_rate"] = tensor_to_json(r.mean_rate);
    j["std_rate"] = tensor_to_json(r.std_rate);
    j["gap"] = tensor_to_json(r.gap);
    j["median_abs_gap"] = tensor_to_json(r.median_abs_gap);
    j["mean_sinr_sr"] = tensor_to_json(r.mean_sinr_sr);
    j["mean_sinr_rd"] = tensor_to_json(r.mean_sinr_rd);
    return j;
}

inline SweepResult sweep_from_json(const nlohmann::json &j)
{
    try
    {
        SweepResult r;
        r.n_values = j.at("n_values").get<std::vector<std::size_t>>();
        r.trials = j.at("trials").get<std::size_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.config_digest = j.at("config_digest").get<std::string>();
        r.asymptotic_rate = tensor_from_json<double, 2>(j.at("asymptotic_rate"));
        r.mean_rate = tensor_from_json<double, 3>(j.at("mean_rate"));
        r.std_rate = tensor_from_json<double, 3>(j.at("std_rate"));
        r.gap = tensor_from_json<double, 3>(j.at("gap"));
        r.median_abs_gap = tensor_from_json<double, 3>(j.at("median_abs_gap"));
        r.mean_sinr_sr = tensor_from_json<double, 3>(j.at("mean_sinr_sr"));
        r.mean_sinr_rd = tensor_from_json<double, 3>(j.at("mean_sinr_rd"));
        return r;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ResultFormatError(std::string("sweep result: ") + e.what());
    }
    catch (const JsonFormatError &e)
    {
        throw ResultFormatError(std::string("sweep result: ") + e.what());
    }
}

inline std::string emit_json(const SweepResult &r) { return to_json(r).dump(2) + "\n"; }

inline SweepResult parse_sweep_json(const std::string &text)
{
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw ResultFormatError(std::string("malformed JSON: ") + e.what());
    }
    return sweep_from_json(j);
}

// One CSV row per (pair, subcarrier, n).
struct SweepRow
{
    std::size_t pair = 0;
    std::size_t subcarrier = 0;
    std::size_t n = 0;
    double mean_rate = 0.0;
    double std_rate = 0.0;
    double asymptotic_rate = 0.0;
    double gap = 0.0;

    bool operator==(const SweepRow &) const = default;
};

inline constexpr const char *kCsvHeader = "pair,subcarrier,n,mean_rate,std_rate,asymptotic_rate,gap";

inline std::vector<SweepRow> sweep_rows(const SweepResult &r)
{
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < r.mean_rate.extent(0); ++i)
        for (std::size_t k = 0; k < r.mean_rate.extent(1); ++k)
            for (std::size_t s = 0; s < r.n_values.size(); ++s)
                rows.push_back({i, k, r.n_values[s], r.mean_rate(i, k, s), r.std_rate(i, k, s),
                                r.asymptotic_rate(i, k), r.gap(i, k, s)});
    return rows;
}

namespace detail {

// Shortest representation that parses back to the same double.
inline std::string shortest(double x)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s)
{
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ResultFormatError("bad number '" + std::string(s) + "' in CSV");
    return x;
}

inline std::size_t parse_index(std::string_view s)
{
    std::size_t x = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ResultFormatError("bad integer '" + std::string(s) + "' in CSV");
    return x;
}

} // namespace detail

inline std::string emit_csv(const SweepResult &r)
{
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const auto &row : sweep_rows(r))
        os << row.pair << ',' << row.subcarrier << ',' << row.n << ',' << detail::shortest(row.mean_rate) << ','
           << detail::shortest(row.std_rate) << ',' << detail::shortest(row.asymptotic_rate) << ','
           << detail::shortest(row.gap) << '\n';
    return os.str();
}

inline std::vector<SweepRow> parse_csv(const std::string &text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw ResultFormatError("CSV header must be '" + std::string(kCsvHeader) + "'");
    std::vector<SweepRow> rows;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        std::vector<std::string_view> cells;
        std::string_view rest(line);
        for (;;)
        {
            const auto comma = rest.find(',');
            cells.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
        if (cells.size() != 7)
            throw ResultFormatError("CSV row with " + std::to_string(cells.size()) + " cells, expected 7");
        rows.push_back({detail::parse_index(cells[0]), detail::parse_index(cells[1]), detail::parse_index(cells[2]),
                        detail::parse_double(cells[3]), detail::parse_double(cells[4]),
                        detail::parse_double(cells[5]), detail::parse_double(cells[6])});
    }
    return rows;
}

} // namespace fdrelay
