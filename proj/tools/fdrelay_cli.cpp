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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdrelay.hpp"

// Exit codes
//   0  success
//   1  invalid configuration (violations printed) or a domain error such as a
//      zero channel, an undefined power ratio or a failed lemma check
//   2  I/O, JSON parse or command-line errors

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kIoError = 2;

struct Options
{
    std::string config_path;
    std::string out_path;

    // simulate
    std::size_t n = 0;
    std::uint64_t trial = 0;
    bool breakdown = false;
    std::string dump_channels;
    std::string dump_covariance;

    // asymptote
    bool perfect_csi = false;

    // sweep
    std::vector<std::size_t> n_values = fdrelay::default_n_values();
    std::size_t trials = fdrelay::kDefaultTrials;
    std::uint64_t seed = 1;
    std::size_t parallelism = 0;
    std::string format = "json";

    // verify-lemmas
    std::size_t lemma_n = 4096;
    std::size_t lemma_trials = 200;
};

void write_output(const std::string &path, const std::string &text)
{
    if (path.empty() || path == "-")
    {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::ios_base::failure("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out)
        throw std::ios_base::failure("failed writing '" + path + "'");
}

template <typename Writer>
void write_binary(const std::string &path, Writer &&writer)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::ios_base::failure("cannot open '" + path + "' for writing");
    writer(out);
    out.close();
    if (!out)
        throw std::ios_base::failure("failed writing '" + path + "'");
}

fdrelay::SystemConfig load_valid(const std::string &path)
{
    auto c = fdrelay::load_config(path);
    fdrelay::require_valid(c);
    return c;
}

int cmd_simulate(const Options &o)
{
    auto c = load_valid(o.config_path);
    if (o.n != 0)
        c = fdrelay::with_antennas(c, o.n);
    fdrelay::require_valid(c);

    fdrelay::ordered_json j;
    j["config_digest"] = fdrelay::config_digest(c);
    j["num_antennas"] = c.num_antennas;
    j["seed"] = o.seed;
    j["trial"] = o.trial;

    if (o.breakdown || !o.dump_channels.empty() || !o.dump_covariance.empty())
    {
        const auto ch = fdrelay::sample_channels(c, o.seed, o.trial);
        const auto f = fdrelay::build_mrc_mrt(ch);
        const auto b = fdrelay::interference_breakdown(ch, f, c);
        j["report"] = fdrelay::to_json(fdrelay::rates(b, c));
        if (o.breakdown)
            j["breakdown"] = fdrelay::to_json(b);
        if (!o.dump_channels.empty())
        {
            if (o.dump_channels.ends_with(".json"))
                write_output(o.dump_channels, fdrelay::channels_to_json(ch).dump() + "\n");
            else
                write_binary(o.dump_channels, [&](std::ostream &os) { fdrelay::write_channels_binary(os, ch); });
        }
        if (!o.dump_covariance.empty())
            write_binary(o.dump_covariance, [&](std::ostream &os) {
                for (std::size_t i = 0; i < c.num_pairs; ++i)
                    for (std::size_t k = 0; k < c.num_subcarriers; ++k)
                        fdrelay::write_complex_matrix(os, fdrelay::covariance_relay(i, k, ch, f, c));
            });
    }
    else
        j["report"] = fdrelay::to_json(fdrelay::run_trial(c, o.seed, o.trial));

    write_output(o.out_path, j.dump(2) + "\n");
    return kOk;
}

int cmd_asymptote(const Options &o)
{
    const auto c = load_valid(o.config_path);
    const auto a = o.perfect_csi ? fdrelay::asymptotic_rate_perfect_csi(c) : fdrelay::asymptotic_rate(c);
    fdrelay::ordered_json j;
    j["config_digest"] = fdrelay::config_digest(c);
    j["perfect_csi"] = o.perfect_csi;
    j["limits"] = fdrelay::to_json(a);
    write_output(o.out_path, j.dump(2) + "\n");
    return kOk;
}

int cmd_sweep(const Options &o)
{
    const auto c = load_valid(o.config_path);
    const auto r = fdrelay::run_sweep(c, o.n_values, o.trials, o.seed, o.parallelism);
    write_output(o.out_path, o.format == "csv" ? fdrelay::emit_csv(r) : fdrelay::emit_json(r));
    return kOk;
}

int cmd_verify_lemmas(const Options &o)
{
    // Without a configuration both vectors have unit variance; with one, the
    // variances are the estimated source-relay and relay-destination gains of
    // pair 0, subcarrier 0.
    double var_p = 1.0, var_q = 1.0;
    if (!o.config_path.empty())
    {
        const auto c = load_valid(o.config_path);
        var_p = c.psi_hat_sr(0, 0);
        var_q = c.psi_hat_rd(0, 0);
    }
    std::vector<fdrelay::ConcentrationReport> reports;
    reports.push_back(
        fdrelay::lemma1_check(o.lemma_n, std::sqrt(var_p), std::sqrt(var_q), o.lemma_trials, o.seed, o.parallelism));
    for (auto spec : {fdrelay::MatrixSpec::Identity, fdrelay::MatrixSpec::DiagonalRamp,
                      fdrelay::MatrixSpec::TracelessHermitian})
        reports.push_back(fdrelay::lemma2_check(o.lemma_n, spec, o.lemma_trials, o.seed, o.parallelism));

    fdrelay::ordered_json j = fdrelay::ordered_json::array();
    bool pass = true;
    for (const auto &r : reports)
    {
        j.push_back(fdrelay::to_json(r));
        pass = pass && r.pass();
    }
    write_output(o.out_path, j.dump(2) + "\n");
    return pass ? kOk : kInvalid;
}

int report_domain_error(std::exception_ptr e)
{
    try
    {
        std::rethrow_exception(e);
    }
    catch (const fdrelay::ConfigError &err)
    {
        std::cerr << "error: invalid configuration\n";
        for (const auto &v : err.report().violations)
            std::cerr << "  " << v.to_string() << '\n';
        return kInvalid;
    }
    catch (const fdrelay::ZeroChannel &err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return kInvalid;
    }
    catch (const fdrelay::ZeroPowerRatio &err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return kInvalid;
    }
    catch (const fdrelay::NonScalarRelayDistortion &err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return kInvalid;
    }
    catch (const fdrelay::ConfigParseError &err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return kIoError;
    }
    catch (const std::exception &err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return kIoError;
    }
}

} // namespace

int main(int argc, char **argv)
{
    Options o;
    CLI::App app{"Finite-N and asymptotic rates of a full-duplex massive MIMO relay"};
    app.require_subcommand(1);

    auto add_config = [&](CLI::App *sub, bool required) {
        auto *opt = sub->add_option("--config", o.config_path, "JSON system configuration");
        if (required)
            opt->required();
        opt->check(CLI::ExistingFile);
    };
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--out", o.out_path, "Output file (default: stdout)");
        sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    };

    auto *simulate = app.add_subcommand("simulate", "Rates of one channel realization");
    add_config(simulate, true);
    add_common(simulate);
    simulate->add_option("--n", o.n, "Relay antennas (default: from the configuration)");
    simulate->add_option("--trial", o.trial, "Trial index of the realization")->capture_default_str();
    simulate->add_flag("--breakdown", o.breakdown, "Include gamma terms and per-origin interference");
    simulate->add_option("--dump-channels", o.dump_channels,
                         "Write the sampled channels (binary float64, or JSON if the name ends in .json)");
    simulate->add_option("--dump-covariance", o.dump_covariance,
                         "Write every relay covariance matrix, pair-major (binary float64)");

    auto *asymptote = app.add_subcommand("asymptote", "Closed-form large-array limits");
    add_config(asymptote, true);
    asymptote->add_option("--out", o.out_path, "Output file (default: stdout)");
    asymptote->add_flag("--perfect-csi", o.perfect_csi, "Use true instead of estimated channel statistics");

    auto *sweep = app.add_subcommand("sweep", "Monte Carlo sweep over the relay array size");
    add_config(sweep, true);
    add_common(sweep);
    sweep->add_option("--n-values", o.n_values, "Comma-separated antenna counts, ascending")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--trials", o.trials, "Trials per antenna count")->check(CLI::PositiveNumber)->capture_default_str();
    sweep->add_option("--parallelism", o.parallelism,
                      std::string("Worker threads (0: $") + fdrelay::kParallelismEnv + " or all cores)")
        ->capture_default_str();
    sweep->add_option("--format", o.format, "Result format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    auto *lemmas = app.add_subcommand("verify-lemmas", "Statistical checks of the concentration lemmas");
    add_config(lemmas, false);
    add_common(lemmas);
    lemmas->add_option("--n", o.lemma_n, "Vector length")->check(CLI::PositiveNumber)->capture_default_str();
    lemmas->add_option("--trials", o.lemma_trials, "Trials")->check(CLI::PositiveNumber)->capture_default_str();
    lemmas->add_option("--parallelism", o.parallelism, "Worker threads (0: all cores)")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kIoError;
    }

    try
    {
        if (*simulate)
            return cmd_simulate(o);
        if (*asymptote)
            return cmd_asymptote(o);
        if (*sweep)
            return cmd_sweep(o);
        return cmd_verify_lemmas(o);
    }
    catch (const fdrelay::TrialError &e)
    {
        std::cerr << "error at " << "N=" << e.n() << ", trial " << e.trial() << ":\n";
        return report_domain_error(e.cause());
    }
    catch (...)
    {
        return report_domain_error(std::current_exception());
    }
}
