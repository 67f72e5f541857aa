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
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fdrelay/config.hpp"
#include "fdrelay/json_util.hpp"
#include "fdrelay/parallel.hpp"
#include "fdrelay/rng.hpp"
#include "fdrelay/stats.hpp"

namespace fdrelay {

// ---- Closed-form limits -------------------------------------------------

enum class BindingSide : unsigned char
{
    SourceDistortion,
    DestinationDistortion,
};

inline const char *binding_side_name(BindingSide b)
{
    return b == BindingSide::SourceDistortion ? "source-distortion" : "destination-distortion";
}

// N -> infinity limits per (i, k). Pairs with no power at all on one hop
// carry nothing: sinr_limit 0, rate_limit 0.
struct AsymptoticLimits
{
    Tensor2<double> sinr_limit;
    Tensor2<double> rate_limit;
    Tensor2<BindingSide> binding_side;
    Tensor2<unsigned char> unbounded; // both distortion coefficients are 0

    bool operator==(const AsymptoticLimits &) const = default;
};

// p^{i,k} = 0 on a subcarrier while pair i transmits on another one.
class ZeroPowerRatio : public std::runtime_error
{
public:
    ZeroPowerRatio(std::size_t pair, std::size_t subcarrier, const std::string &which)
        : std::runtime_error("zero " + which + " power at pair " + std::to_string(pair) + ", subcarrier " +
                             std::to_string(subcarrier) + " while the pair is active on other subcarriers"),
          pair_(pair), subcarrier_(subcarrier) {}

    std::size_t pair() const noexcept { return pair_; }
    std::size_t subcarrier() const noexcept { return subcarrier_; }

private:
    std::size_t pair_, subcarrier_;
};

class NonScalarRelayDistortion : public std::runtime_error
{
public:
    NonScalarRelayDistortion()
        : std::runtime_error("asymptotic limits need scalar relay distortion coefficients, "
                             "got per-chain values") {}
};

namespace detail {

// K * w[k] / (c * sum_m w[m]): the ratio K / (c * sum_m w[m] / w[k]) written
// without dividing by w[k]. Returns +inf when c = 0.
inline double distortion_argument(double K, double coeff, double weight_k, double weight_sum)
{
    const double den = coeff * weight_sum;
    if (den == 0.0)
        return std::numeric_limits<double>::infinity();
    return K * weight_k / den;
}

inline void check_power_pattern(const Tensor2<double> &p, std::size_t i, const char *which, bool &active)
{
    const std::size_t K = p.extent(1);
    double total = 0.0;
    for (std::size_t m = 0; m < K; ++m)
        total += p(i, m);
    active = total > 0.0;
    if (!active)
        return;
    for (std::size_t m = 0; m < K; ++m)
        if (p(i, m) == 0.0)
            throw ZeroPowerRatio(i, m, which);
}

inline AsymptoticLimits asymptotic_limits(const SystemConfig &c, const Tensor2<double> &psi_rd)
{
    if (!c.kappa_r_tilde.is_scalar() || !c.beta_r_tilde.is_scalar())
        throw NonScalarRelayDistortion();
    const std::size_t L = c.num_pairs, K = c.num_subcarriers;
    const double Kd = static_cast<double>(K);

    AsymptoticLimits a;
    a.sinr_limit = Tensor2<double>({L, K});
    a.rate_limit = Tensor2<double>({L, K});
    a.binding_side = Tensor2<BindingSide>({L, K});
    a.unbounded = Tensor2<unsigned char>({L, K});

    for (std::size_t i = 0; i < L; ++i)
    {
        bool source_active = false, relay_active = false;
        check_power_pattern(c.p_s, i, "source", source_active);
        check_power_pattern(c.p_r, i, "relay", relay_active);

        double ps_sum = 0.0, weighted_sum = 0.0;
        for (std::size_t m = 0; m < K; ++m)
        {
            ps_sum += c.p_s(i, m);
            weighted_sum += c.p_r(i, m) * psi_rd(i, m);
        }

        for (std::size_t k = 0; k < K; ++k)
        {
            if (!source_active || !relay_active)
            {
                a.sinr_limit(i, k) = 0.0;
                a.rate_limit(i, k) = 0.0;
                a.binding_side(i, k) = source_active ? BindingSide::DestinationDistortion
                                                     : BindingSide::SourceDistortion;
                continue;
            }
            const double src = distortion_argument(Kd, c.kappa_s_tilde(i), c.p_s(i, k), ps_sum);
            // Zero weight on subcarrier k (psi_rd = 0) means no useful signal.
            const double dst = c.p_r(i, k) * psi_rd(i, k) == 0.0
                                   ? 0.0
                                   : distortion_argument(Kd, c.beta_d_tilde(i), c.p_r(i, k) * psi_rd(i, k),
                                                         weighted_sum);
            const bool source_binds = src <= dst;
            a.sinr_limit(i, k) = source_binds ? src : dst;
            a.binding_side(i, k) = source_binds ? BindingSide::SourceDistortion : BindingSide::DestinationDistortion;
            a.unbounded(i, k) = std::isinf(a.sinr_limit(i, k)) ? 1 : 0;
            a.rate_limit(i, k) = c.gamma0 * std::log2(1.0 + a.sinr_limit(i, k));
        }
    }
    return a;
}

} // namespace detail

// Limits with estimated relay-destination statistics psi_hat_rd.
inline AsymptoticLimits asymptotic_rate(const SystemConfig &c)
{
    return detail::asymptotic_limits(c, c.psi_hat_rd);
}

// Same formula with the true statistics psi_rd = psi_hat_rd + sigma2_e_rd.
inline AsymptoticLimits asymptotic_rate_perfect_csi(const SystemConfig &c)
{
    return detail::asymptotic_limits(c, derived_constants(c).psi_rd);
}

inline ordered_json to_json(const AsymptoticLimits &a)
{
    ordered_json j;
    j["sinr_limit"] = tensor_to_json(a.sinr_limit);
    j["rate_limit"] = tensor_to_json(a.rate_limit);
    ordered_json sides = ordered_json::array();
    for (std::size_t i = 0; i < a.binding_side.extent(0); ++i)
    {
        ordered_json row = ordered_json::array();
        for (std::size_t k = 0; k < a.binding_side.extent(1); ++k)
            row.push_back(binding_side_name(a.binding_side(i, k)));
        sides.push_back(row);
    }
    j["binding_side"] = sides;
    j["unbounded"] = tensor_to_json(a.unbounded);
    return j;
}

// ---- Concentration checks -----------------------------------------------

struct ConcentrationStatistic
{
    std::string name;
    double target = 0.0;
    double mean = 0.0;      // empirical mean over trials (magnitude for complex statistics)
    double stddev = 0.0;    // spread over trials
    double deviation = 0.0; // |mean - target|, or the pass fraction for per-trial criteria
    double tolerance = 0.0;
    bool pass = false;
};

struct ConcentrationReport
{
    std::string check;
    std::size_t n = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<ConcentrationStatistic> statistics;

    bool pass() const
    {
        for (const auto &s : statistics)
            if (!s.pass)
                return false;
        return true;
    }
};

inline ordered_json to_json(const ConcentrationReport &r)
{
    ordered_json j;
    j["check"] = r.check;
    j["n"] = r.n;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    ordered_json stats = ordered_json::array();
    for (const auto &s : r.statistics)
    {
        ordered_json o;
        o["name"] = s.name;
        o["target"] = json_number(s.target);
        o["mean"] = json_number(s.mean);
        o["stddev"] = json_number(s.stddev);
        o["deviation"] = json_number(s.deviation);
        o["tolerance"] = json_number(s.tolerance);
        o["pass"] = s.pass;
        stats.push_back(o);
    }
    j["statistics"] = stats;
    j["pass"] = r.pass();
    return j;
}

// Relative width of the fourth-moment tolerance band.
inline constexpr double kFourthMomentTolerance = 0.05;
// Quadratic-form deviations must stay within kQuadraticFormScale * ||A|| / sqrt(N)
// in at least kQuadraticFormCoverage of the trials.
inline constexpr double kQuadraticFormScale = 5.0;
inline constexpr double kQuadraticFormCoverage = 0.95;

// Law-of-large-numbers behaviour of Gaussian vectors p, q with entries
// CN(0, sigma_p^2), CN(0, sigma_q^2): p^H p / N, p^H q / N and sum |p_i|^4 / N.
inline ConcentrationReport lemma1_check(std::size_t N, double sigma_p, double sigma_q, std::size_t trials,
                                        std::uint64_t seed, std::size_t parallelism = 1)
{
    if (N == 0 || trials == 0)
        throw std::invalid_argument("lemma1_check: N and trials must be positive");
    const double vp = sigma_p * sigma_p, vq = sigma_q * sigma_q;
    const auto Ni = static_cast<Eigen::Index>(N);
    const double Nd = static_cast<double>(N);

    std::vector<double> energy(trials), cross_re(trials), cross_im(trials), fourth(trials);
    parallel_for(trials, resolve_parallelism(parallelism), [&](std::size_t t) {
        Eigen::VectorXcd p(Ni), q(Ni);
        ComplexGaussianStream sp(stream_seed(seed, t, StreamTag::LemmaP));
        ComplexGaussianStream sq(stream_seed(seed, t, StreamTag::LemmaQ));
        sp.fill(p, vp);
        sq.fill(q, vq);
        energy[t] = p.squaredNorm() / Nd;
        const std::complex<double> c = p.dot(q) / Nd;
        cross_re[t] = c.real();
        cross_im[t] = c.imag();
        fourth[t] = p.cwiseAbs2().cwiseAbs2().sum() / Nd;
    });

    const double scale = std::sqrt(Nd * static_cast<double>(trials));
    ConcentrationReport r{"lemma1", N, trials, seed, {}};

    const auto e = summarize(energy);
    r.statistics.push_back({"energy", vp, e.mean, e.stddev, std::abs(e.mean - vp), 3.0 * vp / scale, false});

    const auto cr = summarize(cross_re), ci = summarize(cross_im);
    const double cross_mag = std::hypot(cr.mean, ci.mean);
    const double cross_spread = std::hypot(cr.stddev, ci.stddev);
    r.statistics.push_back(
        {"cross", 0.0, cross_mag, cross_spread, cross_mag, 3.0 * sigma_p * sigma_q / scale, false});

    const auto f = summarize(fourth);
    const double target4 = 2.0 * vp * vp;
    r.statistics.push_back({"fourth_moment", target4, f.mean, f.stddev, std::abs(f.mean - target4),
                            kFourthMomentTolerance * target4, false});

    for (auto &s : r.statistics)
        s.pass = s.deviation <= s.tolerance;
    return r;
}

enum class MatrixSpec
{
    Identity,           // A = I
    DiagonalRamp,       // A = diag(1, 2, ..., N) / N
    TracelessHermitian, // A = U diag(+1, -1, +1, ...) U^H, U a fixed random unitary
};

inline const char *matrix_spec_name(MatrixSpec m)
{
    switch (m)
    {
    case MatrixSpec::Identity: return "identity";
    case MatrixSpec::DiagonalRamp: return "diagonal-ramp";
    case MatrixSpec::TracelessHermitian: return "traceless-hermitian";
    }
    return "?";
}

namespace detail {

// Applies a deterministic N x N test matrix to vectors without forming it.
// The unitary of the traceless case is a product of Householder reflectors
// I - 2 w w^H / ||w||^2 drawn from the LemmaMatrix stream of `seed`.
class TestMatrix
{
public:
    static constexpr std::size_t kReflectors = 3;

    TestMatrix(MatrixSpec spec, std::size_t N, std::uint64_t seed) : spec_(spec), n_(N)
    {
        if (spec_ == MatrixSpec::TracelessHermitian)
            for (std::size_t r = 0; r < kReflectors; ++r)
            {
                Eigen::VectorXcd w(static_cast<Eigen::Index>(N));
                ComplexGaussianStream s(stream_seed(seed, 0, StreamTag::LemmaMatrix, r));
                s.fill(w, 1.0);
                w.normalize();
                reflectors_.push_back(std::move(w));
            }
    }

    double trace() const
    {
        const double N = static_cast<double>(n_);
        switch (spec_)
        {
        case MatrixSpec::Identity: return N;
        case MatrixSpec::DiagonalRamp: return (N + 1.0) / 2.0;
        case MatrixSpec::TracelessHermitian: return n_ % 2 ? 1.0 : 0.0;
        }
        return 0.0;
    }

    double spectral_norm() const { return 1.0; }

    // x^H A y
    std::complex<double> form(const Eigen::VectorXcd &x, const Eigen::VectorXcd &y) const
    {
        switch (spec_)
        {
        case MatrixSpec::Identity: return x.dot(y);
        case MatrixSpec::DiagonalRamp:
        {
            std::complex<double> acc{};
            for (Eigen::Index l = 0; l < x.size(); ++l)
                acc += std::conj(x[l]) * y[l] * (static_cast<double>(l + 1) / static_cast<double>(n_));
            return acc;
        }
        case MatrixSpec::TracelessHermitian:
        {
            // x^H U D U^H y = (U^H x)^H D (U^H y); U^H = H_r ... H_1 for U = H_1 ... H_r.
            const Eigen::VectorXcd a = to_eigenbasis(x), b = to_eigenbasis(y);
            std::complex<double> acc{};
            for (Eigen::Index l = 0; l < a.size(); ++l)
                acc += (l % 2 ? -1.0 : 1.0) * std::conj(a[l]) * b[l];
            return acc;
        }
        }
        return {};
    }

private:
    Eigen::VectorXcd to_eigenbasis(Eigen::VectorXcd x) const
    {
        for (const auto &w : reflectors_)
            x -= 2.0 * w * w.dot(x);
        return x;
    }

    MatrixSpec spec_;
    std::size_t n_;
    std::vector<Eigen::VectorXcd> reflectors_;
};

} // namespace detail

// Quadratic-form concentration for p, q with i.i.d. unit-variance entries
// scaled by 1/sqrt(N): p^H A p -> Tr(A)/N and p^H A q -> 0.
inline ConcentrationReport lemma2_check(std::size_t N, MatrixSpec spec, std::size_t trials, std::uint64_t seed,
                                        std::size_t parallelism = 1)
{
    if (N == 0 || trials == 0)
        throw std::invalid_argument("lemma2_check: N and trials must be positive");
    const detail::TestMatrix A(spec, N, seed);
    const auto Ni = static_cast<Eigen::Index>(N);
    const double Nd = static_cast<double>(N);
    const double target = A.trace() / Nd;
    const double bound = kQuadraticFormScale * A.spectral_norm() / std::sqrt(Nd);

    std::vector<double> quad_dev(trials), cross_mag(trials);
    parallel_for(trials, resolve_parallelism(parallelism), [&](std::size_t t) {
        Eigen::VectorXcd p(Ni), q(Ni);
        ComplexGaussianStream sp(stream_seed(seed, t, StreamTag::LemmaP));
        ComplexGaussianStream sq(stream_seed(seed, t, StreamTag::LemmaQ));
        sp.fill(p, 1.0 / Nd);
        sq.fill(q, 1.0 / Nd);
        quad_dev[t] = std::abs(A.form(p, p).real() - target);
        cross_mag[t] = std::abs(A.form(p, q));
    });

    auto coverage = [&](const std::vector<double> &dev) {
        std::size_t inside = 0;
        for (double d : dev)
            inside += d <= bound ? 1 : 0;
        return static_cast<double>(inside) / static_cast<double>(dev.size());
    };

    ConcentrationReport r{std::string("lemma2/") + matrix_spec_name(spec), N, trials, seed, {}};
    const auto qd = summarize(quad_dev);
    const auto cm = summarize(cross_mag);
    const double q_cov = coverage(quad_dev), c_cov = coverage(cross_mag);
    r.statistics.push_back({"quadratic_form_coverage", kQuadraticFormCoverage, qd.mean, qd.stddev, q_cov, bound,
                            q_cov >= kQuadraticFormCoverage});
    r.statistics.push_back({"bilinear_form_coverage", kQuadraticFormCoverage, cm.mean, cm.stddev, c_cov, bound,
                            c_cov >= kQuadraticFormCoverage});
    return r;
}

} // namespace fdrelay
