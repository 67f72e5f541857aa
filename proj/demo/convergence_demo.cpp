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

// Prints how the mean finite-N rate of pair 0, subcarrier 0 approaches the
// closed-form limit as the relay array grows, with and without hardware
// impairments.

#include <cstdio>

#include "fdrelay.hpp"

static void print_sweep(const char *title, const fdrelay::SystemConfig &c)
{
    const auto r = fdrelay::run_sweep(c, {16, 64, 256}, 20, 2024);
    std::printf("%s (limit %.4f bits/s/Hz)\n", title, r.asymptotic_rate(0, 0));
    std::printf("  %6s  %10s  %10s  %10s\n", "N", "mean_rate", "std_rate", "gap");
    for (std::size_t s = 0; s < r.n_values.size(); ++s)
        std::printf("  %6zu  %10.4f  %10.4f  %10.4f\n", r.n_values[s], r.mean_rate(0, 0, s), r.std_rate(0, 0, s),
                    r.gap(0, 0, s));
}

int main()
{
    fdrelay::UniformParameters p;
    p.num_pairs = 2;
    p.num_subcarriers = 4;
    p.kappa_s_tilde = 0.02;
    p.beta_d_tilde = 0.02;
    p.kappa_r_tilde = 0.05;
    p.beta_r_tilde = 0.05;
    p.psi_hat_rr = 1.0;
    p.sigma2_e_sr = 0.1;
    p.sigma2_e_rd = 0.1;
    p.sigma2_e_rr = 0.1;
    print_sweep("impaired hardware", fdrelay::make_uniform_config(p));

    p.kappa_s_tilde = p.beta_d_tilde = p.kappa_r_tilde = p.beta_r_tilde = 0.0;
    p.sigma2_e_sr = p.sigma2_e_rd = p.sigma2_e_rr = 0.0;
    print_sweep("ideal hardware", fdrelay::make_uniform_config(p));
    return 0;
}
