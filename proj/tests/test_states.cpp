// Copyright 2026 The dipne-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dipne/states.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <numbers>

using namespace dipne;

namespace {

// D(alpha) S(xi) |0> from the dense generators at a large cutoff, so the
// first levels are free of truncation artifacts.
Eigen::VectorXcd exp_oracle(Amplitude alpha, Squeeze sq, int big) {
    int d = big + 1;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
    Eigen::MatrixXcd ad = a.adjoint();
    Amplitude xi = std::polar(sq.r, sq.theta);
    Eigen::MatrixXcd gs = (std::conj(xi) * a * a - xi * ad * ad) / 2.0;
    Eigen::MatrixXcd gd = alpha * ad - std::conj(alpha) * a;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
    v(0) = 1.0;
    return gd.exp() * (gs.exp() * v);
}

}  // namespace

TEST(states_coherent, values) {
    auto z = coherent(0.0, 10);
    EXPECT_EQ(z[0], Amplitude{1.0});
    EXPECT_EQ(z.norm_squared(), 1.0);
    auto c = coherent(1.0, 40);
    EXPECT_NEAR(std::norm(c[0]), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(std::norm(c[1]), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(mean_photon_number(c, Mode{0}), 1.0, 1e-12);
    EXPECT_FALSE(c.leaks());
    Amplitude alpha{0.6, -1.1};
    auto ca = coherent(alpha, 40);
    for (int n = 0; n <= 40; ++n) {
        Amplitude want = std::exp(-std::norm(alpha) / 2) * std::pow(alpha, n) / std::sqrt(std::tgamma(n + 1.0));
        EXPECT_NEAR(std::abs(ca[n] - want), 0.0, 1e-13) << n;
    }
}

TEST(states_coherent, leakage_reported) {
    auto c = coherent(3.0, 10);
    EXPECT_TRUE(c.leaks());
    EXPECT_GT(c.truncation_loss(), 1e-3);
    EXPECT_NEAR(c.norm_squared() + c.truncation_loss(), 1.0, 1e-14);
}

TEST(states_squeezed_vacuum, values) {
    auto v = squeezed_vacuum({0.0, 0.0}, 10);
    EXPECT_EQ(v[0], Amplitude{1.0});
    EXPECT_EQ(v.norm_squared(), 1.0);
    auto sq = Squeeze::from_photons(10.0);
    EXPECT_NEAR(sq.photons(), 10.0, 1e-12);
    auto s = squeezed_vacuum(sq, 1000);
    for (std::size_t n = 1; n < 1001; n += 2) ASSERT_EQ(s[n], Amplitude{});
    EXPECT_NEAR(mean_photon_number(s, Mode{0}), 10.0, 1e-8);
    EXPECT_FALSE(s.leaks());
}

TEST(states_squeezed_vacuum, matches_exponential) {
    for (double theta : {0.0, 0.7, std::numbers::pi / 2}) {
        Squeeze sq{0.5, theta};
        auto s = squeezed_vacuum(sq, 40);
        auto o = exp_oracle(0.0, sq, 150);
        for (int n = 0; n <= 40; ++n) EXPECT_NEAR(std::abs(s[n] - o(n)), 0.0, 1e-12) << n;
    }
}

TEST(states_squeezed_coherent, reduces_and_matches) {
    auto a = squeezed_coherent(1.2, {0.0, 0.0}, 30);
    auto b = coherent(1.2, 30);
    for (int n = 0; n <= 30; ++n) EXPECT_EQ(a[n], b[n]);
    auto c = squeezed_coherent(0.0, {0.4, 0.3}, 30);
    auto d = squeezed_vacuum({0.4, 0.3}, 30);
    for (int n = 0; n <= 30; ++n) EXPECT_EQ(c[n], d[n]);

    auto s = squeezed_coherent(1.0, {0.3, 0.0}, 40);
    auto o = exp_oracle(1.0, {0.3, 0.0}, 160);
    for (int n = 0; n <= 40; ++n) EXPECT_NEAR(std::abs(s[n] - o(n)), 0.0, 1e-8) << n;

    for (Amplitude alpha : {Amplitude{2.0, 0.0}, Amplitude{-0.7, 1.3}, Amplitude{0.0, -2.0}}) {
        for (Squeeze sq : {Squeeze{0.5, 0.0}, Squeeze{0.2, 2.0}, Squeeze{0.45, -1.0}}) {
            auto t = squeezed_coherent(alpha, sq, 60);
            auto ot = exp_oracle(alpha, sq, 200);
            for (int n = 0; n <= 60; ++n) ASSERT_NEAR(std::abs(t[n] - ot(n)), 0.0, 1e-8) << n;
        }
    }
}

TEST(states_squeezed_coherent, large_cutoff_is_finite_and_normalized) {
    // Displacement and squeezing at the scale of the cat fits.
    auto s = squeezed_coherent(std::sqrt(20.0), Squeeze::from_photons(2.0), 1000);
    for (auto x : s.amplitudes()) ASSERT_TRUE(std::isfinite(x.real()) && std::isfinite(x.imag()));
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
    // <n> = |alpha|^2 + sinh^2 r for D S |0>.
    EXPECT_NEAR(mean_photon_number(s, Mode{0}), 22.0, 1e-8);
}

TEST(states_cat, parity_and_values) {
    CatSpec odd{1.3, std::numbers::pi, {0.3, 0.0}};
    auto s = cat_state(odd, 50);
    for (std::size_t n = 0; n < 51; n += 2) ASSERT_EQ(s[n], Amplitude{});
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-12);

    CatSpec even{2.0, 0.0, {}};
    auto e = cat_state(even, 60);
    double want = 2 * std::exp(-2.0) / std::sqrt(2 * (1 + std::exp(-8.0)));
    EXPECT_NEAR(e[0].real(), want, 1e-12);
    for (std::size_t n = 1; n < 61; n += 2) ASSERT_EQ(e[n], Amplitude{});

    CatSpec zero{0.0, 0.0, {0.4, 0.0}};
    auto z = cat_state(zero, 40);
    auto sv = squeezed_vacuum({0.4, 0.0}, 40);
    for (int n = 0; n <= 40; ++n) EXPECT_NEAR(std::abs(z[n] - sv[n]), 0.0, 1e-12);

    EXPECT_THROW(cat_state({0.0, std::numbers::pi, {}}, 20), std::domain_error);
}

TEST(states_cat, parity_eigenvector) {
    auto s = cat_state({Amplitude{0.8, 0.5}, std::numbers::pi, {0.2, 1.0}}, 60);
    // Parity e^{i pi n} maps psi -> -psi for an odd cat.
    for (std::size_t n = 0; n < 61; ++n) {
        Amplitude p = (n % 2 ? -1.0 : 1.0) * s[n];
        ASSERT_NEAR(std::abs(p + s[n]), 0.0, 1e-12);
    }
}

TEST(states_cat, truncation_loss_tracks_exact_norm) {
    auto s = cat_state({3.0, 0.0, {}}, 12);
    EXPECT_GT(s.truncation_loss(), 1e-3);
    auto big = cat_state({3.0, 0.0, {}}, 80);
    EXPECT_LT(big.truncation_loss(), 1e-14);
}

TEST(states_infinite_limit, coefficients) {
    auto c = infinite_squeeze_limit_coeffs(20);
    EXPECT_EQ(c.log_magnitude[0], 0.0);
    EXPECT_EQ(c.phase[0], Amplitude{1.0});
    EXPECT_NEAR(std::exp(c.log_magnitude[1] - c.log_magnitude[0]), std::sqrt(0.5), 1e-15);
    for (int m = 0; m < 20; ++m) {
        double ratio = std::exp(c.log_magnitude[m + 1] - c.log_magnitude[m]);
        EXPECT_NEAR(ratio, std::sqrt((2.0 * m + 1) / (2.0 * m + 2)), 1e-13);
        EXPECT_EQ(c.phase[m].real(), m % 2 ? -1.0 : 1.0);
    }
    auto flipped = infinite_squeeze_limit_coeffs(20, std::numbers::pi);
    for (int m = 0; m <= 20; ++m) EXPECT_NEAR(std::abs(flipped.phase[m] - 1.0), 0.0, 1e-12);
}

TEST(states_infinite_limit, raw_sequence_not_normalizable) {
    EXPECT_THROW(normalize_log_amplitudes(infinite_squeeze_limit_fock(1000)), std::domain_error);
}

TEST(states_infinite_limit, is_limit_of_finite_squeezing) {
    // C_2m(xi) / C_0(xi) = (-tanh r)^m sqrt((2m)!)/(2^m m!); tanh r -> 1.
    auto lim = infinite_squeeze_limit_coeffs(10);
    auto fin = squeezed_vacuum_log(Squeeze{12.0, 0.0}, 20);
    for (int m = 0; m <= 10; ++m) {
        EXPECT_NEAR(fin.log_magnitude[2 * m] - fin.log_magnitude[0], lim.log_magnitude[m], 1e-9);
    }
}

TEST(states_normalize, converged_sequence) {
    LogAmplitudes seq;
    seq.resize(60);
    for (int n = 0; n < 60; ++n) {
        seq.log_magnitude[n] = -0.5 - 0.5 * std::lgamma(n + 1.0);
        seq.phase[n] = 1.0;
    }
    auto s = normalize_log_amplitudes(seq);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-14);
    EXPECT_NEAR(s[1].real(), std::exp(-0.5), 1e-12);
}
