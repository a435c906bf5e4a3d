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

#include "dipne/analytics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace dipne;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(analytics_interference, closed_form) {
    EXPECT_EQ(interference_loss_theory(0.0, 0.7, kPi / 5, kPi / 10, false), 0.0);
    EXPECT_EQ(interference_loss_theory(0.7, 0.0, kPi / 5, kPi / 10, true), 0.0);
    const double a = std::sqrt(0.5);
    double v = interference_loss_theory(a, a, kPi / 5, kPi / 10, false);
    EXPECT_NEAR(v, 0.2795, 1e-4);
    EXPECT_DOUBLE_EQ(interference_loss_theory(a, a, kPi / 5, kPi / 10, true), -v);
    // Only Re[a1 a2*] enters.
    EXPECT_NEAR(interference_loss_theory(Amplitude{0, a}, a, kPi / 5, kPi / 10, false), 0.0, 1e-16);
}

TEST(analytics_c_equal, examples) {
    EXPECT_EQ(c_equal(0, 0), Amplitude(1.0));
    EXPECT_EQ(c_equal(1, 1), Amplitude{});
    EXPECT_NEAR(std::norm(c_equal(2, 0)), 0.5, 1e-15);
    EXPECT_EQ(c_equal(3, 0), Amplitude{});
}

TEST(analytics_c_equal, matches_brute_force_and_simulation) {
    for (int n = 0; n <= 8; ++n) {
        for (int m = 0; m <= 8; ++m) {
            auto c = c_equal(n, m);
            EXPECT_LT(std::abs(c - c_equal_bruteforce(n, m)), 1e-9) << n << "," << m;
            if (n % 2 == 1 && m % 2 == 1) EXPECT_EQ(c, Amplitude{}) << n << "," << m;
            if ((n + m) % 2 == 0) {
                // Full 50:50 beamsplit of |n, m> read at the equal split.
                const int h = (n + m) / 2, cut = n + m;
                auto out = beamsplit(FockState::basis(ModeLayout::uniform(2, cut), {n, m}), Mode{0}, Mode{1}, kPi / 4);
                EXPECT_LT(std::abs(out.amplitude({h, h}) - c), 1e-12) << n << "," << m;
            }
        }
    }
    EXPECT_GT(std::abs(c_equal(2, 2)), 0.1);
    EXPECT_THROW(c_equal_bruteforce(13, 12), std::invalid_argument);
}

TEST(analytics_c_equal, large_arguments) {
    for (int n = 0; n <= 200; n += 7) {
        for (int m = n % 2; m <= 200; m += 6) {
            double mag = std::abs(c_equal(n, m));
            EXPECT_LE(mag, 1.0 + 1e-12);
            EXPECT_NEAR(mag, std::abs(c_equal(m, n)), 1e-12) << n << "," << m;
        }
    }
    // Past the exact-integer range, against the full splitter simulation.
    for (auto [n, m] : {std::pair{32, 30}, {40, 22}, {31, 33}, {50, 14}, {36, 36}}) {
        const int h = (n + m) / 2;
        auto out = beamsplit(FockState::basis(ModeLayout::uniform(2, n + m), {n, m}), Mode{0}, Mode{1}, kPi / 4);
        EXPECT_LT(std::abs(out.amplitude({h, h}) - c_equal(n, m)), 1e-10) << n << "," << m;
    }
}

TEST(analytics_c_equal, distribution_sums_to_one) {
    for (auto [n, m] : {std::pair{0, 0}, {3, 1}, {4, 4}, {7, 5}, {12, 12}}) {
        auto d = c_equal_bruteforce_distribution(n, m);
        double total = 0;
        for (auto c : d) total += std::norm(c);
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(analytics_erasure, residual) {
    auto z = erasure_residual(0.0, 3.0);
    EXPECT_EQ(z.exact, 0.0);
    EXPECT_EQ(z.approximation, 0.0);
    auto e = erasure_residual(1.0, 10.0);
    EXPECT_NEAR(e.exact, std::sqrt(101.0) - 10.0, 1e-15);
    EXPECT_NEAR(e.exact, 0.0499, 1e-4);
    EXPECT_DOUBLE_EQ(e.approximation, 0.05);
    auto far = erasure_residual(1.0, 1e3);
    EXPECT_LT(std::abs(far.exact / far.approximation - 1), 1e-4);
    EXPECT_THROW(erasure_residual(1.0, 0.0), std::invalid_argument);
}

TEST(analytics_poisson, values) {
    EXPECT_DOUBLE_EQ(poisson_pn(0.0, 0), 1.0);
    EXPECT_EQ(poisson_pn(0.0, 3), 0.0);
    EXPECT_NEAR(poisson_pn(1.0, 1), std::exp(-1.0), 1e-16);
    double total = 0;
    for (int n = 0; n <= 60; ++n) total += poisson_pn(2.0, n);
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(poisson_pn(Amplitude{0, 2.0}, 4), poisson_pn(2.0, 4), 1e-16);
}

TEST(analytics_squeeze_fraction, limits) {
    auto z = squeeze_fraction_strong(1.0, 0.0, 50.0);
    EXPECT_DOUBLE_EQ(z.ratio_strong, 4.0);
    EXPECT_DOUBLE_EQ(z.fraction_strong, 0.2);
    auto p = squeeze_fraction_strong(1.0, std::asinh(std::sqrt(0.1)), 3.0);
    EXPECT_NEAR(p.fraction_strong, 0.318, 1e-3);
    EXPECT_LT(p.fraction_strong, 1.0 / 3);
    for (double r : {3.0, 4.0, 6.0}) {
        auto q = squeeze_fraction_strong(1.0, std::asinh(std::sqrt(0.1)), r);
        EXPECT_LT(std::abs(q.fraction_exact / q.fraction_strong - 1), 0.01);
    }
    EXPECT_EQ(squeeze_fraction_strong(1.0, 0.0, 0.0).fraction_exact, 0.0);
    // Initial photons only at r = 0: sinh^2 r0 / (d0^2 + sinh^2 r0).
    EXPECT_NEAR(squeeze_fraction_strong(1.0, std::asinh(std::sqrt(0.1)), 0.0).fraction_exact, 0.1 / 1.1, 1e-15);
    // Monotone toward the limit once r >= r0 + 1.
    const double r0 = 0.5;
    double prev = squeeze_fraction_strong(0.7, r0, r0 + 1).fraction_exact;
    for (double r = r0 + 1.1; r < 8; r += 0.1) {
        double cur = squeeze_fraction_strong(0.7, r0, r).fraction_exact;
        EXPECT_GE(cur, prev);
        prev = cur;
    }
    EXPECT_THROW(squeeze_fraction_strong(0.0, 0.1, 1.0), std::invalid_argument);
}

TEST(analytics_gaussian, simple_states) {
    auto v = GaussianMoments::vacuum(2);
    EXPECT_TRUE(is_physical(v));
    EXPECT_EQ(mean_photons_from_moments(v, 1), 0.0);

    auto d = gaussian_propagate(v, "displace 0 0.8 0");
    EXPECT_DOUBLE_EQ(d.mean(0), 1.6);
    EXPECT_DOUBLE_EQ(d.mean(1), 0.0);
    EXPECT_TRUE(d.cov.isApprox(v.cov));
    EXPECT_NEAR(mean_photons_from_moments(d, 0), 0.64, 1e-15);

    auto s = gaussian_propagate(v, Element{SqueezeOp{1, {0.7, 0.3}}});
    EXPECT_NEAR(mean_photons_from_moments(s, 1), std::sinh(0.7) * std::sinh(0.7), 1e-14);
    EXPECT_TRUE(is_physical(s));

    auto same = gaussian_propagate(v, "phase 0 0");
    EXPECT_TRUE(same.mean.isApprox(v.mean));
    EXPECT_TRUE(same.cov.isApprox(v.cov));

    GaussianMoments bad = v;
    bad.cov *= 0.5;
    EXPECT_FALSE(is_physical(bad));
    EXPECT_THROW(mean_photons_from_moments(bad, 0), std::domain_error);
    EXPECT_THROW(gaussian_propagate(v, "beamsplit 0 0 0.3"), std::invalid_argument);
    EXPECT_THROW(gaussian_propagate(v, "displace 4 1 0"), std::invalid_argument);
}

TEST(analytics_gaussian, symplectic_matrices_preserve_the_form) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(4, 4);
    for (int j = 0; j < 2; ++j) omega(2 * j, 2 * j + 1) = 2, omega(2 * j + 1, 2 * j) = -2;
    for (const auto* text : {"squeeze 1 0.4 1.2", "phase 0 0.9", "beamsplit 0 1 0.6", "beamsplit 1 0 1.1"}) {
        auto s = symplectic(parse_element(text), 2);
        EXPECT_LT((s * omega * s.transpose() - omega).norm(), 1e-13) << text;
    }
}

TEST(analytics_gaussian, agrees_with_fock_simulation) {
    const char* circuit[] = {"squeeze 0 0.4 0.3", "squeeze 1 0.2 2.0", "displace 0 0.5 -0.3",
                             "displace 1 -0.2 0.9", "beamsplit 0 1 0.7", "phase 1 1.3"};
    auto state = FockState::vacuum(ModeLayout::uniform(2, 40));
    auto g = GaussianMoments::vacuum(2);
    for (const auto* t : circuit) {
        state = apply_element(state, parse_element(t));
        g = gaussian_propagate(g, t);
    }
    for (std::size_t m = 0; m < 2; ++m) {
        EXPECT_NEAR(mean_photon_number(state, Mode{m}), mean_photons_from_moments(g, m), 1e-6);
        auto q = mean_quadrature(state, Mode{m});
        EXPECT_NEAR(q.x, g.mean(static_cast<Eigen::Index>(2 * m)), 1e-8);
        EXPECT_NEAR(q.p, g.mean(static_cast<Eigen::Index>(2 * m + 1)), 1e-8);
    }
}

TEST(analytics_match, diagonal_and_direction) {
    auto kit = kitten_direct({kInfiniteSqueezing, kPi / 5, 3, 1000});
    auto fit = fit_squeezed_cat(kit);
    auto same = squeeze_to_match(kit, fit, fit.alpha);
    EXPECT_NEAR(same.r_required, 0.0, 1e-6);
    EXPECT_NEAR(same.source_displacement, fit.alpha, 1e-12);
    auto up = squeeze_to_match(kit, fit, fit.alpha * 1.3);
    auto down = squeeze_to_match(kit, fit, fit.alpha * 0.8);
    EXPECT_GT(up.r_required, 0.0);
    EXPECT_LT(down.r_required, 0.0);
    for (const auto& m : {same, up, down}) {
        EXPECT_GE(m.excess_fraction, 0.0);
        EXPECT_LT(m.excess_fraction, 1.0);
    }
    EXPECT_THROW(squeeze_to_match(kit, fit, -1.0), std::invalid_argument);
}
