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

#include "dipne/kitten.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace dipne;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(kitten_direct, support_parity) {
    for (int k : {0, 1, 2, 5}) {
        auto kit = kitten_direct({4.0, kPi / 5, k, 80});
        for (std::size_t n = 0; n < kit.state.amplitudes().size(); ++n) {
            if ((n + static_cast<std::size_t>(k)) % 2 == 1) EXPECT_EQ(kit.state[n], Amplitude{});
        }
        EXPECT_NEAR(kit.state.norm(), 1.0, 1e-12);
    }
    auto inf = kitten_direct({kInfiniteSqueezing, kPi / 6, 3, 400});
    for (std::size_t n = 0; n < inf.state.amplitudes().size(); n += 2) EXPECT_EQ(inf.state[n], Amplitude{});
    EXPECT_FALSE(inf.probability.has_value());
}

TEST(kitten_direct, matches_two_mode_pipeline) {
    const Amplitude i{0, 1};
    for (double s : {1.0, 10.0}) {
        for (int k = 0; k <= 5; ++k) {
            KittenSpec spec{s, kPi / 5, k, 100};
            auto direct = kitten_direct(spec);
            auto brute = kitten_two_mode(spec, 12);
            ASSERT_EQ(brute.post_state.amplitudes().size(), direct.state.amplitudes().size());
            const Amplitude phase = std::pow(i, k);
            double worst = 0;
            for (std::size_t n = 0; n < direct.state.amplitudes().size(); ++n) {
                worst = std::max(worst, std::abs(brute.post_state[n] - phase * direct.state[n]));
            }
            EXPECT_LT(worst, 1e-8) << "s=" << s << " k=" << k;
            EXPECT_NEAR(brute.probability, kitten_probability(spec), 1e-8);
        }
    }
}

TEST(kitten_direct, rejects_bad_specs) {
    EXPECT_THROW(kitten_direct({kInfiniteSqueezing, kPi / 5, 0, 100}), std::domain_error);
    EXPECT_THROW(kitten_direct({1.0, 0.0, 1, 100}), std::invalid_argument);
    EXPECT_THROW(kitten_direct({1.0, kPi / 2, 1, 100}), std::invalid_argument);
    EXPECT_THROW(kitten_direct({-1.0, kPi / 5, 1, 100}), std::invalid_argument);
    // Too small a box for the limit sequence fails the convergence check.
    EXPECT_THROW(kitten_direct({kInfiniteSqueezing, kPi / 20, 9, 100}), std::domain_error);
}

TEST(kitten_probability, trivial_and_complete) {
    EXPECT_DOUBLE_EQ(kitten_probability({0.0, kPi / 5, 0, 50}), 1.0);
    EXPECT_DOUBLE_EQ(kitten_probability({0.0, kPi / 5, 3, 50}), 0.0);
    EXPECT_THROW(kitten_probability({kInfiniteSqueezing, kPi / 5, 1, 50}), std::domain_error);
    double total = 0;
    for (int k = 0; k <= 400; ++k) total += kitten_probability({5.0, kPi / 5, k, 400});
    EXPECT_NEAR(total, 1.0, 1e-8);
}

TEST(kitten_estimates, printed_values) {
    EXPECT_EQ(peak_estimate(0, kPi / 5), 0.0);
    EXPECT_EQ(displacement_estimate(0, kPi / 5), 0.0);
    EXPECT_NEAR(peak_estimate(1, kPi / 5), 2.359, 1e-3);
    EXPECT_NEAR(displacement_estimate(1, kPi / 5), 1.536, 1e-3);
    EXPECT_TRUE(std::isinf(peak_estimate(3, 0.0)));
    for (int k = 1; k < 9; ++k) EXPECT_LT(displacement_estimate(k, 0.4), displacement_estimate(k + 1, 0.4));
}

TEST(kitten_mean, grows_with_k_and_shrinking_angle) {
    const double th = kPi / 5;
    std::vector<double> xs, ys;
    for (int k = 1; k <= 9; ++k) {
        xs.push_back(k);
        ys.push_back(kitten_direct({kInfiniteSqueezing, th, k, 1000}).mean_photons);
        if (k > 1) EXPECT_GT(ys[ys.size() - 1], ys[ys.size() - 2]);
    }
    // Least-squares line through (k, <n>).
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i], sy += ys[i], sxx += xs[i] * xs[i], sxy += xs[i] * ys[i], syy += ys[i] * ys[i];
    }
    const double r = (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    EXPECT_GE(r * r, 0.99);

    double prev = 0;
    for (double t : {kPi / 5, kPi / 6, kPi / 8, kPi / 10}) {
        double m = kitten_direct({kInfiniteSqueezing, t, 5, 1500}).mean_photons;
        EXPECT_GT(m, prev);
        prev = m;
    }
}
