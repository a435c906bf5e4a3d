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

#include "dipne/circuits.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace dipne;

namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const FockState& a, const FockState& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

FockState coherent_pair(Amplitude a, Amplitude b, int cutoff) {
    return tensor(coherent(a, cutoff), coherent(b, cutoff));
}

FockState random_low_state(const ModeLayout& l, int max_occ, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    std::vector<Amplitude> a(l.dimension());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto occ = l.occupation(i);
        bool ok = true;
        for (int o : occ) ok = ok && o <= max_occ;
        if (ok) a[i] = {d(rng), d(rng)};
    }
    return FockState(l, a).normalized();
}

// Mean of a on one mode.
Amplitude mean_a(const FockState& s, Mode m) { return inner(s, apply_annihilation(s, m)); }

}  // namespace

TEST(circuits_phase, values) {
    auto c = coherent(1.0, 40);
    EXPECT_EQ(max_diff(phase_shift(c, Mode{0}, 0.0), c), 0.0);
    EXPECT_LT(max_diff(phase_shift(c, Mode{0}, kPi), coherent(-1.0, 40)), 1e-15);
    EXPECT_LT(max_diff(phase_shift(c, Mode{0}, kPi / 2), coherent(Amplitude{0, 1}, 40)), 1e-10);
}

TEST(circuits_beamsplit, coherent_map) {
    const int cut = 40;
    Amplitude am{0.4, 0.7}, al{1.1, -0.2};
    for (double th : {kPi / 4, 0.3, 1.2}) {
        auto out = beamsplit(coherent_pair(am, al, cut), Mode{0}, Mode{1}, th);
        double c = std::cos(th), s = std::sin(th);
        Amplitude i{0, 1};
        auto want = coherent_pair(c * am + i * s * al, c * al + i * s * am, cut);
        EXPECT_LT(max_diff(out, want), 1e-12) << th;
    }
}

TEST(circuits_beamsplit, identity_and_inverse) {
    auto psi = random_low_state(ModeLayout({8, 8, 8}), 4, 7);
    EXPECT_EQ(max_diff(beamsplit(psi, Mode{0}, Mode{2}, 0.0), psi), 0.0);
    for (auto [a, b] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 0}, {0, 2}, {2, 1}}) {
        auto back = beamsplit(beamsplit(psi, Mode{a}, Mode{b}, 0.77), Mode{a}, Mode{b}, -0.77);
        EXPECT_LT(max_diff(back, psi), 1e-10);
    }
    EXPECT_THROW(beamsplit(psi, Mode{1}, Mode{1}, 0.2), std::invalid_argument);
}

TEST(circuits_beamsplit, hong_ou_mandel) {
    ModeLayout l({2, 2});
    auto out = beamsplit(FockState::basis(l, {1, 1}), Mode{0}, Mode{1}, kPi / 4);
    EXPECT_NEAR(std::abs(out.amplitude({1, 1})), 0.0, 1e-15);
    EXPECT_NEAR(std::norm(out.amplitude({2, 0})), 0.5, 1e-15);
    EXPECT_NEAR(std::norm(out.amplitude({0, 2})), 0.5, 1e-15);
}

TEST(circuits_beamsplit, conserves_photons_and_norm) {
    auto psi = random_low_state(ModeLayout({10, 10}), 5, 21);
    auto out = beamsplit(psi, Mode{0}, Mode{1}, 0.9);
    EXPECT_NEAR(total_photon_number(out), total_photon_number(psi), 1e-10);
    EXPECT_NEAR(out.norm_squared(), 1.0, 1e-10);
    EXPECT_LT(out.truncation_loss(), 1e-30);
}

TEST(circuits_beamsplit, wide_inputs_stay_accurate) {
    // Both inputs occupied with up to 80 photons in total.
    auto psi = random_low_state(ModeLayout({80, 80}), 40, 5);
    auto back = beamsplit(beamsplit(psi, Mode{0}, Mode{1}, 0.61), Mode{0}, Mode{1}, -0.61);
    EXPECT_LT(max_diff(back, psi), 1e-12);

    // Generalised bunching: |n,n> at 50:50 has no odd outputs.
    auto out = beamsplit(FockState::basis(ModeLayout({64, 64}), {32, 32}), Mode{0}, Mode{1}, kPi / 4);
    double odd = 0;
    for (int j = 1; j <= 63; j += 2) odd = std::max(odd, std::abs(out.amplitude({j, 64 - j})));
    EXPECT_LT(odd, 1e-13);
    EXPECT_NEAR(out.norm_squared(), 1.0, 1e-13);

    // Edge rows are binomial: |p,0> -> sum_j sqrt(C(p,j)) c^j (i s)^(p-j) |j,p-j>.
    const int p = 40;
    const double th = 0.6, c = std::cos(th), s = std::sin(th);
    auto edge = beamsplit(FockState::basis(ModeLayout({p, p}), {p, 0}), Mode{0}, Mode{1}, th);
    for (int j = 0; j <= p; ++j) {
        double log_mag = 0.5 * (std::lgamma(p + 1.0) - std::lgamma(j + 1.0) - std::lgamma(p - j + 1.0)) +
                         j * std::log(c) + (p - j) * std::log(s);
        Amplitude want = std::exp(log_mag) * std::pow(Amplitude{0, 1}, p - j);
        EXPECT_LT(std::abs(edge.amplitude({j, p - j}) - want), 1e-13) << j;
    }
}

TEST(circuits_beamsplit, drops_mass_above_cutoff) {
    // |2,0> at 50:50 puts mass on |2,0> and |0,2>; a cutoff of 1 on mode 1
    // loses the |0,2> component.
    ModeLayout l({2, 1});
    auto out = beamsplit(FockState::basis(l, {2, 0}), Mode{0}, Mode{1}, kPi / 4);
    EXPECT_NEAR(out.truncation_loss(), 0.25, 1e-14);
    EXPECT_NEAR(out.norm_squared(), 0.75, 1e-14);
}

TEST(circuits_displace, matches_coherent_and_inverts) {
    auto vac = FockState::vacuum(ModeLayout({40}));
    for (Amplitude a : {Amplitude{1, 0}, Amplitude{-1.5, 0.8}, Amplitude{0, 2}}) {
        EXPECT_LT(max_diff(displace(vac, Mode{0}, a), coherent(a, 40)), 1e-8);
    }
    auto psi = coherent(0.5, 40);
    auto back = displace(displace(psi, Mode{0}, Amplitude{1.2, 0.3}), Mode{0}, Amplitude{-1.2, -0.3});
    EXPECT_LT(max_diff(back, psi), 1e-8);
    EXPECT_EQ(max_diff(displace(psi, Mode{0}, 0.0), psi), 0.0);
}

TEST(circuits_squeeze, matches_constructor_and_inverts) {
    auto vac = FockState::vacuum(ModeLayout({40}));
    EXPECT_LT(max_diff(squeeze_op(vac, Mode{0}, {0.3, 0.0}), squeezed_vacuum({0.3, 0.0}, 40)), 1e-8);
    auto vac60 = FockState::vacuum(ModeLayout({60}));
    EXPECT_LT(max_diff(squeeze_op(vac60, Mode{0}, {0.5, 1.1}), squeezed_vacuum({0.5, 1.1}, 60)), 1e-8);
    auto psi = coherent(0.7, 40);
    auto back = squeeze_op(squeeze_op(psi, Mode{0}, {0.4, 0.6}), Mode{0}, {0.4, 0.6 + kPi});
    EXPECT_LT(max_diff(back, psi), 1e-8);
    EXPECT_EQ(max_diff(squeeze_op(psi, Mode{0}, {0.0, 0.0}), psi), 0.0);
}

TEST(circuits_squeeze, dense_and_taylor_agree) {
    auto psi = tensor(squeezed_coherent(0.8, {0.2, 0.4}, 60), coherent(Amplitude{0.3, 0.5}, 20));
    for (std::size_t m : {0, 1}) {
        auto d = squeeze_op(psi, Mode{m}, {0.45, 0.9}, ExpMethod::Dense);
        auto t = squeeze_op(psi, Mode{m}, {0.45, 0.9}, ExpMethod::Taylor);
        EXPECT_LT(max_diff(d, t), 1e-12);
        auto dd = displace(psi, Mode{m}, Amplitude{-1.1, 0.6}, ExpMethod::Dense);
        auto tt = displace(psi, Mode{m}, Amplitude{-1.1, 0.6}, ExpMethod::Taylor);
        EXPECT_LT(max_diff(dd, tt), 1e-12);
    }
}

TEST(circuits_squeeze, large_cutoff_path) {
    auto vac = FockState::vacuum(ModeLayout({400}));
    auto s = squeeze_op(vac, Mode{0}, Squeeze::from_photons(2.0, 0.3));
    EXPECT_LT(max_diff(s, squeezed_vacuum(Squeeze::from_photons(2.0, 0.3), 400)), 1e-10);
}

TEST(circuits_translation, phase_to_dide) {
    const int cut = 40;
    double a = 0.6, L = 1.4;
    auto out = phase_to_dide(coherent_pair(Amplitude{0, a}, L, cut), Mode{0}, Mode{1});
    EXPECT_LT(max_diff(out, coherent_pair((L + a) / std::sqrt(2.0), (L - a) / std::sqrt(2.0), cut)), 1e-12);
    auto mirror = phase_to_dide(coherent_pair(Amplitude{0, -a}, L, cut), Mode{0}, Mode{1});
    EXPECT_LT(max_diff(mirror, coherent_pair((L - a) / std::sqrt(2.0), (L + a) / std::sqrt(2.0), cut)), 1e-12);
    auto equal = phase_to_dide(coherent_pair(Amplitude{0, L}, L, cut), Mode{0}, Mode{1});
    auto p1 = marginal_number_distribution(equal, Mode{1});
    EXPECT_NEAR(p1[0], 1.0, 1e-12);
}

TEST(circuits_translation, round_trip_and_dide_to_phase) {
    auto psi = random_low_state(ModeLayout({8, 8}), 4, 99);
    auto back = dide_to_phase(phase_to_dide(psi, Mode{0}, Mode{1}), Mode{0}, Mode{1});
    EXPECT_LT(max_diff(back, psi), 1e-10);

    const int cut = 40;
    double a = 0.9;
    auto same = dide_to_phase(coherent_pair(a, a, cut), Mode{0}, Mode{1});
    EXPECT_NEAR(std::abs(mean_a(same, Mode{1})), std::sqrt(2.0) * a, 1e-10);
    EXPECT_NEAR(std::abs(mean_a(same, Mode{0})), 0.0, 1e-10);
    auto diff = dide_to_phase(coherent_pair(a, -a, cut), Mode{0}, Mode{1});
    EXPECT_NEAR(std::abs(mean_a(diff, Mode{0})), std::sqrt(2.0) * a, 1e-10);
    EXPECT_NEAR(std::abs(mean_a(diff, Mode{1})), 0.0, 1e-10);
}

TEST(circuits_gadget, basics) {
    GadgetSpec spec{kPi / 5, kPi / 10, false, {2, 3}};
    auto sys = coherent_pair(0.6, Amplitude{0.2, 0.4}, 20);
    GadgetSpec none{0.0, 0.0, false, {2, 3}};
    auto id = interference_gadget(sys, none, 20);
    auto want = tensor(sys, FockState::vacuum(ModeLayout({20, 20})));
    EXPECT_LT(max_diff(id, want), 1e-15);

    auto vac = FockState::vacuum(ModeLayout({6, 6}));
    auto v = interference_gadget(vac, spec, 6);
    EXPECT_NEAR(std::abs(v.amplitude({0, 0, 0, 0}) - 1.0), 0.0, 1e-15);

    auto bad = FockState::basis(ModeLayout({2, 2, 2, 2}), {0, 0, 1, 0});
    EXPECT_THROW(interference_gadget(bad, spec), std::invalid_argument);
    GadgetSpec wide{kPi / 2, 0.1, false, {2, 3}};
    EXPECT_THROW(interference_gadget(vac, wide, 6), std::invalid_argument);
}

TEST(circuits_gadget, coherent_inputs_follow_coherent_map) {
    // Coherent inputs stay coherent; track the four amplitudes classically.
    Amplitude a0{0.5, 0.1}, a1{-0.3, 0.4};
    Amplitude i{0, 1};
    for (bool pi : {false, true}) {
        GadgetSpec spec{kPi / 5, kPi / 10, pi, {2, 3}};
        auto out = interference_gadget(coherent_pair(a0, a1, 16), spec, 16);
        auto bs = [&](Amplitude& x, Amplitude& y, double t) {
            Amplitude nx = std::cos(t) * x + i * std::sin(t) * y;
            Amplitude ny = std::cos(t) * y + i * std::sin(t) * x;
            x = nx;
            y = ny;
        };
        Amplitude m0 = a0, m1 = a1, e0 = 0.0, e1 = 0.0;
        bs(m0, e0, spec.theta_split);
        bs(m1, e1, spec.theta_split);
        if (pi) {
            e0 = -e0;
            e1 = -e1;
        }
        bs(m1, e0, spec.theta_interfere);
        bs(m0, e1, spec.theta_interfere);
        auto want = tensor(coherent_pair(m0, m1, 16), coherent_pair(e0, e1, 16));
        EXPECT_LT(max_diff(out, want), 1e-12);
    }
}

TEST(circuits_inject, swap_and_identity) {
    const int c14 = 25;
    auto sys = coherent_pair(0.5, 0.2, c14);
    auto prep = coherent_pair(Amplitude{0, 0.7}, -0.4, c14);
    auto same = inject(sys, prep, 0.0);
    EXPECT_LT(max_diff(same, tensor(sys, prep)), 1e-15);
    auto swapped = inject(sys, prep, kPi / 2);
    Amplitude i{0, 1};
    auto want = tensor(coherent_pair(i * Amplitude{0, 0.7}, i * -0.4, c14), coherent_pair(i * 0.5, i * 0.2, c14));
    EXPECT_LT(max_diff(swapped, want), 1e-12);
    auto part = inject(sys, prep, 0.4);
    double c = std::cos(0.4), s = std::sin(0.4);
    auto want_part = tensor(coherent_pair(c * 0.5 + i * s * Amplitude{0, 0.7}, c * 0.2 + i * s * -0.4, c14),
                            coherent_pair(c * Amplitude{0, 0.7} + i * s * 0.5, c * -0.4 + i * s * 0.2, c14));
    EXPECT_LT(max_diff(part, want_part), 1e-12);
    EXPECT_THROW(inject(sys, coherent(0.1, 5), 0.3), std::invalid_argument);
}

TEST(circuits_norm, elements_preserve_norm) {
    auto psi = random_low_state(ModeLayout({30, 30}), 4, 5);
    ASSERT_LT(psi.guard_band_mass(), 1e-10);
    std::vector<Element> circuit{DisplaceOp{0, {0.3, -0.2}}, SqueezeOp{1, {0.2, 0.5}}, PhaseOp{0, 0.4},
                                 BeamsplitOp{0, 1, 0.6}};
    for (const auto& e : circuit) {
        EXPECT_NEAR(apply_element(psi, e).norm_squared(), 1.0, 1e-10) << format_element(e);
    }
}

TEST(circuits_elements, parse_round_trip) {
    for (std::string text : {"displace 0 0.5 -0.25", "squeeze 1 0.3 1.5", "phase 2 3.14", "beamsplit 0 1 0.785"}) {
        auto e = parse_element(text);
        EXPECT_EQ(format_element(parse_element(format_element(e))), format_element(e));
    }
    EXPECT_THROW(parse_element("rotate 0 1"), std::invalid_argument);
    EXPECT_THROW(parse_element("displace 0 x 1"), std::invalid_argument);
    EXPECT_THROW(parse_element("phase 0 1 2"), std::invalid_argument);
    EXPECT_THROW(parse_element("squeeze 0 -1 0"), std::invalid_argument);
}
