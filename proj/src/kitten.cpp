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

#include <numbers>
#include <string>

#include "dipne/combinatorics.hpp"

namespace dipne {

namespace {

using comb::log_factorial;

void check_angle(double theta) {
    if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
        throw std::invalid_argument("theta_sub must lie in (0, pi/2)");
    }
}

}  // namespace

void KittenSpec::validate() const {
    check_angle(theta_sub);
    if (k < 0) throw std::invalid_argument("photon count k must be >= 0");
    if (cutoff < 0) throw std::invalid_argument("cutoff must be >= 0");
    if (!(squeeze_photons >= 0.0)) throw std::invalid_argument("squeeze_photons must be >= 0");
}

KittenState kitten_direct(const KittenSpec& spec) {
    spec.validate();
    if (spec.infinite() && spec.k == 0) {
        throw std::domain_error("k = 0 with infinite squeezing does not normalize");
    }
    const int top = spec.cutoff + spec.k;
    LogAmplitudes source = spec.infinite() ? infinite_squeeze_limit_fock(top)
                                           : squeezed_vacuum_log(Squeeze::from_photons(spec.squeeze_photons), top);
    const double lc = std::log(std::cos(spec.theta_sub));
    LogAmplitudes seq;
    seq.resize(static_cast<std::size_t>(spec.cutoff) + 1);
    for (int m = 0; m <= spec.cutoff; ++m) {
        const int n = m + spec.k;
        const auto ni = static_cast<std::size_t>(n);
        if (source.phase[ni] == Amplitude{}) continue;
        const auto mi = static_cast<std::size_t>(m);
        seq.log_magnitude[mi] = 0.5 * (log_factorial(n) - log_factorial(m)) + m * lc + source.log_magnitude[ni];
        seq.phase[mi] = source.phase[ni];
    }
    FockState state = normalize_log_amplitudes(seq);
    double mean = mean_photon_number(state, Mode{0});
    std::optional<double> p;
    if (!spec.infinite()) p = kitten_probability(spec);
    return {std::move(state), p, mean};
}

SubtractionOutcome kitten_two_mode(const KittenSpec& spec, int tap_cutoff) {
    spec.validate();
    if (spec.infinite()) throw std::domain_error("the two-mode construction needs finite squeezing");
    if (tap_cutoff < spec.k) throw std::invalid_argument("tap cutoff below the requested count");
    auto sq = squeezed_vacuum(Squeeze::from_photons(spec.squeeze_photons), spec.cutoff + spec.k);
    auto joint = tensor(sq, FockState::vacuum(ModeLayout({tap_cutoff})));
    joint = beamsplit(joint, Mode{0}, Mode{1}, spec.theta_sub);
    auto out = measure_count(joint, Mode{1}, spec.k);
    const auto& full = out.post_state.amplitudes();
    std::vector<Amplitude> kept(full.begin(), full.begin() + spec.cutoff + 1);
    double dropped = 0;
    for (std::size_t n = kept.size(); n < full.size(); ++n) dropped += std::norm(full[n]);
    out.post_state = FockState(ModeLayout({spec.cutoff}), std::move(kept), out.post_state.truncation_loss() + dropped)
                         .normalized();
    return out;
}

double kitten_probability(const KittenSpec& spec) {
    spec.validate();
    if (spec.infinite()) throw std::domain_error("outcome probability is undefined for infinite squeezing");
    auto sq = squeezed_vacuum_log(Squeeze::from_photons(spec.squeeze_photons), spec.cutoff);
    const double ls = std::log(std::sin(spec.theta_sub));
    const double lc = std::log(std::cos(spec.theta_sub));
    std::vector<double> terms;
    for (int n = spec.k; n <= spec.cutoff; ++n) {
        double l = sq.log_magnitude[static_cast<std::size_t>(n)];
        if (!std::isfinite(l)) continue;
        terms.push_back(2 * l + comb::log_binomial(n, spec.k) + 2 * spec.k * ls + 2 * (n - spec.k) * lc);
    }
    if (terms.empty()) return 0.0;
    return std::exp(comb::log_sum_exp(terms));
}

double peak_estimate(int k, double theta_sub) {
    if (k < 0) throw std::invalid_argument("k must be >= 0");
    if (!(theta_sub >= 0.0 && theta_sub < std::numbers::pi / 2)) {
        throw std::invalid_argument("theta_sub must lie in [0, pi/2)");
    }
    if (k == 0) return 0.0;
    double lc = std::log(std::cos(theta_sub));
    if (lc == 0.0) return std::numeric_limits<double>::infinity();
    return -k / (2 * lc);
}

double displacement_estimate(int k, double theta_sub) { return std::sqrt(peak_estimate(k, theta_sub)); }

}  // namespace dipne
