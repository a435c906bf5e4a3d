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

#include "dipne/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "dipne/simd.hpp"

namespace dipne {

double JointDistribution::at(std::initializer_list<int> counts) const {
    if (counts.size() != cutoffs.size()) throw LayoutError("count tuple has the wrong length");
    std::size_t idx = 0;
    std::size_t i = 0;
    for (int c : counts) {
        if (c < 0 || c > cutoffs[i]) return 0.0;
        idx = idx * static_cast<std::size_t>(cutoffs[i] + 1) + static_cast<std::size_t>(c);
        ++i;
    }
    return probability[idx];
}

double JointDistribution::total() const {
    double s = 0.0;
    for (double p : probability) s += p;
    return s;
}

JointDistribution joint_number_distribution(const FockState& state, std::span<const std::size_t> modes) {
    const ModeLayout& layout = state.layout();
    JointDistribution out;
    out.modes.assign(modes.begin(), modes.end());
    std::size_t dim = 1;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        layout.check_mode(Mode{modes[i]});
        for (std::size_t j = 0; j < i; ++j) {
            if (modes[j] == modes[i]) throw LayoutError("mode listed twice in joint distribution");
        }
        out.cutoffs.push_back(layout.cutoff(Mode{modes[i]}));
        dim *= layout.dim(Mode{modes[i]});
    }
    out.probability.assign(dim, 0.0);
    auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        double p = std::norm(amps[i]);
        if (p == 0.0) continue;
        std::size_t idx = 0;
        for (std::size_t m : modes) {
            idx = idx * layout.dim(Mode{m}) + static_cast<std::size_t>(layout.occupation_of(i, Mode{m}));
        }
        out.probability[idx] += p;
    }
    return out;
}

JointDistribution joint_number_distribution(const FockState& state, std::initializer_list<std::size_t> modes) {
    return joint_number_distribution(state, std::span<const std::size_t>(modes.begin(), modes.size()));
}

SubtractionOutcome measure_count(const FockState& state, Mode mode, int k) {
    const ModeLayout& layout = state.layout();
    layout.check_mode(mode);
    if (k < 0 || k > layout.cutoff(mode)) {
        throw LayoutError("count " + std::to_string(k) + " outside the cutoff of mode " + std::to_string(mode.index));
    }
    ModeLayout rest = layout.without(mode);
    auto geo = detail::fibers(layout, mode);
    auto in = state.amplitudes();
    std::vector<Amplitude> out(rest.dimension());
    // Removing a mode leaves the outer blocks and inner strides contiguous.
    for (std::size_t o = 0; o < geo.outer; ++o) {
        const Amplitude* src = in.data() + o * geo.dim * geo.stride + static_cast<std::size_t>(k) * geo.stride;
        std::copy(src, src + geo.stride, out.begin() + static_cast<std::ptrdiff_t>(o * geo.stride));
    }
    double p = simd::norm_sq(out);
    if (!(p >= 1e-300)) {
        throw std::domain_error("conditioning on an impossible outcome (probability " + std::to_string(p) + ")");
    }
    double inv = 1.0 / std::sqrt(p);
    for (auto& x : out) x *= inv;
    return {k, p, FockState(std::move(rest), std::move(out), state.truncation_loss())};
}

Quadratures mean_quadrature(const FockState& state, Mode mode) {
    Amplitude a = inner(state, apply_annihilation(state, mode));
    return {2.0 * a.real(), 2.0 * a.imag()};
}

DipneDecode decode_dipne(const FockState& state, Mode m0, Mode m1) {
    if (m0 == m1) throw std::invalid_argument("decode needs two distinct modes");
    DipneDecode d{};
    double n0 = mean_photon_number(state, m0);
    double n1 = mean_photon_number(state, m1);
    d.value = std::fabs(n0 - n1) <= kDecodeTieTolerance ? BitValue::Undefined
              : n0 > n1                                 ? BitValue::Zero
                                                        : BitValue::One;
    auto joint = joint_number_distribution(state, {m0.index, m1.index});
    const int c0 = joint.cutoffs[0];
    const int c1 = joint.cutoffs[1];
    for (int a = 0; a <= c0; ++a) {
        for (int b = 0; b <= c1; ++b) {
            double p = joint.probability[static_cast<std::size_t>(a) * static_cast<std::size_t>(c1 + 1) +
                                         static_cast<std::size_t>(b)];
            if (a > b) {
                d.p_zero += p;
            } else if (b > a) {
                d.p_one += p;
            } else {
                d.p_undefined += p;
            }
        }
    }
    return d;
}

BitValue decode_dide(const FockState& state, Mode m0, Mode m1) {
    if (m0 == m1) throw std::invalid_argument("decode needs two distinct modes");
    double x0 = mean_quadrature(state, m0).x;
    double x1 = mean_quadrature(state, m1).x;
    if (std::fabs(x0 - x1) <= kDecodeTieTolerance) return BitValue::Undefined;
    return x0 > x1 ? BitValue::Zero : BitValue::One;
}

double distinguishability(const FockState& state, Mode m0, Mode m1) {
    auto moments = [&](Mode m) {
        auto p = marginal_number_distribution(state, m);
        double mean = 0.0, sq = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            double n = static_cast<double>(j);
            mean += n * p[j];
            sq += n * n * p[j];
        }
        return std::pair{mean, std::max(0.0, sq - mean * mean)};
    };
    auto [mu0, v0] = moments(m0);
    auto [mu1, v1] = moments(m1);
    double num = std::fabs(mu0 - mu1);
    double den = std::sqrt(v0 + v1);
    if (den < 1e-12) return num < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

namespace {

struct ErasureCount {
    double photons;
    double leakage;
};

ErasureCount count_erasure(const FockState& system, const GadgetSpec& spec, int erasure_cutoff) {
    auto out = interference_gadget(system, spec, erasure_cutoff);
    return {mean_photon_number(out, Mode{2}) + mean_photon_number(out, Mode{3}), out.leakage()};
}

}  // namespace

double erasure_photons(const FockState& system, const GadgetSpec& spec, int erasure_cutoff) {
    return count_erasure(system, spec, erasure_cutoff).photons;
}

InterferenceLoss l_intf_detailed(const FockState& input0, const FockState& input1, const GadgetSpec& spec) {
    if (input0.num_modes() != 1 || input1.num_modes() != 1) {
        throw std::invalid_argument("l_intf takes single-mode inputs");
    }
    const int ec = std::max(input0.layout().cutoff(Mode{0}), input1.layout().cutoff(Mode{0}));
    auto vac0 = FockState::vacuum(input0.layout());
    auto vac1 = FockState::vacuum(input1.layout());
    auto both = count_erasure(tensor(input0, input1), spec, ec);
    auto only0 = count_erasure(tensor(input0, vac1), spec, ec);
    auto only1 = count_erasure(tensor(vac0, input1), spec, ec);
    return {both.photons - only0.photons - only1.photons,
            std::max({both.leakage, only0.leakage, only1.leakage})};
}

double l_intf(const FockState& input0, const FockState& input1, const GadgetSpec& spec) {
    return l_intf_detailed(input0, input1, spec).value;
}

}  // namespace dipne
