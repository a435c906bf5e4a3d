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

#pragma once

#include <limits>
#include <vector>

#include "dipne/circuits.hpp"
#include "dipne/fock.hpp"

namespace dipne {

/// Photon-number probabilities over a subset of modes, indexed mixed-radix
/// (last listed mode fastest) like ModeLayout.
struct JointDistribution {
    std::vector<std::size_t> modes;
    std::vector<int> cutoffs;
    std::vector<double> probability;

    double at(std::initializer_list<int> counts) const;
    double total() const;
};

JointDistribution joint_number_distribution(const FockState& state, std::span<const std::size_t> modes);
JointDistribution joint_number_distribution(const FockState& state, std::initializer_list<std::size_t> modes);

struct SubtractionOutcome {
    int k;
    double probability;
    /// Normalized conditional state with the measured mode removed.
    FockState post_state;
};

/// Projects `mode` onto k photons. Throws std::domain_error when the outcome
/// has probability below 1e-300, LayoutError when k exceeds the cutoff or the
/// state has a single mode.
SubtractionOutcome measure_count(const FockState& state, Mode mode, int k);

struct Quadratures {
    double x;
    double p;
};

/// (<a + a^dag>, <-i(a - a^dag)>); a coherent |alpha> gives (2 Re alpha, 2 Im alpha).
Quadratures mean_quadrature(const FockState& state, Mode mode);

enum class BitValue { Zero, One, Undefined };

/// Tie band for comparing expectation values.
inline constexpr double kDecodeTieTolerance = 1e-9;

struct DipneDecode {
    /// From <n0> vs <n1>: Zero when mode 0 holds more photons.
    BitValue value;
    /// Per-shot probabilities: n0 > n1, n1 > n0, n0 == n1.
    double p_zero;
    double p_one;
    double p_undefined;
};

DipneDecode decode_dipne(const FockState& state, Mode m0, Mode m1);

/// Zero when mode 0 has the larger mean X quadrature.
BitValue decode_dide(const FockState& state, Mode m0, Mode m1);

/// |<n0> - <n1>| / sqrt(Var n0 + Var n1). +inf when both variances vanish
/// and the means differ, 0 when everything vanishes.
double distinguishability(const FockState& state, Mode m0, Mode m1);

/// Photons in both erasure modes after the gadget on psi0 (x) psi1, minus
/// the same with each input replaced by vacuum. Erasure modes get the larger
/// of the two input cutoffs.
double l_intf(const FockState& input0, const FockState& input1, const GadgetSpec& spec);

struct InterferenceLoss {
    double value;
    /// Largest leakage among the three gadget output states.
    double leakage;
};
InterferenceLoss l_intf_detailed(const FockState& input0, const FockState& input1, const GadgetSpec& spec);

/// Erasure photons for one gadget run on a 2-mode system state.
double erasure_photons(const FockState& system, const GadgetSpec& spec, int erasure_cutoff);

}  // namespace dipne
