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

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dipne/fock.hpp"
#include "dipne/states.hpp"

// Linear-optics and Gaussian circuit elements acting on FockState values.
//
// Beamsplitter convention: transmission phase 1, reflection phase +i, so a
// coherent pair maps as
//   (alpha_a, alpha_b) -> (cos t alpha_a + i sin t alpha_b, cos t alpha_b + i sin t alpha_a).
// theta = pi/4 is the 50:50 splitter.
namespace dipne {

/// Cutoffs up to this value exponentiate the dense truncated generator;
/// larger fibers use a matrix-free Taylor propagator.
inline constexpr int kDenseExpMaxCutoff = 200;

/// Multiplies the amplitude at occupation n of `mode` by e^{i phi n}.
FockState phase_shift(const FockState& state, Mode mode, double phi);

/// Two-mode beamsplitter. Amplitude scattered above either cutoff is dropped
/// and added to truncation_loss. Throws std::invalid_argument when a == b.
FockState beamsplit(const FockState& state, Mode a, Mode b, double theta);

/// D(alpha) = exp(alpha a^dag - alpha* a) on one mode.
FockState displace(const FockState& state, Mode mode, Amplitude alpha);

/// S(xi) = exp((xi* a^2 - xi a^dag^2) / 2) on one mode.
FockState squeeze_op(const FockState& state, Mode mode, const Squeeze& sq);

/// exp(G) for the truncated generator on one mode, through the dense path.
/// Exposed for tests that compare the two propagators.
enum class ExpMethod { Auto, Dense, Taylor };
FockState displace(const FockState& state, Mode mode, Amplitude alpha, ExpMethod method);
FockState squeeze_op(const FockState& state, Mode mode, const Squeeze& sq, ExpMethod method);

/// Phase-encoded [measured, LO] pair to displacement-encoded pair: 50:50
/// beamsplitter, then a -i phase on the first output.
FockState phase_to_dide(const FockState& state, Mode m0, Mode m1);

/// Exact inverse of phase_to_dide: +i phase on the first mode, then the
/// 50:50 beamsplitter run backwards.
FockState dide_to_phase(const FockState& state, Mode m0, Mode m1);

struct GadgetSpec {
    double theta_split = 0.0;
    double theta_interfere = 0.0;
    /// pi phase on the picked-off light before recombination.
    bool pi_shift = false;
    /// Indices of the two erasure modes within the 4-mode state. The system
    /// modes are the remaining two, in order.
    std::vector<std::size_t> erasure_modes{2, 3};

    void validate() const;
};

/// Runs the symmetric interference gadget on a 4-mode state whose erasure
/// modes are vacuum: split each system mode into its erasure mode, optional
/// pi phase on both erasure modes, then recombine each erasure mode with the
/// opposite system mode. Throws std::invalid_argument when an erasure mode
/// carries photons.
FockState interference_gadget(const FockState& state, const GadgetSpec& spec);

/// Appends two vacuum erasure modes (cutoff `erasure_cutoff`) to a 2-mode
/// system state and runs the gadget.
FockState interference_gadget(const FockState& system, const GadgetSpec& spec, int erasure_cutoff);

/// Beamsplits mode i of `system` with mode i of `prepared` at theta for every
/// i. Output layout: system modes then prepared modes.
FockState inject(const FockState& system, const FockState& prepared, double theta);

// Element descriptors shared by the Fock and Gaussian back ends.
struct DisplaceOp {
    std::size_t mode;
    Amplitude alpha;
};
struct SqueezeOp {
    std::size_t mode;
    Squeeze squeeze;
};
struct PhaseOp {
    std::size_t mode;
    double phi;
};
struct BeamsplitOp {
    std::size_t a;
    std::size_t b;
    double theta;
};
using Element = std::variant<DisplaceOp, SqueezeOp, PhaseOp, BeamsplitOp>;

FockState apply_element(const FockState& state, const Element& element);
FockState run_circuit(FockState state, std::span<const Element> circuit);

/// Parses "displace MODE RE IM", "squeeze MODE R THETA", "phase MODE PHI" or
/// "beamsplit A B THETA". Throws std::invalid_argument on anything else.
Element parse_element(std::string_view text);
std::string format_element(const Element& element);

}  // namespace dipne
