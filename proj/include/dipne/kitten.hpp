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

#include <cmath>
#include <limits>
#include <optional>

#include "dipne/measurement.hpp"
#include "dipne/states.hpp"

// Photon-subtracted squeezed vacuum. A squeezed vacuum meets vacuum on a
// beamsplitter at theta_sub and the tapped arm registers k photons; the
// remaining mode has coefficients
//   C_{n-k} ~ sqrt(n! / (n-k)!) cos^{n-k}(theta_sub) C_n(xi),
// with n-independent factors dropped.
namespace dipne {

inline constexpr double kInfiniteSqueezing = std::numeric_limits<double>::infinity();

struct KittenSpec {
    /// sinh^2 r of the input; kInfiniteSqueezing selects the limit sequence.
    double squeeze_photons = 0.0;
    double theta_sub = 0.0;
    int k = 0;
    /// Highest Fock level kept in the output mode.
    int cutoff = 100;

    bool infinite() const { return std::isinf(squeeze_photons); }
    void validate() const;
};

struct KittenState {
    FockState state;
    /// Outcome probability; empty in the infinite-squeezing limit.
    std::optional<double> probability;
    double mean_photons;
};

/// Kitten built from the closed-form coefficients. Throws std::domain_error
/// for k = 0 with infinite squeezing, for impossible outcomes, and when the
/// coefficients have not converged by the cutoff.
KittenState kitten_direct(const KittenSpec& spec);

/// Beamsplit squeezed_vacuum (x) vacuum and condition the tapped mode on k.
/// The tapped mode gets cutoff `tap_cutoff` (at least k). The input mode is
/// held to cutoff + k so that every output level up to the cutoff is fed,
/// then the post-state is cut back to the cutoff (dropped mass goes to its
/// truncation loss). The result equals i^k times kitten_direct's state.
SubtractionOutcome kitten_two_mode(const KittenSpec& spec, int tap_cutoff);

/// P(k) = sum_n P_sq(n) C(n,k) sin^{2k} cos^{2(n-k)}, the tapped-mode
/// marginal of the two-mode construction, with P_sq truncated at the
/// cutoff. Throws std::domain_error for infinite squeezing.
double kitten_probability(const KittenSpec& spec);

/// -k / (2 ln cos theta_sub); +inf as theta_sub -> 0 for k > 0.
double peak_estimate(int k, double theta_sub);
/// sqrt(peak_estimate).
double displacement_estimate(int k, double theta_sub);

}  // namespace dipne
