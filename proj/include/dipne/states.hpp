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
#include <complex>
#include <vector>

#include "dipne/fock.hpp"

namespace dipne {

/// xi = r e^{i theta}, applied as S(xi) = exp((xi* a^2 - xi a^dag^2) / 2).
struct Squeeze {
    double r = 0.0;
    double theta = 0.0;

    /// "S photons of squeezing": sinh^2 r = S.
    static Squeeze from_photons(double photons, double theta = 0.0) {
        if (!(photons >= 0.0)) throw std::invalid_argument("squeezing photons must be >= 0");
        return {std::asinh(std::sqrt(photons)), theta};
    }
    double photons() const { return std::sinh(r) * std::sinh(r); }
};

/// (D(alpha) + e^{i phi} D(-alpha)) S(xi) |0>, normalized.
struct CatSpec {
    Amplitude alpha = 0.0;
    double phi = 0.0;
    Squeeze squeeze{};
};

/// Per-level amplitudes stored as log|c_n| plus a unit phase. Zero entries
/// have log_magnitude = -inf and phase 0.
struct LogAmplitudes {
    std::vector<double> log_magnitude;
    std::vector<Amplitude> phase;

    std::size_t size() const { return log_magnitude.size(); }
    void resize(std::size_t n) {
        log_magnitude.assign(n, -INFINITY);
        phase.assign(n, 0.0);
    }
};

/// Tail mass above which a truncated sequence is declared unconverged.
inline constexpr double kConvergenceTail = 1e-10;

/// Normalized single-mode state from log amplitudes (index = Fock level).
/// Throws std::domain_error when the mass in the top guard band of the
/// normalized result exceeds `tail_tol`, i.e. when the sequence has not
/// converged by the end of the vector.
FockState normalize_log_amplitudes(const LogAmplitudes& seq, double tail_tol = kConvergenceTail);

// Single-mode constructors. Amplitudes are the raw truncated values with no
// renormalization; the mass beyond the cutoff is recorded as truncation loss.
FockState coherent(Amplitude alpha, int cutoff);
FockState squeezed_vacuum(const Squeeze& sq, int cutoff);
/// D(alpha) S(xi) |0>.
FockState squeezed_coherent(Amplitude alpha, const Squeeze& sq, int cutoff);
/// Normalized cat or squeezed cat; truncation_loss is the fraction of the
/// exact norm lost to the cutoff. Throws std::domain_error when the
/// superposition vanishes (alpha = 0 with phi = pi).
FockState cat_state(const CatSpec& spec, int cutoff);

/// Squeezed-vacuum coefficients C_n(xi) for n = 0..max_n in log form.
LogAmplitudes squeezed_vacuum_log(const Squeeze& sq, int max_n);

/// Limit of C_{2m}(xi) / C_0 with the tanh factor dropped, m = 0..max_m:
/// (-1)^m sqrt((2m)!) / (2^m m!) e^{i theta m}. Entry m is Fock level 2m.
/// Not normalizable on its own.
LogAmplitudes infinite_squeeze_limit_coeffs(int max_m, double theta = 0.0);

/// Same sequence laid out on Fock levels 0..2 max_m with odd levels zero.
LogAmplitudes infinite_squeeze_limit_fock(int max_n, double theta = 0.0);

}  // namespace dipne
