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

#include <complex>
#include <initializer_list>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dipne {

using Amplitude = std::complex<double>;

/// Leakage above this mass is reported as a truncation problem.
inline constexpr double kLeakageThreshold = 1e-8;
/// Default guard band: occupations >= cutoff - g count as "near the cutoff".
inline constexpr int kDefaultGuardBand = 2;

class LayoutError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Index of one bosonic mode within a layout.
struct Mode {
    std::size_t index = 0;
    friend bool operator==(Mode, Mode) = default;
};

/// Ordered modes with inclusive photon-number cutoffs.
///
/// Joint basis states are indexed mixed-radix with the last mode varying
/// fastest, so a mode's stride is the product of the dimensions after it.
class ModeLayout {
  public:
    explicit ModeLayout(std::vector<int> cutoffs);
    static ModeLayout uniform(std::size_t modes, int cutoff);

    std::size_t num_modes() const { return cutoffs_.size(); }
    int cutoff(Mode m) const { return cutoffs_.at(m.index); }
    std::size_t dim(Mode m) const { return static_cast<std::size_t>(cutoffs_.at(m.index)) + 1; }
    std::size_t stride(Mode m) const { return strides_.at(m.index); }
    std::size_t dimension() const { return dimension_; }
    const std::vector<int>& cutoffs() const { return cutoffs_; }

    /// Mixed-radix index; throws LayoutError when a count exceeds its cutoff.
    std::size_t index(std::span<const int> occupation) const;
    std::size_t index(std::initializer_list<int> occupation) const {
        return index(std::span<const int>(occupation.begin(), occupation.size()));
    }
    std::vector<int> occupation(std::size_t index) const;
    /// Occupation of one mode at a joint index, without decoding the rest.
    int occupation_of(std::size_t index, Mode m) const {
        return static_cast<int>((index / strides_[m.index]) % dim(m));
    }

    ModeLayout concat(const ModeLayout& other) const;
    ModeLayout without(Mode m) const;
    void check_mode(Mode m) const;

    friend bool operator==(const ModeLayout& a, const ModeLayout& b) { return a.cutoffs_ == b.cutoffs_; }

  private:
    std::vector<int> cutoffs_;
    std::vector<std::size_t> strides_;
    std::size_t dimension_ = 1;
};

/// Dense amplitude vector over a truncated multimode Fock basis.
///
/// Values are immutable once built. `truncation_loss` accumulates the
/// probability mass that operations had to discard because it would have
/// landed above a cutoff (or, for analytic constructors, the mass beyond the
/// cutoff that the raw truncated amplitudes omit).
class FockState {
  public:
    FockState(ModeLayout layout, std::vector<Amplitude> amplitudes, double truncation_loss = 0.0);

    static FockState vacuum(ModeLayout layout);
    static FockState basis(ModeLayout layout, std::span<const int> occupation);
    static FockState basis(ModeLayout layout, std::initializer_list<int> occupation) {
        return basis(std::move(layout), std::span<const int>(occupation.begin(), occupation.size()));
    }
    /// Single-mode state from a list of amplitudes; cutoff = size - 1.
    static FockState single_mode(std::vector<Amplitude> amplitudes, double truncation_loss = 0.0);

    const ModeLayout& layout() const { return layout_; }
    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    const Amplitude& operator[](std::size_t i) const { return amplitudes_[i]; }
    Amplitude amplitude(std::span<const int> occupation) const {
        return amplitudes_[layout_.index(occupation)];
    }
    Amplitude amplitude(std::initializer_list<int> occupation) const {
        return amplitudes_[layout_.index(occupation)];
    }
    std::size_t num_modes() const { return layout_.num_modes(); }

    double norm_squared() const;
    double norm() const;
    double truncation_loss() const { return truncation_loss_; }
    /// Probability mass on basis states where some mode sits at or above
    /// cutoff - g.
    double guard_band_mass(int g = kDefaultGuardBand) const;
    /// max(truncation_loss, guard_band_mass(g)): the single number reported
    /// in experiment metadata.
    double leakage(int g = kDefaultGuardBand) const;
    bool leaks(int g = kDefaultGuardBand) const { return leakage(g) > kLeakageThreshold; }

    /// Rescaled to unit norm; throws std::domain_error for the zero vector.
    FockState normalized() const;
    bool is_normalized(double tol = 1e-12) const;

    /// Rvalue access for code that builds a new state from this one.
    std::vector<Amplitude> release() && { return std::move(amplitudes_); }

  private:
    ModeLayout layout_;
    std::vector<Amplitude> amplitudes_;
    double truncation_loss_ = 0.0;
};

// Ladder operators. Results are unnormalized.
FockState apply_annihilation(const FockState& state, Mode mode);
/// Amplitude pushed above the cutoff is dropped and added to truncation_loss.
FockState apply_creation(const FockState& state, Mode mode);
/// n_hat on one mode.
FockState apply_number(const FockState& state, Mode mode);

/// <a|b>, conjugate-linear in `a`. Layouts must match.
Amplitude inner(const FockState& a, const FockState& b);

/// |<a|b>|^2 for normalized states. Throws std::domain_error when either input
/// is off unit norm by more than `norm_tol`.
double fidelity(const FockState& a, const FockState& b, double norm_tol = 1e-6);

/// P(n) for one mode, tracing out the rest.
std::vector<double> marginal_number_distribution(const FockState& state, Mode mode);

/// <n_hat> on one mode (not divided by the norm).
double mean_photon_number(const FockState& state, Mode mode);
/// Total <sum_i n_hat_i>.
double total_photon_number(const FockState& state);

/// a (x) b with b's modes appended after a's.
FockState tensor(const FockState& a, const FockState& b);

/// e^{i phi}, exact at multiples of pi/2 so that parity cancellations stay
/// exact.
Amplitude unit_phase(double phi);

/// Largest joint dimension the library will allocate.
inline constexpr std::size_t kMaxDimension = std::size_t{1} << 28;

namespace detail {
/// Number of "outer" blocks before a mode and its inner stride, for looping
/// over every fiber along that mode.
struct FiberGeometry {
    std::size_t outer;
    std::size_t dim;
    std::size_t stride;
};
FiberGeometry fibers(const ModeLayout& layout, Mode mode);
}  // namespace detail

}  // namespace dipne
