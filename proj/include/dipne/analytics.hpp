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

#include <Eigen/Dense>
#include <string_view>

#include "dipne/catfit.hpp"
#include "dipne/circuits.hpp"

namespace dipne {

/// +-4 sin ts cos ts sin ti cos ti Re[alpha1 alpha2*]: the change in
/// photons sent to erasure caused by interference in the symmetric gadget.
/// Sign + without the pi shift.
double interference_loss_theory(Amplitude alpha1, Amplitude alpha2, double theta_s, double theta_i, bool pi_shift);

/// Amplitude for |n, m> to leave a 50:50 splitter as |h, h>, h = (n+m)/2.
/// Zero when n + m is odd.
Amplitude c_equal(int n, int m);

/// Same amplitude from an explicit expansion of (a^dag + i b^dag)^n
/// (b^dag + i a^dag)^m. Throws std::invalid_argument for n + m > 24.
Amplitude c_equal_bruteforce(int n, int m);

/// Output amplitudes of |n, m> through the 50:50 splitter over
/// |j, n+m-j>, j = 0..n+m, from the same expansion.
std::vector<Amplitude> c_equal_bruteforce_distribution(int n, int m);

struct ErasureResidual {
    /// sqrt(as^2 + aw^2) - as
    double exact;
    /// aw^2 / (2 as)
    double approximation;
};
ErasureResidual erasure_residual(double alpha_weak, double alpha_strong);

/// e^{-|alpha|^2} |alpha|^{2n} / n!
double poisson_pn(Amplitude alpha, int n);

struct SqueezeFraction {
    /// Displacement photons over squeezing photons: d0^2 e^{2r} / sinh^2(r + r0).
    double ratio_exact;
    /// 4 d0^2 / e^{2 r0}
    double ratio_strong;
    /// 1 / (1 + ratio)
    double fraction_exact;
    double fraction_strong;
};
SqueezeFraction squeeze_fraction_strong(double d0, double r0, double r);

struct MatchResult {
    /// Signed squeezing along the source's displacement axis; positive values
    /// amplify the displacement.
    double r_required;
    /// 1 - target^2 / <n> of the squeezed source.
    double excess_fraction;
    double source_displacement;
    double mean_photons;
    double leakage;
};

/// Squeezing needed for the source's fitted displacement, carried through
/// the squeezer by the Gaussian mean map, to equal `target_displacement`;
/// the squeezed source is then simulated for its photon number.
MatchResult squeeze_to_match(const KittenState& source, double target_displacement);
MatchResult squeeze_to_match(const KittenState& source, const CatFitResult& fit, double target_displacement);

/// Quadrature means (x0, p0, x1, p1, ...) and covariance with vacuum = I.
struct GaussianMoments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;

    static GaussianMoments vacuum(std::size_t modes);
    std::size_t num_modes() const { return static_cast<std::size_t>(mean.size() / 2); }
};

/// Symplectic matrix of a circuit element on `modes` modes, matching the
/// Fock-space conventions.
Eigen::MatrixXd symplectic(const Element& element, std::size_t modes);

GaussianMoments gaussian_propagate(const GaussianMoments& moments, const Element& element);
/// Parses the element first; unknown element names throw std::invalid_argument.
GaussianMoments gaussian_propagate(const GaussianMoments& moments, std::string_view element);

/// True when cov is symmetric and cov + i Omega is positive semidefinite.
bool is_physical(const GaussianMoments& moments, double tol = 1e-9);

/// (x^2 + p^2)/4 + (Vxx + Vpp - 2)/4. Throws std::domain_error for
/// unphysical moments.
double mean_photons_from_moments(const GaussianMoments& moments, std::size_t mode);

}  // namespace dipne
