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

#include <functional>

#include "dipne/kitten.hpp"

// Fits of kitten states against superpositions of squeezed displaced states,
//   (D(alpha) + e^{i phi} D(-alpha)) S(xi) |0>,
// at a fixed total photon number N, searching over the fraction s of N that
// comes from squeezing.
namespace dipne {

/// How the candidate's photon number is matched to N.
enum class PhotonBudget {
    /// |alpha|^2 + sinh^2 r = N with sinh^2 r = s N.
    Component,
    /// Mean photon number of the normalized superposition equals N, with
    /// sinh^2 r = s N and |alpha| solved numerically.
    State,
};

struct CatFitOptions {
    PhotonBudget budget = PhotonBudget::Component;
    int grid_points = 64;
    double tolerance = 1e-6;
};

struct CatFitResult {
    double fidelity;
    double infidelity;
    double squeeze_fraction;
    double alpha;
    double r;
    double phi;
    double plain_cat_fidelity;
    /// N, the target's mean photon number.
    double mean_photons;
    /// Phase of xi; the displacement lies along e^{i (theta + pi) / 2}.
    double squeeze_theta;
};

/// Maximizes f over [lo, hi] by golden-section search until the bracket
/// is narrower than tol. Returns the abscissa of the best evaluated point.
double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double tol);

/// Orientation and parity shared by every candidate for `target`.
struct CatFrame {
    double theta;
    double phi;
    double mean_photons;
};

/// theta = arg(-<a^2>) of the target; phi = pi for odd support, 0 for even.
/// Throws std::domain_error for mixed parity or zero photon number.
CatFrame cat_frame(const FockState& target);

/// Candidate at squeezing fraction s, or nullopt when the budget cannot be
/// met (odd parity with alpha = 0, or no |alpha| reaching N).
std::optional<FockState> candidate_cat(const CatFrame& frame, double s, int cutoff, PhotonBudget budget,
                                       double* alpha_out = nullptr);

CatFitResult fit_squeezed_cat(const FockState& target, const CatFitOptions& options = {});
CatFitResult fit_squeezed_cat(const KittenState& kitten, const CatFitOptions& options = {});

/// Fidelity against (|alpha> + e^{i phi} |-alpha>)/norm with |alpha|^2 = N.
double fit_plain_cat(const FockState& target);
double fit_plain_cat(const KittenState& kitten);

/// Squeezing fraction at the fidelity optimum.
double squeeze_fraction_report(const KittenState& kitten, const CatFitOptions& options = {});

}  // namespace dipne
