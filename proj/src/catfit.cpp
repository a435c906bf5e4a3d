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

#include "dipne/catfit.hpp"

#include <cmath>
#include <numbers>

namespace dipne {

namespace {

constexpr double kPi = std::numbers::pi;

double mean_of(const FockState& s) { return mean_photon_number(s, Mode{0}); }

FockState make_cat(const CatFrame& frame, double alpha, double r, int cutoff) {
    CatSpec spec{std::polar(alpha, (frame.theta + kPi) / 2), frame.phi, {r, frame.theta}};
    return cat_state(spec, cutoff);
}

// |alpha| such that the normalized superposition holds `target` photons at
// squeezing r, by bisection on the (increasing) photon number.
std::optional<double> solve_state_alpha(const CatFrame& frame, double r, double target, int cutoff) {
    auto photons = [&](double a) -> std::optional<double> {
        try {
            return mean_of(make_cat(frame, a, r, cutoff));
        } catch (const std::domain_error&) {
            return std::nullopt;
        }
    };
    double lo = 0.0;
    auto at_lo = photons(lo);
    if (!at_lo) {
        lo = 1e-6;
        at_lo = photons(lo);
    }
    if (!at_lo || *at_lo > target) return std::nullopt;
    double hi = std::sqrt(target) + 1.0;
    auto at_hi = photons(hi);
    while (at_hi && *at_hi < target && hi < 1e3) {
        hi *= 2;
        at_hi = photons(hi);
    }
    if (!at_hi || *at_hi < target) return std::nullopt;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        auto m = photons(mid);
        if (!m) return std::nullopt;
        (*m < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double golden_section_maximize(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

CatFrame cat_frame(const FockState& target) {
    if (target.num_modes() != 1) throw std::invalid_argument("cat fits take single-mode states");
    bool has_even = false, has_odd = false;
    for (std::size_t n = 0; n < target.amplitudes().size(); ++n) {
        if (target[n] != Amplitude{}) (n % 2 ? has_odd : has_even) = true;
    }
    if (has_even && has_odd) throw std::domain_error("cat fit target must have definite photon-number parity");
    double n = mean_of(target);
    if (!(n > 0.0)) throw std::domain_error("cat fit target has zero photon number");
    auto a = apply_annihilation(target, Mode{0});
    Amplitude a2 = inner(target, apply_annihilation(a, Mode{0}));
    double theta = std::abs(a2) > 1e-300 ? std::arg(-a2) : 0.0;
    return {theta, has_odd ? kPi : 0.0, n};
}

std::optional<FockState> candidate_cat(const CatFrame& frame, double s, int cutoff, PhotonBudget budget,
                                       double* alpha_out) {
    const double n = frame.mean_photons;
    const double r = std::asinh(std::sqrt(s * n));
    double alpha = 0.0;
    if (budget == PhotonBudget::Component) {
        alpha = std::sqrt(std::max(0.0, (1.0 - s) * n));
    } else {
        auto solved = solve_state_alpha(frame, r, n, cutoff);
        if (!solved) return std::nullopt;
        alpha = *solved;
    }
    if (alpha_out) *alpha_out = alpha;
    try {
        return make_cat(frame, alpha, r, cutoff);
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
}

CatFitResult fit_squeezed_cat(const FockState& target, const CatFitOptions& options) {
    if (options.grid_points < 3) throw std::invalid_argument("cat fit needs at least 3 grid points");
    const CatFrame frame = cat_frame(target);
    const int cutoff = target.layout().cutoff(Mode{0});
    auto objective = [&](double s) {
        auto c = candidate_cat(frame, s, cutoff, options.budget);
        return c ? fidelity(target, *c) : 0.0;
    };

    const int g = options.grid_points;
    int best = 0;
    double best_f = -1.0;
    for (int i = 0; i < g; ++i) {
        double f = objective(static_cast<double>(i) / (g - 1));
        if (f > best_f) {
            best_f = f;
            best = i;
        }
    }
    double lo = static_cast<double>(std::max(0, best - 1)) / (g - 1);
    double hi = static_cast<double>(std::min(g - 1, best + 1)) / (g - 1);
    double s = golden_section_maximize(objective, lo, hi, options.tolerance);
    double f = objective(s);
    double grid_s = static_cast<double>(best) / (g - 1);
    if (best_f > f) {
        s = grid_s;
        f = best_f;
    }

    CatFitResult res{};
    double alpha = 0.0;
    candidate_cat(frame, s, cutoff, options.budget, &alpha);
    res.fidelity = f;
    res.infidelity = 1.0 - f;
    res.squeeze_fraction = s;
    res.alpha = alpha;
    res.r = std::asinh(std::sqrt(s * frame.mean_photons));
    res.phi = frame.phi;
    res.mean_photons = frame.mean_photons;
    res.squeeze_theta = frame.theta;
    res.plain_cat_fidelity = fit_plain_cat(target);
    return res;
}

CatFitResult fit_squeezed_cat(const KittenState& kitten, const CatFitOptions& options) {
    return fit_squeezed_cat(kitten.state, options);
}

double fit_plain_cat(const FockState& target) {
    const CatFrame frame = cat_frame(target);
    auto c = candidate_cat(frame, 0.0, target.layout().cutoff(Mode{0}), PhotonBudget::Component);
    return c ? fidelity(target, *c) : 0.0;
}

double fit_plain_cat(const KittenState& kitten) { return fit_plain_cat(kitten.state); }

double squeeze_fraction_report(const KittenState& kitten, const CatFitOptions& options) {
    return fit_squeezed_cat(kitten, options).squeeze_fraction;
}

}  // namespace dipne
