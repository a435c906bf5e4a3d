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

#include "dipne/analytics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>

#include "dipne/combinatorics.hpp"

namespace dipne {

namespace {

constexpr double kPi = std::numbers::pi;

Amplitude i_power(int e) {
    switch (((e % 4) + 4) % 4) {
        case 0:
            return {1, 0};
        case 1:
            return {0, 1};
        case 2:
            return {-1, 0};
        default:
            return {0, -1};
    }
}

// C(n, k) exactly; n is small enough here that int64 never overflows.
std::int64_t binomial_exact(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

// Coefficients of a^dag^i b^dag^j in (a^dag + i b^dag)^n (b^dag + i a^dag)^m.
std::map<std::pair<int, int>, Amplitude> expand_splitter(int n, int m) {
    std::map<std::pair<int, int>, Amplitude> poly{{{0, 0}, 1.0}};
    const Amplitude i{0, 1};
    auto times = [&](Amplitude ca, Amplitude cb) {
        std::map<std::pair<int, int>, Amplitude> next;
        for (const auto& [pw, c] : poly) {
            next[{pw.first + 1, pw.second}] += c * ca;
            next[{pw.first, pw.second + 1}] += c * cb;
        }
        poly = std::move(next);
    };
    for (int k = 0; k < n; ++k) times(1.0, i);
    for (int k = 0; k < m; ++k) times(i, 1.0);
    return poly;
}

void check_bruteforce(int n, int m) {
    if (n < 0 || m < 0) throw std::invalid_argument("photon numbers must be >= 0");
    if (n + m > 24) throw std::invalid_argument("brute-force expansion limited to n + m <= 24");
}

}  // namespace

double interference_loss_theory(Amplitude alpha1, Amplitude alpha2, double theta_s, double theta_i, bool pi_shift) {
    for (double t : {theta_s, theta_i}) {
        if (!(t >= 0.0 && t < kPi / 2)) throw std::invalid_argument("angles must lie in [0, pi/2)");
    }
    double v = 4 * std::sin(theta_s) * std::cos(theta_s) * std::sin(theta_i) * std::cos(theta_i) *
               (alpha1 * std::conj(alpha2)).real();
    return pi_shift ? -v : v;
}

Amplitude c_equal(int n, int m) {
    if (n < 0 || m < 0) throw std::invalid_argument("photon numbers must be >= 0");
    if ((n + m) % 2) return 0.0;
    const int h = (n + m) / 2;
    const double log_pref = comb::log_factorial(h) -
                            0.5 * (comb::log_factorial(n) + comb::log_factorial(m) + (n + m) * std::numbers::ln2);
    const Amplitude phase = i_power((m - n) / 2);
    // Alternating sum of C(n,j) C(m,h-j), exact in integers while it fits.
    if (n + m <= 60) {
        std::int64_t s = 0;
        for (int j = std::max(0, h - m); j <= std::min(n, h); ++j) {
            std::int64_t t = binomial_exact(n, j) * binomial_exact(m, h - j);
            s += (j % 2) ? -t : t;
        }
        if (s == 0) return 0.0;
        double mag = std::exp(log_pref + std::log(static_cast<double>(s < 0 ? -s : s)));
        return phase * (s < 0 ? -mag : mag);
    }
    // Beyond that the sum cancels catastrophically in floating point. The
    // equal split is the Wigner d^j_{0,nu}(pi/2) element, which gives
    // |C| = sqrt(m!/n!) (n-1)!!/m!! for even n, m and sign (-1)^{n/2} on the sum.
    if (n % 2) return 0.0;
    const int a = n / 2, b = m / 2;
    using comb::log_factorial;
    const double log_odd_n = log_factorial(n) - a * std::numbers::ln2 - log_factorial(a);  // (n-1)!!
    const double log_even_m = b * std::numbers::ln2 + log_factorial(b);                   // m!!
    const double mag = std::exp(0.5 * (log_factorial(m) - log_factorial(n)) + log_odd_n - log_even_m);
    return phase * (a % 2 ? -mag : mag);
}

std::vector<Amplitude> c_equal_bruteforce_distribution(int n, int m) {
    check_bruteforce(n, m);
    const int total = n + m;
    auto poly = expand_splitter(n, m);
    std::vector<Amplitude> out(static_cast<std::size_t>(total) + 1);
    // a^dag^j b^dag^k |0> = sqrt(j! k!) |j, k>; input norm 1/sqrt(n! m!) and
    // splitter factor 2^{-(n+m)/2}.
    for (int j = 0; j <= total; ++j) {
        auto it = poly.find({j, total - j});
        if (it == poly.end()) continue;
        double lw = 0.5 * (comb::log_factorial(j) + comb::log_factorial(total - j) - comb::log_factorial(n) -
                           comb::log_factorial(m) - total * std::numbers::ln2);
        out[static_cast<std::size_t>(j)] = it->second * std::exp(lw);
    }
    return out;
}

Amplitude c_equal_bruteforce(int n, int m) {
    check_bruteforce(n, m);
    if ((n + m) % 2) return 0.0;
    return c_equal_bruteforce_distribution(n, m)[static_cast<std::size_t>((n + m) / 2)];
}

ErasureResidual erasure_residual(double alpha_weak, double alpha_strong) {
    if (!(alpha_strong > 0.0)) throw std::invalid_argument("strong displacement must be > 0");
    // hypot form of sqrt(as^2 + aw^2) - as, free of cancellation.
    double exact = alpha_weak * alpha_weak / (std::hypot(alpha_strong, alpha_weak) + alpha_strong);
    return {exact, alpha_weak * alpha_weak / (2 * alpha_strong)};
}

double poisson_pn(Amplitude alpha, int n) {
    if (n < 0) throw std::invalid_argument("n must be >= 0");
    double a2 = std::norm(alpha);
    if (a2 == 0.0) return n == 0 ? 1.0 : 0.0;
    return std::exp(-a2 + n * std::log(a2) - comb::log_factorial(n));
}

SqueezeFraction squeeze_fraction_strong(double d0, double r0, double r) {
    if (!(d0 > 0.0) || !(r0 >= 0.0) || !(r >= 0.0)) {
        throw std::invalid_argument("need d0 > 0, r0 >= 0, r >= 0");
    }
    SqueezeFraction f{};
    double sh = std::sinh(r + r0);
    f.ratio_exact = sh == 0.0 ? std::numeric_limits<double>::infinity() : d0 * d0 * std::exp(2 * r) / (sh * sh);
    f.ratio_strong = 4 * d0 * d0 / std::exp(2 * r0);
    f.fraction_exact = std::isinf(f.ratio_exact) ? 0.0 : 1.0 / (1.0 + f.ratio_exact);
    f.fraction_strong = 1.0 / (1.0 + f.ratio_strong);
    return f;
}

MatchResult squeeze_to_match(const KittenState& source, double target_displacement) {
    return squeeze_to_match(source, fit_squeezed_cat(source), target_displacement);
}

MatchResult squeeze_to_match(const KittenState& source, const CatFitResult& fit, double target_displacement) {
    if (!(fit.alpha > 0.0)) throw std::domain_error("source has no fitted displacement");
    if (!(target_displacement > 0.0)) throw std::invalid_argument("target displacement must be > 0");
    // Displacement axis of the fitted components; squeezing with phase
    // 2 psi + pi stretches exactly that axis.
    const double psi = (fit.squeeze_theta + kPi) / 2;
    const Amplitude alpha = std::polar(fit.alpha, psi);
    auto carried = [&](double r) {
        double rr = std::fabs(r);
        double th = 2 * psi + (r >= 0 ? kPi : 0.0);
        return std::abs(alpha * std::cosh(rr) - std::conj(alpha) * std::polar(1.0, th) * std::sinh(rr));
    };
    double lo = -10.0, hi = 10.0;
    if (carried(lo) > target_displacement || carried(hi) < target_displacement) {
        throw std::domain_error("target displacement outside the reachable range");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        (carried(mid) < target_displacement ? lo : hi) = mid;
    }
    double r = 0.5 * (lo + hi);
    if (std::fabs(carried(r) - target_displacement) > 1e-6 * target_displacement) {
        throw std::domain_error("squeeze_to_match failed to converge");
    }
    if (std::fabs(r) < 1e-12) r = 0.0;

    FockState squeezed = source.state;
    if (r != 0.0) {
        Squeeze sq{std::fabs(r), 2 * psi + (r > 0 ? kPi : 0.0)};
        squeezed = squeeze_op(source.state, Mode{0}, sq);
    }
    MatchResult out{};
    out.r_required = r;
    out.source_displacement = fit.alpha;
    out.mean_photons = mean_photon_number(squeezed, Mode{0}) / squeezed.norm_squared();
    out.excess_fraction = 1.0 - target_displacement * target_displacement / out.mean_photons;
    out.leakage = squeezed.leakage();
    return out;
}

GaussianMoments GaussianMoments::vacuum(std::size_t modes) {
    auto d = static_cast<Eigen::Index>(2 * modes);
    return {Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Identity(d, d)};
}

Eigen::MatrixXd symplectic(const Element& element, std::size_t modes) {
    auto d = static_cast<Eigen::Index>(2 * modes);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(d, d);
    auto check = [&](std::size_t m) {
        if (m >= modes) throw std::invalid_argument("element mode out of range");
        return static_cast<Eigen::Index>(2 * m);
    };
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, DisplaceOp>) {
                check(e.mode);
            } else if constexpr (std::is_same_v<T, PhaseOp>) {
                auto i = check(e.mode);
                double c = std::cos(e.phi), sn = std::sin(e.phi);
                s.block<2, 2>(i, i) << c, -sn, sn, c;
            } else if constexpr (std::is_same_v<T, SqueezeOp>) {
                auto i = check(e.mode);
                double ch = std::cosh(e.squeeze.r), sh = std::sinh(e.squeeze.r);
                double c = std::cos(e.squeeze.theta), sn = std::sin(e.squeeze.theta);
                s.block<2, 2>(i, i) << ch - sh * c, -sh * sn, -sh * sn, ch + sh * c;
            } else {
                auto a = check(e.a);
                auto b = check(e.b);
                if (a == b) throw std::invalid_argument("beamsplitter needs two distinct modes");
                // Complex mode map [[c, i s], [i s, c]] as real (x, p) blocks
                // [[A, -B], [B, A]] with A = c, B = s off the diagonal.
                double c = std::cos(e.theta), sn = std::sin(e.theta);
                s.block<2, 2>(a, a) << c, 0, 0, c;
                s.block<2, 2>(b, b) << c, 0, 0, c;
                s.block<2, 2>(a, b) << 0, -sn, sn, 0;
                s.block<2, 2>(b, a) << 0, -sn, sn, 0;
            }
        },
        element);
    return s;
}

GaussianMoments gaussian_propagate(const GaussianMoments& moments, const Element& element) {
    const Eigen::MatrixXd s = symplectic(element, moments.num_modes());
    GaussianMoments out{s * moments.mean, s * moments.cov * s.transpose()};
    if (const auto* d = std::get_if<DisplaceOp>(&element)) {
        auto i = static_cast<Eigen::Index>(2 * d->mode);
        out.mean(i) += 2 * d->alpha.real();
        out.mean(i + 1) += 2 * d->alpha.imag();
    }
    return out;
}

GaussianMoments gaussian_propagate(const GaussianMoments& moments, std::string_view element) {
    return gaussian_propagate(moments, parse_element(element));
}

bool is_physical(const GaussianMoments& moments, double tol) {
    const auto& v = moments.cov;
    if (v.rows() != v.cols() || v.rows() != moments.mean.size()) return false;
    if ((v - v.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff())) return false;
    Eigen::MatrixXcd h = v.cast<Amplitude>();
    for (Eigen::Index k = 0; k + 1 < v.rows(); k += 2) {
        h(k, k + 1) += Amplitude{0, 1};
        h(k + 1, k) -= Amplitude{0, 1};
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol * std::max(1.0, v.cwiseAbs().maxCoeff());
}

double mean_photons_from_moments(const GaussianMoments& moments, std::size_t mode) {
    if (mode >= moments.num_modes()) throw std::invalid_argument("mode out of range");
    if (!is_physical(moments)) throw std::domain_error("covariance violates the uncertainty relation");
    auto i = static_cast<Eigen::Index>(2 * mode);
    double x = moments.mean(i), p = moments.mean(i + 1);
    return (x * x + p * p) / 4 + (moments.cov(i, i) + moments.cov(i + 1, i + 1) - 2) / 4;
}

}  // namespace dipne
