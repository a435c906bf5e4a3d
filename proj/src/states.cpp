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

#include "dipne/states.hpp"

#include <algorithm>
#include <numbers>

#include "dipne/combinatorics.hpp"

namespace dipne {

namespace {

using comb::log_factorial;

double raw_loss(const std::vector<Amplitude>& a) {
    double n = 0.0;
    for (const auto& x : a) n += std::norm(x);
    return std::max(0.0, 1.0 - n);
}

void check_cutoff(int cutoff) {
    if (cutoff < 0) throw LayoutError("cutoff must be >= 0");
}

// e^{i m theta}, exactly 1 when theta is 0.
Amplitude phase_power(double theta, int m) {
    if (theta == 0.0) return 1.0;
    return unit_phase(std::fmod(theta * m, 2 * std::numbers::pi));
}

std::vector<Amplitude> squeezed_coherent_raw(Amplitude alpha, const Squeeze& sq, int cutoff) {
    // c_{n+1} = [(alpha + alpha* e^{i theta} tanh r) c_n - e^{i theta} tanh r sqrt(n) c_{n-1}] / sqrt(n+1)
    // with a floating scale so that large displacements neither overflow the
    // growing head nor underflow the starting coefficient.
    const Amplitude et = std::polar(1.0, sq.theta);
    const double t = std::tanh(sq.r);
    const Amplitude b = et * t;
    const Amplitude a = alpha + std::conj(alpha) * b;
    const Amplitude log_c0 = -std::norm(alpha) / 2 - std::conj(alpha) * std::conj(alpha) * b / 2.0 -
                             0.5 * std::log(std::cosh(sq.r));

    std::vector<Amplitude> out(static_cast<std::size_t>(cutoff) + 1);
    double scale = log_c0.real();
    Amplitude prev = 0.0;
    Amplitude cur = std::polar(1.0, log_c0.imag());
    out[0] = std::exp(log_c0);
    for (int n = 0; n < cutoff; ++n) {
        Amplitude next = (a * cur - b * std::sqrt(static_cast<double>(n)) * prev) / std::sqrt(n + 1.0);
        prev = cur;
        cur = next;
        double m = std::max(std::abs(prev), std::abs(cur));
        if (m > 1e150 || (m < 1e-150 && m > 0.0)) {
            prev /= m;
            cur /= m;
            scale += std::log(m);
        }
        out[static_cast<std::size_t>(n) + 1] = scale < -745.0 ? Amplitude{} : cur * std::exp(scale);
    }
    return out;
}

}  // namespace

FockState normalize_log_amplitudes(const LogAmplitudes& seq, double tail_tol) {
    if (seq.size() == 0) throw std::domain_error("empty amplitude sequence");
    double peak = -INFINITY;
    for (double l : seq.log_magnitude) peak = std::max(peak, l);
    if (!std::isfinite(peak)) throw std::domain_error("amplitude sequence is identically zero");
    std::vector<Amplitude> a(seq.size());
    double total = 0.0;
    for (std::size_t n = 0; n < seq.size(); ++n) {
        double w = std::exp(seq.log_magnitude[n] - peak);
        a[n] = seq.phase[n] * w;
        total += w * w;
    }
    double inv = 1.0 / std::sqrt(total);
    for (auto& x : a) x *= inv;
    FockState s = FockState::single_mode(std::move(a));
    double tail = s.guard_band_mass();
    if (tail > tail_tol) {
        throw std::domain_error("amplitude sequence has not converged at level " + std::to_string(seq.size() - 1) +
                                " (tail mass " + std::to_string(tail) + "); raise the cutoff");
    }
    return s;
}

FockState coherent(Amplitude alpha, int cutoff) {
    check_cutoff(cutoff);
    std::vector<Amplitude> a(static_cast<std::size_t>(cutoff) + 1);
    if (alpha == Amplitude{}) {
        a[0] = 1.0;
        return FockState::single_mode(std::move(a));
    }
    const double la = std::log(std::abs(alpha));
    const double ph = std::arg(alpha);
    for (int n = 0; n <= cutoff; ++n) {
        double lm = -std::norm(alpha) / 2 + n * la - 0.5 * log_factorial(n);
        a[static_cast<std::size_t>(n)] = std::polar(std::exp(lm), std::fmod(n * ph, 2 * std::numbers::pi));
    }
    double loss = raw_loss(a);
    return FockState::single_mode(std::move(a), loss);
}

LogAmplitudes squeezed_vacuum_log(const Squeeze& sq, int max_n) {
    if (sq.r < 0) throw std::invalid_argument("squeeze magnitude must be >= 0");
    LogAmplitudes out;
    out.resize(static_cast<std::size_t>(max_n) + 1);
    const double base = -0.5 * std::log(std::cosh(sq.r));
    out.log_magnitude[0] = base;
    out.phase[0] = 1.0;
    if (sq.r == 0.0) return out;
    const double lt = std::log(std::tanh(sq.r));
    for (int m = 1; 2 * m <= max_n; ++m) {
        auto i = static_cast<std::size_t>(2 * m);
        out.log_magnitude[i] = base + m * lt + 0.5 * log_factorial(2 * m) - m * std::numbers::ln2 - log_factorial(m);
        out.phase[i] = (m % 2 ? -1.0 : 1.0) * phase_power(sq.theta, m);
    }
    return out;
}

FockState squeezed_vacuum(const Squeeze& sq, int cutoff) {
    check_cutoff(cutoff);
    auto seq = squeezed_vacuum_log(sq, cutoff);
    std::vector<Amplitude> a(seq.size());
    for (std::size_t n = 0; n < a.size(); n += 2) {
        a[n] = seq.phase[n] * std::exp(seq.log_magnitude[n]);
    }
    double loss = raw_loss(a);
    return FockState::single_mode(std::move(a), loss);
}

FockState squeezed_coherent(Amplitude alpha, const Squeeze& sq, int cutoff) {
    check_cutoff(cutoff);
    if (sq.r < 0) throw std::invalid_argument("squeeze magnitude must be >= 0");
    if (alpha == Amplitude{}) return squeezed_vacuum(sq, cutoff);
    if (sq.r == 0.0) return coherent(alpha, cutoff);
    auto a = squeezed_coherent_raw(alpha, sq, cutoff);
    double loss = raw_loss(a);
    return FockState::single_mode(std::move(a), loss);
}

FockState cat_state(const CatSpec& spec, int cutoff) {
    check_cutoff(cutoff);
    // D(-alpha) S |0> has coefficients (-1)^n times those of D(alpha) S |0>.
    std::vector<Amplitude> c;
    if (spec.alpha == Amplitude{}) {
        auto sv = squeezed_vacuum(spec.squeeze, cutoff);
        c.assign(sv.amplitudes().begin(), sv.amplitudes().end());
    } else {
        c = squeezed_coherent_raw(spec.alpha, spec.squeeze, cutoff);
    }
    const Amplitude e = unit_phase(spec.phi);
    const Amplitude even = 1.0 + e;
    const Amplitude odd = 1.0 - e;
    for (std::size_t n = 0; n < c.size(); ++n) c[n] *= (n % 2 == 0) ? even : odd;

    // Exact norm^2: 2 + 2 Re(e^{i phi} <0|S^dag D(-2 alpha) S|0>), and
    // S^dag D(beta) S = D(beta cosh r + beta* e^{i theta} sinh r).
    const Amplitude beta = -2.0 * spec.alpha;
    const Amplitude bt = beta * std::cosh(spec.squeeze.r) +
                         std::conj(beta) * std::polar(1.0, spec.squeeze.theta) * std::sinh(spec.squeeze.r);
    const double exact = 2.0 + 2.0 * (e * std::exp(-std::norm(bt) / 2)).real();

    double kept = 0.0;
    for (const auto& x : c) kept += std::norm(x);
    if (!(kept > 1e-300) || exact <= 0.0) {
        throw std::domain_error("cat superposition vanishes (alpha = 0 with odd parity)");
    }
    double inv = 1.0 / std::sqrt(kept);
    for (auto& x : c) x *= inv;
    double loss = std::max(0.0, 1.0 - kept / exact);
    return FockState::single_mode(std::move(c), loss);
}

LogAmplitudes infinite_squeeze_limit_coeffs(int max_m, double theta) {
    if (max_m < 0) throw std::invalid_argument("max_m must be >= 0");
    LogAmplitudes out;
    out.resize(static_cast<std::size_t>(max_m) + 1);
    for (int m = 0; m <= max_m; ++m) {
        auto i = static_cast<std::size_t>(m);
        out.log_magnitude[i] = 0.5 * log_factorial(2 * m) - m * std::numbers::ln2 - log_factorial(m);
        out.phase[i] = (m % 2 ? -1.0 : 1.0) * phase_power(theta, m);
    }
    return out;
}

LogAmplitudes infinite_squeeze_limit_fock(int max_n, double theta) {
    if (max_n < 0) throw std::invalid_argument("max_n must be >= 0");
    auto half = infinite_squeeze_limit_coeffs(max_n / 2, theta);
    LogAmplitudes out;
    out.resize(static_cast<std::size_t>(max_n) + 1);
    for (std::size_t m = 0; m < half.size(); ++m) {
        out.log_magnitude[2 * m] = half.log_magnitude[m];
        out.phase[2 * m] = half.phase[m];
    }
    return out;
}

}  // namespace dipne
