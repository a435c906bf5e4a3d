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

#include "dipne/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dipne/simd.hpp"

namespace dipne {

ModeLayout::ModeLayout(std::vector<int> cutoffs) : cutoffs_(std::move(cutoffs)) {
    if (cutoffs_.empty()) {
        throw LayoutError("layout needs at least one mode");
    }
    strides_.assign(cutoffs_.size(), 1);
    for (std::size_t k = cutoffs_.size(); k-- > 0;) {
        if (cutoffs_[k] < 0) {
            throw LayoutError("negative cutoff on mode " + std::to_string(k));
        }
        strides_[k] = dimension_;
        auto d = static_cast<std::size_t>(cutoffs_[k]) + 1;
        if (dimension_ > kMaxDimension / d) {
            throw LayoutError("joint dimension exceeds the allocation limit");
        }
        dimension_ *= d;
    }
}

ModeLayout ModeLayout::uniform(std::size_t modes, int cutoff) {
    return ModeLayout(std::vector<int>(modes, cutoff));
}

std::size_t ModeLayout::index(std::span<const int> occupation) const {
    if (occupation.size() != cutoffs_.size()) {
        throw LayoutError("occupation has " + std::to_string(occupation.size()) + " entries, layout has " +
                          std::to_string(cutoffs_.size()) + " modes");
    }
    std::size_t idx = 0;
    for (std::size_t k = 0; k < cutoffs_.size(); ++k) {
        if (occupation[k] < 0 || occupation[k] > cutoffs_[k]) {
            throw LayoutError("occupation " + std::to_string(occupation[k]) + " out of range on mode " +
                              std::to_string(k));
        }
        idx += static_cast<std::size_t>(occupation[k]) * strides_[k];
    }
    return idx;
}

std::vector<int> ModeLayout::occupation(std::size_t index) const {
    if (index >= dimension_) {
        throw LayoutError("basis index out of range");
    }
    std::vector<int> occ(cutoffs_.size());
    for (std::size_t k = cutoffs_.size(); k-- > 0;) {
        auto d = static_cast<std::size_t>(cutoffs_[k]) + 1;
        occ[k] = static_cast<int>(index % d);
        index /= d;
    }
    return occ;
}

ModeLayout ModeLayout::concat(const ModeLayout& other) const {
    std::vector<int> c = cutoffs_;
    c.insert(c.end(), other.cutoffs_.begin(), other.cutoffs_.end());
    return ModeLayout(std::move(c));
}

ModeLayout ModeLayout::without(Mode m) const {
    check_mode(m);
    if (cutoffs_.size() == 1) {
        throw LayoutError("cannot remove the only mode");
    }
    std::vector<int> c = cutoffs_;
    c.erase(c.begin() + static_cast<std::ptrdiff_t>(m.index));
    return ModeLayout(std::move(c));
}

void ModeLayout::check_mode(Mode m) const {
    if (m.index >= cutoffs_.size()) {
        throw LayoutError("mode " + std::to_string(m.index) + " out of range for " +
                          std::to_string(cutoffs_.size()) + "-mode layout");
    }
}

namespace detail {
FiberGeometry fibers(const ModeLayout& layout, Mode mode) {
    layout.check_mode(mode);
    std::size_t d = layout.dim(mode);
    std::size_t s = layout.stride(mode);
    return {layout.dimension() / (d * s), d, s};
}
}  // namespace detail

FockState::FockState(ModeLayout layout, std::vector<Amplitude> amplitudes, double truncation_loss)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)), truncation_loss_(truncation_loss) {
    if (amplitudes_.size() != layout_.dimension()) {
        throw LayoutError("amplitude count " + std::to_string(amplitudes_.size()) +
                          " does not match layout dimension " + std::to_string(layout_.dimension()));
    }
}

FockState FockState::vacuum(ModeLayout layout) {
    std::vector<Amplitude> a(layout.dimension());
    a[0] = 1.0;
    return FockState(std::move(layout), std::move(a));
}

FockState FockState::basis(ModeLayout layout, std::span<const int> occupation) {
    std::vector<Amplitude> a(layout.dimension());
    a[layout.index(occupation)] = 1.0;
    return FockState(std::move(layout), std::move(a));
}

FockState FockState::single_mode(std::vector<Amplitude> amplitudes, double truncation_loss) {
    if (amplitudes.empty()) {
        throw LayoutError("single-mode state needs at least one amplitude");
    }
    ModeLayout layout({static_cast<int>(amplitudes.size()) - 1});
    return FockState(std::move(layout), std::move(amplitudes), truncation_loss);
}

double FockState::norm_squared() const { return simd::norm_sq(amplitudes_); }

double FockState::norm() const { return std::sqrt(norm_squared()); }

double FockState::guard_band_mass(int g) const {
    // Walk every mode's top band; a basis state can sit in several bands, so
    // mark indices rather than summing per mode.
    const std::size_t n = amplitudes_.size();
    std::vector<unsigned char> in_band(n, 0);
    for (std::size_t k = 0; k < layout_.num_modes(); ++k) {
        Mode m{k};
        auto geo = detail::fibers(layout_, m);
        int lo = layout_.cutoff(m) - g;
        if (lo < 0) lo = 0;
        for (std::size_t o = 0; o < geo.outer; ++o) {
            std::size_t base = o * geo.dim * geo.stride;
            for (std::size_t j = static_cast<std::size_t>(lo); j < geo.dim; ++j) {
                std::fill_n(in_band.begin() + static_cast<std::ptrdiff_t>(base + j * geo.stride), geo.stride, 1);
            }
        }
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (in_band[i]) mass += std::norm(amplitudes_[i]);
    }
    return mass;
}

double FockState::leakage(int g) const { return std::max(truncation_loss_, guard_band_mass(g)); }

FockState FockState::normalized() const {
    double nrm = norm();
    if (!(nrm > 0.0) || !std::isfinite(nrm)) {
        throw std::domain_error("cannot normalize a zero or non-finite state");
    }
    std::vector<Amplitude> a = amplitudes_;
    for (auto& x : a) x /= nrm;
    return FockState(layout_, std::move(a), truncation_loss_);
}

bool FockState::is_normalized(double tol) const { return std::fabs(norm_squared() - 1.0) <= tol; }

Amplitude unit_phase(double phi) {
    double c = std::cos(phi);
    double s = std::sin(phi);
    if (std::fabs(s) < 1e-12) return {c > 0 ? 1.0 : -1.0, 0.0};
    if (std::fabs(c) < 1e-12) return {0.0, s > 0 ? 1.0 : -1.0};
    return {c, s};
}

FockState apply_annihilation(const FockState& state, Mode mode) {
    auto geo = detail::fibers(state.layout(), mode);
    auto src = state.amplitudes();
    std::vector<Amplitude> out(src.size());
    for (std::size_t o = 0; o < geo.outer; ++o) {
        std::size_t base = o * geo.dim * geo.stride;
        for (std::size_t j = 0; j + 1 < geo.dim; ++j) {
            double w = std::sqrt(static_cast<double>(j + 1));
            simd::axpy(w, src.subspan(base + (j + 1) * geo.stride, geo.stride),
                       std::span<Amplitude>(out).subspan(base + j * geo.stride, geo.stride));
        }
    }
    return FockState(state.layout(), std::move(out), state.truncation_loss());
}

FockState apply_creation(const FockState& state, Mode mode) {
    auto geo = detail::fibers(state.layout(), mode);
    auto src = state.amplitudes();
    std::vector<Amplitude> out(src.size());
    double dropped = 0.0;
    for (std::size_t o = 0; o < geo.outer; ++o) {
        std::size_t base = o * geo.dim * geo.stride;
        for (std::size_t j = 1; j < geo.dim; ++j) {
            double w = std::sqrt(static_cast<double>(j));
            simd::axpy(w, src.subspan(base + (j - 1) * geo.stride, geo.stride),
                       std::span<Amplitude>(out).subspan(base + j * geo.stride, geo.stride));
        }
        auto top = src.subspan(base + (geo.dim - 1) * geo.stride, geo.stride);
        dropped += static_cast<double>(geo.dim) * simd::norm_sq(top);
    }
    return FockState(state.layout(), std::move(out), state.truncation_loss() + dropped);
}

FockState apply_number(const FockState& state, Mode mode) {
    auto geo = detail::fibers(state.layout(), mode);
    std::vector<Amplitude> out(state.amplitudes().begin(), state.amplitudes().end());
    for (std::size_t o = 0; o < geo.outer; ++o) {
        std::size_t base = o * geo.dim * geo.stride;
        for (std::size_t j = 0; j < geo.dim; ++j) {
            for (std::size_t i = 0; i < geo.stride; ++i) out[base + j * geo.stride + i] *= static_cast<double>(j);
        }
    }
    return FockState(state.layout(), std::move(out), state.truncation_loss());
}

Amplitude inner(const FockState& a, const FockState& b) {
    if (!(a.layout() == b.layout())) {
        throw LayoutError("inner product of states with different layouts");
    }
    return simd::dot(a.amplitudes(), b.amplitudes());
}

double fidelity(const FockState& a, const FockState& b, double norm_tol) {
    double na = a.norm_squared();
    double nb = b.norm_squared();
    if (std::fabs(na - 1.0) > norm_tol || std::fabs(nb - 1.0) > norm_tol) {
        throw std::domain_error("fidelity needs normalized states (norms^2 " + std::to_string(na) + ", " +
                                std::to_string(nb) + ")");
    }
    double f = std::norm(inner(a, b));
    return f > 1.0 ? 1.0 : f;
}

std::vector<double> marginal_number_distribution(const FockState& state, Mode mode) {
    auto geo = detail::fibers(state.layout(), mode);
    auto src = state.amplitudes();
    std::vector<double> p(geo.dim, 0.0);
    for (std::size_t o = 0; o < geo.outer; ++o) {
        std::size_t base = o * geo.dim * geo.stride;
        for (std::size_t j = 0; j < geo.dim; ++j) {
            p[j] += simd::norm_sq(src.subspan(base + j * geo.stride, geo.stride));
        }
    }
    return p;
}

double mean_photon_number(const FockState& state, Mode mode) {
    auto p = marginal_number_distribution(state, mode);
    double n = 0.0;
    for (std::size_t j = 1; j < p.size(); ++j) n += static_cast<double>(j) * p[j];
    return n;
}

double total_photon_number(const FockState& state) {
    double n = 0.0;
    for (std::size_t k = 0; k < state.num_modes(); ++k) n += mean_photon_number(state, Mode{k});
    return n;
}

FockState tensor(const FockState& a, const FockState& b) {
    ModeLayout layout = a.layout().concat(b.layout());
    std::vector<Amplitude> out(layout.dimension());
    auto bs = b.amplitudes();
    std::size_t nb = bs.size();
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
        Amplitude ai = a[i];
        if (ai == Amplitude{}) continue;
        simd::axpy(ai, bs, std::span<Amplitude>(out).subspan(i * nb, nb));
    }
    double loss = a.truncation_loss() * b.norm_squared() + b.truncation_loss() * a.norm_squared();
    return FockState(std::move(layout), std::move(out), loss);
}

}  // namespace dipne
