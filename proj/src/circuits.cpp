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

#include "dipne/circuits.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "dipne/simd.hpp"

namespace dipne {

namespace {

using detail::fibers;
constexpr double kPi = std::numbers::pi;

std::span<Amplitude> block(std::vector<Amplitude>& v, std::size_t start, std::size_t n) {
    return std::span<Amplitude>(v).subspan(start, n);
}

// Above this total photon number the upward recursion loses digits in
// rows with both inputs occupied (error grows like sqrt(binom(N, N/2)) eps).
constexpr int kRecursionMaxPhotons = 24;

// Eigenbasis of the splitter generator restricted to N photons:
//   <j+1, N-j-1| G |j, N-j> = sqrt((j+1)(N-j)),  B = exp(i theta G).
// G is real symmetric tridiagonal and independent of theta.
struct SplitterBasis {
    Eigen::MatrixXd vectors;
    Eigen::VectorXd values;
};

std::shared_ptr<const SplitterBasis> make_splitter_basis(int n) {
    auto basis = std::make_shared<SplitterBasis>();
    if (n == 0) {
        basis->vectors = Eigen::MatrixXd::Identity(1, 1);
        basis->values = Eigen::VectorXd::Zero(1);
        return basis;
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n + 1);
    Eigen::VectorXd sub(n);
    for (int j = 0; j < n; ++j) sub(j) = std::sqrt(static_cast<double>(j + 1) * static_cast<double>(n - j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    basis->vectors = solver.eigenvectors();
    basis->values = solver.eigenvalues();
    return basis;
}

std::shared_ptr<const SplitterBasis> splitter_basis(int n) {
    constexpr int kCachedMax = 512;
    if (n > kCachedMax) return make_splitter_basis(n);
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const SplitterBasis>> cache;
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    auto basis = make_splitter_basis(n);
    std::lock_guard lock(mu);
    return cache.emplace(n, std::move(basis)).first->second;
}

// Amplitudes of B|p,q> over |j, p+q-j>, j = 0..p+q, for every p <= ca, q <= cb.
// The recursion is accurate for small p + q and on the edges p = 0 or q = 0;
// callers replace wider blocks with replace_block.
//   B|p,q> = (c a^dag + i s b^dag)^p (c b^dag + i s a^dag)^q |0,0> / sqrt(p! q!)
class BeamsplitterTable {
  public:
    BeamsplitterTable(int ca, int cb, double theta) : ca_(ca), cb_(cb) {
        offsets_.resize(static_cast<std::size_t>(ca + 1) * static_cast<std::size_t>(cb + 1));
        std::size_t total = 0;
        for (int p = 0; p <= ca; ++p) {
            for (int q = 0; q <= cb; ++q) {
                offsets_[slot(p, q)] = total;
                total += static_cast<std::size_t>(p + q + 1);
            }
        }
        if (total > (std::size_t{1} << 26)) {
            throw LayoutError("beamsplitter table too large for cutoffs " + std::to_string(ca) + ", " +
                              std::to_string(cb));
        }
        data_.resize(total);
        const double c = std::cos(theta);
        const Amplitude is{0.0, std::sin(theta)};
        data_[offsets_[slot(0, 0)]] = 1.0;
        for (int q = 0; q <= cb; ++q) {
            if (q > 0) {
                // (c b^dag + i s a^dag) / sqrt(q) applied to B|0,q-1>.
                const Amplitude* src = row(0, q - 1);
                Amplitude* dst = row_mut(0, q);
                int n = q - 1;
                double inv = 1.0 / std::sqrt(static_cast<double>(q));
                for (int m = 0; m <= q; ++m) {
                    Amplitude v = 0.0;
                    if (m > 0) v += is * std::sqrt(static_cast<double>(m)) * src[m - 1];
                    if (m <= n) v += c * std::sqrt(static_cast<double>(n + 1 - m)) * src[m];
                    dst[m] = v * inv;
                }
            }
            for (int p = 1; p <= ca; ++p) {
                // (c a^dag + i s b^dag) / sqrt(p) applied to B|p-1,q>.
                const Amplitude* src = row(p - 1, q);
                Amplitude* dst = row_mut(p, q);
                int n = p - 1 + q;
                double inv = 1.0 / std::sqrt(static_cast<double>(p));
                for (int m = 0; m <= n + 1; ++m) {
                    Amplitude v = 0.0;
                    if (m > 0) v += c * std::sqrt(static_cast<double>(m)) * src[m - 1];
                    if (m <= n) v += is * std::sqrt(static_cast<double>(n + 1 - m)) * src[m];
                    dst[m] = v * inv;
                }
            }
        }
    }

    const Amplitude* row(int p, int q) const { return data_.data() + offsets_[slot(p, q)]; }

    // Overwrites every row with p + q = n by the matching column of
    // B_n = V diag(exp(i theta lambda)) V^T.
    void replace_block(int n, double theta, const SplitterBasis& basis) {
        const int plo = std::max(0, n - cb_);
        const auto w = static_cast<Eigen::Index>(std::min(ca_, n) - plo + 1);
        Eigen::MatrixXcd vt = basis.vectors.middleRows(plo, w).transpose().cast<Amplitude>();
        for (Eigen::Index k = 0; k <= n; ++k) vt.row(k) *= std::polar(1.0, theta * basis.values(k));
        const Eigen::MatrixXcd u = basis.vectors.cast<Amplitude>() * vt;
        for (Eigen::Index r = 0; r < w; ++r) {
            const int p = plo + static_cast<int>(r);
            std::copy_n(u.col(r).data(), n + 1, row_mut(p, n - p));
        }
    }

  private:
    std::size_t slot(int p, int q) const {
        return static_cast<std::size_t>(p) * static_cast<std::size_t>(cb_ + 1) + static_cast<std::size_t>(q);
    }
    Amplitude* row_mut(int p, int q) { return data_.data() + offsets_[slot(p, q)]; }

    int ca_;
    int cb_;
    std::vector<std::size_t> offsets_;
    std::vector<Amplitude> data_;
};

// Dense single-mode generators.
Eigen::MatrixXcd displacement_generator(std::size_t d, Amplitude alpha) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t n = 0; n + 1 < d; ++n) {
        double s = std::sqrt(static_cast<double>(n + 1));
        auto i = static_cast<Eigen::Index>(n);
        g(i + 1, i) = alpha * s;
        g(i, i + 1) = -std::conj(alpha) * s;
    }
    return g;
}

Eigen::MatrixXcd squeeze_generator(std::size_t d, const Squeeze& sq) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    const Amplitude xi = std::polar(sq.r, sq.theta);
    for (std::size_t n = 0; n + 2 < d; ++n) {
        double s = std::sqrt(static_cast<double>((n + 1) * (n + 2)));
        auto i = static_cast<Eigen::Index>(n);
        g(i + 2, i) = -xi * s / 2.0;
        g(i, i + 2) = std::conj(xi) * s / 2.0;
    }
    return g;
}

// Applies a dim x dim matrix along every fiber of `mode`.
FockState apply_dense(const FockState& state, Mode mode, const Eigen::MatrixXcd& u) {
    using RowMat = Eigen::Matrix<Amplitude, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    auto geo = fibers(state.layout(), mode);
    std::vector<Amplitude> out(state.amplitudes().size());
    const auto rows = static_cast<Eigen::Index>(geo.dim);
    const auto cols = static_cast<Eigen::Index>(geo.stride);
    for (std::size_t o = 0; o < geo.outer; ++o) {
        std::size_t base = o * geo.dim * geo.stride;
        Eigen::Map<const RowMat> x(state.amplitudes().data() + base, rows, cols);
        Eigen::Map<RowMat> y(out.data() + base, rows, cols);
        y.noalias() = u * x;
    }
    return FockState(state.layout(), std::move(out), state.truncation_loss());
}

// One banded generator: out_j += coef(j) * in_{j + shift} along `mode`.
struct Band {
    int shift;
    std::vector<Amplitude> coef;
};

void apply_bands(const detail::FiberGeometry& geo, const std::vector<Band>& bands, std::span<const Amplitude> in,
                 std::vector<Amplitude>& out) {
    std::fill(out.begin(), out.end(), Amplitude{});
    for (std::size_t o = 0; o < geo.outer; ++o) {
        std::size_t base = o * geo.dim * geo.stride;
        for (const Band& band : bands) {
            for (std::size_t j = 0; j < geo.dim; ++j) {
                auto src = static_cast<std::ptrdiff_t>(j) + band.shift;
                if (src < 0 || src >= static_cast<std::ptrdiff_t>(geo.dim) || band.coef[j] == Amplitude{}) continue;
                simd::axpy(band.coef[j], in.subspan(base + static_cast<std::size_t>(src) * geo.stride, geo.stride),
                           block(out, base + j * geo.stride, geo.stride));
            }
        }
    }
}

// exp(G) v by s substeps of a truncated Taylor series; G given as bands.
FockState apply_taylor(const FockState& state, Mode mode, const std::vector<Band>& bands) {
    auto geo = fibers(state.layout(), mode);
    double gnorm = 0.0;
    for (std::size_t j = 0; j < geo.dim; ++j) {
        double col = 0.0;
        for (const Band& b : bands) {
            auto row = static_cast<std::ptrdiff_t>(j) - b.shift;
            if (row >= 0 && row < static_cast<std::ptrdiff_t>(geo.dim)) col += std::abs(b.coef[static_cast<std::size_t>(row)]);
        }
        gnorm = std::max(gnorm, col);
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(gnorm)));
    std::vector<Band> scaled = bands;
    for (auto& b : scaled) {
        for (auto& c : b.coef) c /= static_cast<double>(steps);
    }
    std::vector<Amplitude> v(state.amplitudes().begin(), state.amplitudes().end());
    std::vector<Amplitude> term(v.size());
    std::vector<Amplitude> next(v.size());
    for (int s = 0; s < steps; ++s) {
        term = v;
        double vnorm = simd::norm_sq(v);
        for (int k = 1; k < 200; ++k) {
            apply_bands(geo, scaled, term, next);
            for (auto& x : next) x /= static_cast<double>(k);
            std::swap(term, next);
            simd::axpy(1.0, term, v);
            if (simd::norm_sq(term) <= 1e-34 * vnorm) break;
        }
    }
    return FockState(state.layout(), std::move(v), state.truncation_loss());
}

std::vector<Band> displacement_bands(std::size_t d, Amplitude alpha) {
    Band up{-1, std::vector<Amplitude>(d)};
    Band down{+1, std::vector<Amplitude>(d)};
    for (std::size_t j = 0; j < d; ++j) {
        up.coef[j] = alpha * std::sqrt(static_cast<double>(j));
        down.coef[j] = -std::conj(alpha) * std::sqrt(static_cast<double>(j + 1));
    }
    return {up, down};
}

std::vector<Band> squeeze_bands(std::size_t d, const Squeeze& sq) {
    const Amplitude xi = std::polar(sq.r, sq.theta);
    Band up{-2, std::vector<Amplitude>(d)};
    Band down{+2, std::vector<Amplitude>(d)};
    for (std::size_t j = 0; j < d; ++j) {
        double jd = static_cast<double>(j);
        up.coef[j] = -xi * std::sqrt(jd * (jd - 1.0)) / 2.0;
        down.coef[j] = std::conj(xi) * std::sqrt((jd + 1.0) * (jd + 2.0)) / 2.0;
    }
    return {up, down};
}

bool use_dense(const FockState& state, Mode mode, ExpMethod method) {
    if (method == ExpMethod::Dense) return true;
    if (method == ExpMethod::Taylor) return false;
    return state.layout().cutoff(mode) <= kDenseExpMaxCutoff;
}

}  // namespace

FockState phase_shift(const FockState& state, Mode mode, double phi) {
    auto geo = fibers(state.layout(), mode);
    if (phi == 0.0) return state;
    std::vector<Amplitude> out(state.amplitudes().begin(), state.amplitudes().end());
    std::vector<Amplitude> ph(geo.dim);
    for (std::size_t j = 0; j < geo.dim; ++j) {
        ph[j] = unit_phase(std::fmod(phi * static_cast<double>(j), 2 * kPi));
    }
    for (std::size_t o = 0; o < geo.outer; ++o) {
        std::size_t base = o * geo.dim * geo.stride;
        for (std::size_t j = 1; j < geo.dim; ++j) {
            for (std::size_t i = 0; i < geo.stride; ++i) out[base + j * geo.stride + i] *= ph[j];
        }
    }
    return FockState(state.layout(), std::move(out), state.truncation_loss());
}

FockState beamsplit(const FockState& state, Mode a, Mode b, double theta) {
    const ModeLayout& layout = state.layout();
    layout.check_mode(a);
    layout.check_mode(b);
    if (a == b) throw std::invalid_argument("beamsplitter needs two distinct modes");
    if (theta == 0.0) return state;
    std::vector<Amplitude> out(state.amplitudes().size());
    const int ca = layout.cutoff(a);
    const int cb = layout.cutoff(b);
    const std::size_t sa = layout.stride(a);
    const std::size_t sb = layout.stride(b);
    BeamsplitterTable table(ca, cb, theta);
    auto in = state.amplitudes();

    std::vector<std::size_t> bases;
    for (std::size_t base = 0; base < in.size(); ++base) {
        if (layout.occupation_of(base, a) == 0 && layout.occupation_of(base, b) == 0) bases.push_back(base);
    }
    auto at = [&](std::size_t base, int p, int q) {
        return base + static_cast<std::size_t>(p) * sa + static_cast<std::size_t>(q) * sb;
    };

    std::vector<Amplitude> tmp(static_cast<std::size_t>(ca + cb) + 1);
    double dropped = 0.0;
    auto store = [&](std::size_t base, int n, int j, Amplitude v) {
        const int k = n - j;
        if (j <= ca && k <= cb) {
            out[at(base, j, k)] = v;
        } else {
            dropped += std::norm(v);
        }
    };
    for (int n = 0; n <= ca + cb; ++n) {
        const int plo = std::max(0, n - cb);
        const int phi = std::min(ca, n);
        if (n > kRecursionMaxPhotons) {
            bool interior = false;
            for (std::size_t base : bases) {
                for (int p = std::max(plo, 1); p <= std::min(phi, n - 1) && !interior; ++p) {
                    interior = in[at(base, p, n - p)] != Amplitude{};
                }
                if (interior) break;
            }
            if (interior) table.replace_block(n, theta, *splitter_basis(n));
        }
        const auto len = static_cast<std::size_t>(n) + 1;
        for (std::size_t base : bases) {
            std::fill_n(tmp.begin(), len, Amplitude{});
            bool any = false;
            for (int p = plo; p <= phi; ++p) {
                Amplitude amp = in[at(base, p, n - p)];
                if (amp == Amplitude{}) continue;
                any = true;
                simd::active().axpy(amp, table.row(p, n - p), tmp.data(), len);
            }
            if (!any) continue;
            for (int j = 0; j <= n; ++j) store(base, n, j, tmp[j]);
        }
    }
    return FockState(layout, std::move(out), state.truncation_loss() + dropped);
}

FockState displace(const FockState& state, Mode mode, Amplitude alpha, ExpMethod method) {
    state.layout().check_mode(mode);
    if (alpha == Amplitude{}) return state;
    const std::size_t d = state.layout().dim(mode);
    if (use_dense(state, mode, method)) {
        return apply_dense(state, mode, displacement_generator(d, alpha).exp());
    }
    return apply_taylor(state, mode, displacement_bands(d, alpha));
}

FockState displace(const FockState& state, Mode mode, Amplitude alpha) {
    return displace(state, mode, alpha, ExpMethod::Auto);
}

FockState squeeze_op(const FockState& state, Mode mode, const Squeeze& sq, ExpMethod method) {
    state.layout().check_mode(mode);
    if (sq.r == 0.0) return state;
    const std::size_t d = state.layout().dim(mode);
    if (use_dense(state, mode, method)) {
        return apply_dense(state, mode, squeeze_generator(d, sq).exp());
    }
    return apply_taylor(state, mode, squeeze_bands(d, sq));
}

FockState squeeze_op(const FockState& state, Mode mode, const Squeeze& sq) {
    return squeeze_op(state, mode, sq, ExpMethod::Auto);
}

FockState phase_to_dide(const FockState& state, Mode m0, Mode m1) {
    return phase_shift(beamsplit(state, m0, m1, kPi / 4), m0, -kPi / 2);
}

FockState dide_to_phase(const FockState& state, Mode m0, Mode m1) {
    return beamsplit(phase_shift(state, m0, kPi / 2), m0, m1, -kPi / 4);
}

void GadgetSpec::validate() const {
    for (double t : {theta_split, theta_interfere}) {
        if (!(t >= 0.0 && t < kPi / 2)) {
            throw std::invalid_argument("gadget angles must lie in [0, pi/2)");
        }
    }
    if (erasure_modes.size() != 2 || erasure_modes[0] == erasure_modes[1] || erasure_modes[0] > 3 ||
        erasure_modes[1] > 3) {
        throw std::invalid_argument("gadget needs two distinct erasure modes among 4");
    }
}

FockState interference_gadget(const FockState& state, const GadgetSpec& spec) {
    spec.validate();
    if (state.num_modes() != 4) throw std::invalid_argument("interference gadget acts on 4 modes");
    std::vector<std::size_t> sys;
    for (std::size_t k = 0; k < 4; ++k) {
        if (k != spec.erasure_modes[0] && k != spec.erasure_modes[1]) sys.push_back(k);
    }
    const Mode m0{sys[0]}, m1{sys[1]};
    const Mode e0{spec.erasure_modes[0]}, e1{spec.erasure_modes[1]};

    double occupied = 0.0;
    const auto& layout = state.layout();
    for (std::size_t i = 0; i < state.amplitudes().size(); ++i) {
        if (layout.occupation_of(i, e0) != 0 || layout.occupation_of(i, e1) != 0) occupied += std::norm(state[i]);
    }
    if (occupied > 1e-14 * state.norm_squared()) {
        throw std::invalid_argument("interference gadget erasure modes must start in vacuum");
    }

    FockState s = beamsplit(state, m0, e0, spec.theta_split);
    s = beamsplit(s, m1, e1, spec.theta_split);
    if (spec.pi_shift) {
        s = phase_shift(s, e0, kPi);
        s = phase_shift(s, e1, kPi);
    }
    s = beamsplit(s, m1, e0, spec.theta_interfere);
    return beamsplit(s, m0, e1, spec.theta_interfere);
}

FockState interference_gadget(const FockState& system, const GadgetSpec& spec, int erasure_cutoff) {
    if (system.num_modes() != 2) throw std::invalid_argument("gadget system state must have 2 modes");
    GadgetSpec local = spec;
    local.erasure_modes = {2, 3};
    auto vac = FockState::vacuum(ModeLayout({erasure_cutoff, erasure_cutoff}));
    return interference_gadget(tensor(system, vac), local);
}

FockState inject(const FockState& system, const FockState& prepared, double theta) {
    if (system.num_modes() != prepared.num_modes()) {
        throw std::invalid_argument("inject needs as many prepared modes as system modes");
    }
    const std::size_t m = system.num_modes();
    FockState s = tensor(system, prepared);
    for (std::size_t i = 0; i < m; ++i) s = beamsplit(s, Mode{i}, Mode{m + i}, theta);
    return s;
}

FockState apply_element(const FockState& state, const Element& element) {
    return std::visit(
        [&](const auto& e) -> FockState {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, DisplaceOp>) {
                return displace(state, Mode{e.mode}, e.alpha);
            } else if constexpr (std::is_same_v<T, SqueezeOp>) {
                return squeeze_op(state, Mode{e.mode}, e.squeeze);
            } else if constexpr (std::is_same_v<T, PhaseOp>) {
                return phase_shift(state, Mode{e.mode}, e.phi);
            } else {
                return beamsplit(state, Mode{e.a}, Mode{e.b}, e.theta);
            }
        },
        element);
}

FockState run_circuit(FockState state, std::span<const Element> circuit) {
    for (const auto& e : circuit) state = apply_element(state, e);
    return state;
}

Element parse_element(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string name;
    in >> name;
    auto fail = [&]() -> Element {
        throw std::invalid_argument("cannot parse circuit element '" + std::string(text) +
                                    "' (expected displace|squeeze|phase|beamsplit with numeric arguments)");
    };
    auto done = [&](Element e) -> Element {
        std::string rest;
        if (in.fail() || (in >> rest)) return fail();
        return e;
    };
    if (name == "displace") {
        std::size_t m;
        double re, im;
        in >> m >> re >> im;
        return done(DisplaceOp{m, {re, im}});
    }
    if (name == "squeeze") {
        std::size_t m;
        double r, th;
        in >> m >> r >> th;
        if (!in.fail() && r < 0) return fail();
        return done(SqueezeOp{m, {r, th}});
    }
    if (name == "phase") {
        std::size_t m;
        double phi;
        in >> m >> phi;
        return done(PhaseOp{m, phi});
    }
    if (name == "beamsplit") {
        std::size_t a, b;
        double th;
        in >> a >> b >> th;
        return done(BeamsplitOp{a, b, th});
    }
    return fail();
}

std::string format_element(const Element& element) {
    std::ostringstream out;
    out.precision(17);
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, DisplaceOp>) {
                out << "displace " << e.mode << ' ' << e.alpha.real() << ' ' << e.alpha.imag();
            } else if constexpr (std::is_same_v<T, SqueezeOp>) {
                out << "squeeze " << e.mode << ' ' << e.squeeze.r << ' ' << e.squeeze.theta;
            } else if constexpr (std::is_same_v<T, PhaseOp>) {
                out << "phase " << e.mode << ' ' << e.phi;
            } else {
                out << "beamsplit " << e.a << ' ' << e.b << ' ' << e.theta;
            }
        },
        element);
    return out.str();
}

}  // namespace dipne
