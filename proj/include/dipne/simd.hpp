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
#include <cstddef>
#include <span>
#include <string_view>

// Complex-vector kernels behind every amplitude loop in the library.
//
// Each kernel exists as a scalar reference implementation plus optional
// SIMD variants (AVX2+FMA on x86-64, NEON on aarch64). The variant used by
// the library is picked once, on first use, from what the running CPU
// supports. All variants operate on interleaved std::complex<double> storage
// and accept arbitrary (unaligned) pointers and lengths.
namespace dipne::simd {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
    /// sum_i conj(x[i]) * y[i]
    cplx (*dot)(const cplx* x, const cplx* y, std::size_t n);
    /// y[i] += a * x[i]
    void (*axpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
    /// sum_i |x[i]|^2
    double (*norm_sq)(const cplx* x, std::size_t n);
    /// sum_i w[i] * |x[i]|^2
    double (*weighted_norm_sq)(const double* w, const cplx* x, std::size_t n);
    /// y[i] *= x[i]
    void (*mul)(const cplx* x, cplx* y, std::size_t n);
};

/// True when the variant was compiled in and the CPU can run it.
bool isa_supported(Isa isa);

/// Kernel table for a specific variant. Throws std::runtime_error when the
/// variant is unavailable on this build or CPU.
const KernelTable& kernels_for(Isa isa);

/// The variant selected for this process.
Isa active_isa();
const KernelTable& active();

inline cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
    return active().dot(x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

inline void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
    active().axpy(a, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

inline double norm_sq(std::span<const cplx> x) { return active().norm_sq(x.data(), x.size()); }

inline double weighted_norm_sq(std::span<const double> w, std::span<const cplx> x) {
    return active().weighted_norm_sq(w.data(), x.data(), w.size() < x.size() ? w.size() : x.size());
}

inline void mul(std::span<const cplx> x, std::span<cplx> y) {
    active().mul(x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

namespace detail {
// Variant entry points; defined in src/simd/*.cpp.
const KernelTable& scalar_table();
#if defined(DIPNE_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(DIPNE_HAVE_NEON)
const KernelTable& neon_table();
#endif
}  // namespace detail

}  // namespace dipne::simd
