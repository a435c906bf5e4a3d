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

// Scalar reference kernels. These define the semantics every SIMD variant is
// tested against, so they stay deliberately plain.

#include "dipne/simd.hpp"

namespace dipne::simd::detail {
namespace {

cplx dot_scalar(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

void axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = {y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr};
    }
}

double norm_sq_scalar(const cplx* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    }
    return s;
}

double weighted_norm_sq_scalar(const double* w, const cplx* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
    }
    return s;
}

void mul_scalar(const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        y[i] = {yr * xr - yi * xi, yr * xi + yi * xr};
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{dot_scalar, axpy_scalar, norm_sq_scalar, weighted_norm_sq_scalar,
                                   mul_scalar};
    return table;
}

}  // namespace dipne::simd::detail
