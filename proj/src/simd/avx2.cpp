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

// AVX2 + FMA kernels. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after a runtime CPU check (see dispatch.cpp).
//
// Layout: one __m256d holds two interleaved complex values [r0 i0 r1 i1].

#include <immintrin.h>

#include "dipne/simd.hpp"

namespace dipne::simd::detail {
namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

cplx dot_avx2(const cplx* x, const cplx* y, std::size_t n) {
    const double* xd = as_doubles(x);
    const double* yd = as_doubles(y);
    // acc_re lanes: [xr*yr, xi*yi, ...]; acc_im lanes: [xr*yi, xi*yr, ...]
    __m256d acc_re0 = _mm256_setzero_pd(), acc_re1 = _mm256_setzero_pd();
    __m256d acc_im0 = _mm256_setzero_pd(), acc_im1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
        const __m256d y0 = _mm256_loadu_pd(yd + 2 * i);
        const __m256d x1 = _mm256_loadu_pd(xd + 2 * i + 4);
        const __m256d y1 = _mm256_loadu_pd(yd + 2 * i + 4);
        acc_re0 = _mm256_fmadd_pd(x0, y0, acc_re0);
        acc_re1 = _mm256_fmadd_pd(x1, y1, acc_re1);
        acc_im0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), acc_im0);
        acc_im1 = _mm256_fmadd_pd(x1, _mm256_permute_pd(y1, 0b0101), acc_im1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
        const __m256d y0 = _mm256_loadu_pd(yd + 2 * i);
        acc_re0 = _mm256_fmadd_pd(x0, y0, acc_re0);
        acc_im0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), acc_im0);
    }
    const __m256d acc_re = _mm256_add_pd(acc_re0, acc_re1);
    const __m256d acc_im = _mm256_add_pd(acc_im0, acc_im1);
    double re = hsum(acc_re);
    alignas(32) double im_lanes[4];
    _mm256_store_pd(im_lanes, acc_im);
    double im = (im_lanes[0] - im_lanes[1]) + (im_lanes[2] - im_lanes[3]);
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        re += xr * yr + xi * yi;
        im += xr * yi - xi * yr;
    }
    return {re, im};
}

void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double* xd = as_doubles(x);
    double* yd = as_doubles(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
        const __m256d x1 = _mm256_loadu_pd(xd + 2 * i + 4);
        // a*x = [ar*xr - ai*xi, ar*xi + ai*xr]
        const __m256d t0 = _mm256_mul_pd(ai, _mm256_permute_pd(x0, 0b0101));
        const __m256d t1 = _mm256_mul_pd(ai, _mm256_permute_pd(x1, 0b0101));
        const __m256d p0 = _mm256_fmaddsub_pd(ar, x0, t0);
        const __m256d p1 = _mm256_fmaddsub_pd(ar, x1, t1);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), p0));
        _mm256_storeu_pd(yd + 2 * i + 4, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i + 4), p1));
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
        const __m256d t0 = _mm256_mul_pd(ai, _mm256_permute_pd(x0, 0b0101));
        const __m256d p0 = _mm256_fmaddsub_pd(ar, x0, t0);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i), p0));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = {y[i].real() + a.real() * xr - a.imag() * xi, y[i].imag() + a.real() * xi + a.imag() * xr};
    }
}

double norm_sq_avx2(const cplx* x, std::size_t n) {
    const double* xd = as_doubles(x);
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
        const __m256d x1 = _mm256_loadu_pd(xd + 2 * i + 4);
        acc0 = _mm256_fmadd_pd(x0, x0, acc0);
        acc1 = _mm256_fmadd_pd(x1, x1, acc1);
    }
    for (; i + 2 <= n; i += 2) {
        const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
        acc0 = _mm256_fmadd_pd(x0, x0, acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return s;
}

double weighted_norm_sq_avx2(const double* w, const cplx* x, std::size_t n) {
    const double* xd = as_doubles(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // [w0 w0 w1 w1]
        const __m256d wd = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w + i)), 0b01010000);
        const __m256d x0 = _mm256_loadu_pd(xd + 2 * i);
        acc = _mm256_fmadd_pd(wd, _mm256_mul_pd(x0, x0), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
    return s;
}

void mul_avx2(const cplx* x, cplx* y, std::size_t n) {
    const double* xd = as_doubles(x);
    double* yd = as_doubles(y);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        const __m256d yr = _mm256_movedup_pd(yv);
        const __m256d yi = _mm256_permute_pd(yv, 0b1111);
        const __m256d t = _mm256_mul_pd(yi, _mm256_permute_pd(xv, 0b0101));
        _mm256_storeu_pd(yd + 2 * i, _mm256_fmaddsub_pd(yr, xv, t));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        y[i] = {yr * xr - yi * xi, yr * xi + yi * xr};
    }
}

}  // namespace

const KernelTable& avx2_table() {
    static const KernelTable table{dot_avx2, axpy_avx2, norm_sq_avx2, weighted_norm_sq_avx2, mul_avx2};
    return table;
}

}  // namespace dipne::simd::detail
