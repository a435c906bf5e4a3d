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

// NEON kernels for aarch64. One float64x2_t holds one complex value [re im].

#include <arm_neon.h>

#include "dipne/simd.hpp"

namespace dipne::simd::detail {
namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

cplx dot_neon(const cplx* x, const cplx* y, std::size_t n) {
    const double* xd = as_doubles(x);
    const double* yd = as_doubles(y);
    float64x2_t acc_re = vdupq_n_f64(0.0);
    float64x2_t acc_im = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t xv = vld1q_f64(xd + 2 * i);
        const float64x2_t yv = vld1q_f64(yd + 2 * i);
        acc_re = vfmaq_f64(acc_re, xv, yv);
        acc_im = vfmaq_f64(acc_im, xv, vextq_f64(yv, yv, 1));
    }
    return {vgetq_lane_f64(acc_re, 0) + vgetq_lane_f64(acc_re, 1),
            vgetq_lane_f64(acc_im, 0) - vgetq_lane_f64(acc_im, 1)};
}

void axpy_neon(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double* xd = as_doubles(x);
    double* yd = as_doubles(y);
    const float64x2_t ar = vdupq_n_f64(a.real());
    const double ai_signed[2] = {-a.imag(), a.imag()};
    const float64x2_t ai = vld1q_f64(ai_signed);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t xv = vld1q_f64(xd + 2 * i);
        float64x2_t yv = vld1q_f64(yd + 2 * i);
        yv = vfmaq_f64(yv, ar, xv);
        yv = vfmaq_f64(yv, ai, vextq_f64(xv, xv, 1));
        vst1q_f64(yd + 2 * i, yv);
    }
}

double norm_sq_neon(const cplx* x, std::size_t n) {
    const double* xd = as_doubles(x);
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t xv = vld1q_f64(xd + 2 * i);
        acc = vfmaq_f64(acc, xv, xv);
    }
    return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
}

double weighted_norm_sq_neon(const double* w, const cplx* x, std::size_t n) {
    const double* xd = as_doubles(x);
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t xv = vld1q_f64(xd + 2 * i);
        acc = vfmaq_f64(acc, vdupq_n_f64(w[i]), vmulq_f64(xv, xv));
    }
    return vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
}

void mul_neon(const cplx* x, cplx* y, std::size_t n) {
    const double* xd = as_doubles(x);
    double* yd = as_doubles(y);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t xv = vld1q_f64(xd + 2 * i);
        const float64x2_t yv = vld1q_f64(yd + 2 * i);
        const double yi_signed[2] = {-vgetq_lane_f64(yv, 1), vgetq_lane_f64(yv, 1)};
        float64x2_t out = vmulq_n_f64(xv, vgetq_lane_f64(yv, 0));
        out = vfmaq_f64(out, vld1q_f64(yi_signed), vextq_f64(xv, xv, 1));
        vst1q_f64(yd + 2 * i, out);
    }
}

}  // namespace

const KernelTable& neon_table() {
    static const KernelTable table{dot_neon, axpy_neon, norm_sq_neon, weighted_norm_sq_neon, mul_neon};
    return table;
}

}  // namespace dipne::simd::detail
