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

#include "dipne/simd.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

using dipne::simd::cplx;
using dipne::simd::Isa;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    std::vector<cplx> v(n);
    for (auto& x : v) x = {d(rng), d(rng)};
    return v;
}

std::vector<Isa> available() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
        if (dipne::simd::isa_supported(isa)) out.push_back(isa);
    }
    return out;
}

}  // namespace

TEST(simd, scalar_always_available) {
    ASSERT_TRUE(dipne::simd::isa_supported(Isa::Scalar));
    ASSERT_TRUE(dipne::simd::isa_supported(dipne::simd::active_isa()));
}

TEST(simd, unavailable_variant_throws) {
    for (Isa isa : {Isa::Avx2, Isa::Neon}) {
        if (!dipne::simd::isa_supported(isa)) {
            ASSERT_THROW(dipne::simd::kernels_for(isa), std::runtime_error);
        }
    }
}

// Every compiled variant must agree with the scalar reference on all lengths,
// including the ragged tails that fall outside the vector width.
TEST(simd, variants_match_scalar) {
    const auto& ref = dipne::simd::kernels_for(Isa::Scalar);
    for (Isa isa : available()) {
        const auto& k = dipne::simd::kernels_for(isa);
        for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 9, 16, 31, 64, 1001}) {
            auto x = random_vec(n, 11 + n);
            auto y = random_vec(n, 97 + n);
            std::vector<double> w(n);
            for (std::size_t i = 0; i < n; ++i) w[i] = 0.5 + static_cast<double>(i % 7);
            double scale = 1.0 + static_cast<double>(n);

            cplx d0 = ref.dot(x.data(), y.data(), n);
            cplx d1 = k.dot(x.data(), y.data(), n);
            EXPECT_NEAR(d0.real(), d1.real(), 1e-12 * scale) << dipne::simd::isa_name(isa) << " n=" << n;
            EXPECT_NEAR(d0.imag(), d1.imag(), 1e-12 * scale);

            EXPECT_NEAR(ref.norm_sq(x.data(), n), k.norm_sq(x.data(), n), 1e-12 * scale);
            EXPECT_NEAR(ref.weighted_norm_sq(w.data(), x.data(), n), k.weighted_norm_sq(w.data(), x.data(), n),
                        1e-11 * scale);

            auto y0 = y;
            auto y1 = y;
            cplx a{0.3, -1.7};
            ref.axpy(a, x.data(), y0.data(), n);
            k.axpy(a, x.data(), y1.data(), n);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_NEAR(std::abs(y0[i] - y1[i]), 0.0, 1e-13);
            }

            y0 = y;
            y1 = y;
            ref.mul(x.data(), y0.data(), n);
            k.mul(x.data(), y1.data(), n);
            for (std::size_t i = 0; i < n; ++i) {
                EXPECT_NEAR(std::abs(y0[i] - y1[i]), 0.0, 1e-13);
            }
        }
    }
}

TEST(simd, scalar_reference_values) {
    const auto& ref = dipne::simd::kernels_for(Isa::Scalar);
    std::vector<cplx> x{{1, 2}, {3, -1}};
    std::vector<cplx> y{{0, 1}, {2, 2}};
    // conj(1+2i)(i) + conj(3-i)(2+2i) = (2+i) + (4+8i)
    cplx d = ref.dot(x.data(), y.data(), 2);
    EXPECT_DOUBLE_EQ(d.real(), 6.0);
    EXPECT_DOUBLE_EQ(d.imag(), 9.0);
    EXPECT_DOUBLE_EQ(ref.norm_sq(x.data(), 2), 15.0);
}
