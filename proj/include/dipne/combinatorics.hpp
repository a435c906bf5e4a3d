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

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

// Log-space factorials and binomials. Photon-number cutoffs reach the low
// thousands, where n! overflows a double long before n = 200.
namespace dipne::comb {

/// ln(n!) for n >= 0. Tabulated for small n, lgamma beyond.
double log_factorial(std::int64_t n);

/// ln C(n, k); -inf when k < 0 or k > n.
double log_binomial(std::int64_t n, std::int64_t k);

/// A real number stored as sign * exp(log_magnitude). Zero has sign 0.
struct SignedLog {
    double log_magnitude = -std::numeric_limits<double>::infinity();
    int sign = 0;

    static SignedLog from_value(double v) {
        if (v == 0.0) return {};
        return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
    }
    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }
};

inline SignedLog operator*(SignedLog a, SignedLog b) {
    if (a.sign == 0 || b.sign == 0) return {};
    return {a.log_magnitude + b.log_magnitude, a.sign * b.sign};
}

/// Signed sum of terms, scaled by the largest magnitude before exponentiating.
/// Alternating sums still lose relative precision to cancellation; callers
/// that need exact cancellation use integer arithmetic instead.
SignedLog signed_log_sum(std::span<const SignedLog> terms);

/// ln(sum_i exp(x_i)), stable for large spreads. Returns -inf for empty input.
double log_sum_exp(std::span<const double> xs);

}  // namespace dipne::comb
