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

#include "dipne/combinatorics.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace dipne::comb {
namespace {

constexpr std::int64_t kTableSize = 4096;

const std::array<double, kTableSize>& factorial_table() {
    static const std::array<double, kTableSize> table = [] {
        std::array<double, kTableSize> t{};
        for (std::int64_t n = 0; n < kTableSize; ++n) {
            t[n] = std::lgamma(static_cast<double>(n) + 1.0);
        }
        return t;
    }();
    return table;
}

}  // namespace

double log_factorial(std::int64_t n) {
    if (n < 0) throw std::domain_error("log_factorial: negative argument");
    if (n < kTableSize) return factorial_table()[static_cast<std::size_t>(n)];
    int sign = 0;
    return ::lgamma_r(static_cast<double>(n) + 1.0, &sign);
}

double log_binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n || n < 0) return -std::numeric_limits<double>::infinity();
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

SignedLog signed_log_sum(std::span<const SignedLog> terms) {
    double peak = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms) {
        if (t.sign != 0) peak = std::max(peak, t.log_magnitude);
    }
    if (!std::isfinite(peak)) return {};
    double acc = 0.0;
    for (const auto& t : terms) {
        if (t.sign != 0) acc += t.sign * std::exp(t.log_magnitude - peak);
    }
    if (acc == 0.0) return {};
    return {peak + std::log(std::fabs(acc)), acc > 0 ? 1 : -1};
}

double log_sum_exp(std::span<const double> xs) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double x : xs) peak = std::max(peak, x);
    if (!std::isfinite(peak)) return peak;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - peak);
    return peak + std::log(acc);
}

}  // namespace dipne::comb
