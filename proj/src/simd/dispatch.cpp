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

#include <stdexcept>
#include <string>

#include "dipne/simd.hpp"

namespace dipne::simd {

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(DIPNE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(DIPNE_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_supported(isa)) {
        throw std::runtime_error("SIMD variant '" + std::string(isa_name(isa)) + "' is not available");
    }
    switch (isa) {
#if defined(DIPNE_HAVE_AVX2)
        case Isa::Avx2: return detail::avx2_table();
#endif
#if defined(DIPNE_HAVE_NEON)
        case Isa::Neon: return detail::neon_table();
#endif
        default: return detail::scalar_table();
    }
}

Isa active_isa() {
    static const Isa chosen = [] {
        if (isa_supported(Isa::Avx2)) return Isa::Avx2;
        if (isa_supported(Isa::Neon)) return Isa::Neon;
        return Isa::Scalar;
    }();
    return chosen;
}

const KernelTable& active() {
    static const KernelTable& table = kernels_for(active_isa());
    return table;
}

}  // namespace dipne::simd
