#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace rcar::kernels {

namespace {

constexpr KernelTable kScalar{&scalar::sum, &scalar::lag_sums, &scalar::residual_sums, &scalar::regression_sums};

#if defined(RCAR_WITH_AVX2)
constexpr KernelTable kAvx2{&avx2::sum, &avx2::lag_sums, &avx2::residual_sums, &avx2::regression_sums};

bool cpu_has_avx2() noexcept {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

Isa select() noexcept {
    if (const char* env = std::getenv("RCAR_KERNELS"); env && std::string_view(env) == "scalar") return Isa::Scalar;
    return table_for(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

const KernelTable* table_for(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return &kScalar;
        case Isa::Avx2:
#if defined(RCAR_WITH_AVX2)
            return cpu_has_avx2() ? &kAvx2 : nullptr;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

Isa active_isa() noexcept {
    static const Isa isa = select();
    return isa;
}

const KernelTable& active() noexcept { return *table_for(active_isa()); }

}  // namespace rcar::kernels
