#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "lagiir/kernels.hpp"

namespace lagiir::kernels {

namespace {

std::atomic<int>& active_slot() {
    static std::atomic<int> slot{static_cast<int>(detect_isa())};
    return slot;
}

} // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    switch (isa) {
    case Isa::Scalar:
        return true;
    case Isa::Avx2:
#if defined(LAGIIR_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

Isa detect_isa() {
    if (const char* forced = std::getenv("LAGIIR_ISA"); forced != nullptr && std::string(forced) == "scalar") {
        return Isa::Scalar;
    }
    return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

Isa active_isa() {
    return static_cast<Isa>(active_slot().load(std::memory_order_relaxed));
}

void set_active_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw std::invalid_argument("ISA not supported on this build/CPU: " + std::string(isa_name(isa)));
    }
    active_slot().store(static_cast<int>(isa), std::memory_order_relaxed);
}

void iir_lanes_step(std::span<const double> b, std::span<const double> a, double* state, const double* x, double* y,
                    std::size_t lanes) {
#if defined(LAGIIR_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) {
        iir_lanes_step_avx2(b, a, state, x, y, lanes);
        return;
    }
#endif
    iir_lanes_step_scalar(b, a, state, x, y, lanes);
}

void gradient_products(const double* ix, const double* iy, const double* iz, std::size_t n, double* xx, double* xy,
                       double* xz, double* yy, double* yz) {
#if defined(LAGIIR_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) {
        gradient_products_avx2(ix, iy, iz, n, xx, xy, xz, yy, yz);
        return;
    }
#endif
    gradient_products_scalar(ix, iy, iz, n, xx, xy, xz, yy, yz);
}

} // namespace lagiir::kernels
