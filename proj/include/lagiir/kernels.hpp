#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, where the
// build and CPU allow, an AVX2 variant selected at runtime. Variants perform
// the same IEEE operations in the same order, so their outputs are
// bit-identical.

#include <cstddef>
#include <span>
#include <string_view>

namespace lagiir::kernels {

enum class Isa { Scalar, Avx2 };

[[nodiscard]] std::string_view isa_name(Isa isa);
[[nodiscard]] bool isa_supported(Isa isa);
/// Best supported ISA, unless LAGIIR_ISA=scalar is set in the environment.
[[nodiscard]] Isa detect_isa();
[[nodiscard]] Isa active_isa();
/// Throws std::invalid_argument when the ISA is not available.
void set_active_isa(Isa isa);

/// Advances `lanes` independent transposed direct-form II filters that share
/// normalized coefficients (b, a of equal length `taps`) by one sample.
/// `state` holds taps-1 rows of `lanes` values; row i is delay element i.
using IirLanesStep = void (*)(std::span<const double> b, std::span<const double> a, double* state,
                              const double* x, double* y, std::size_t lanes);

void iir_lanes_step_scalar(std::span<const double> b, std::span<const double> a, double* state, const double* x,
                           double* y, std::size_t lanes);
#if defined(LAGIIR_HAVE_AVX2)
void iir_lanes_step_avx2(std::span<const double> b, std::span<const double> a, double* state, const double* x,
                         double* y, std::size_t lanes);
#endif

/// Elementwise spatiotemporal products xx, xy, xz, yy, yz.
using ProductsFn = void (*)(const double* ix, const double* iy, const double* iz, std::size_t n, double* xx,
                            double* xy, double* xz, double* yy, double* yz);

void gradient_products_scalar(const double* ix, const double* iy, const double* iz, std::size_t n, double* xx,
                              double* xy, double* xz, double* yy, double* yz);
#if defined(LAGIIR_HAVE_AVX2)
void gradient_products_avx2(const double* ix, const double* iy, const double* iz, std::size_t n, double* xx,
                            double* xy, double* xz, double* yy, double* yz);
#endif

/// Dispatching entry points.
void iir_lanes_step(std::span<const double> b, std::span<const double> a, double* state, const double* x, double* y,
                    std::size_t lanes);
void gradient_products(const double* ix, const double* iy, const double* iz, std::size_t n, double* xx, double* xy,
                       double* xz, double* yy, double* yz);

} // namespace lagiir::kernels
