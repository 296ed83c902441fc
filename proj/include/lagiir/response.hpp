#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lagiir/design.hpp"

namespace lagiir {

inline constexpr double kMagnitudeFloorDb = -300.0;

struct ResponseSample {
    double omega = 0.0;            ///< radians per sample, [0, pi]
    std::complex<double> value;
    double magnitude_db = 0.0;     ///< floored at kMagnitudeFloorDb
    double phase = 0.0;            ///< unwrapped along the grid
    double group_delay = 0.0;      ///< samples; NaN when invalid
    bool group_delay_valid = false;
};

/// H(e^{j omega}) of a causal LDE.
std::complex<double> frequency_response(const LdeCoefficients& lde, double omega);
/// Combined response of a forward/backward pair: H_fwd(e^{j w}) + H_bwd(e^{-j w}).
std::complex<double> frequency_response(const NonCausalPair& pair, double omega);

/// -d arg H / d omega from the analytic derivatives of numerator and
/// denominator. Empty where |B(e^{j omega})| < 1e-12, except at omega = 0
/// where the one-sided limit is returned.
std::optional<double> group_delay(const LdeCoefficients& lde, double omega);
std::optional<double> group_delay(const NonCausalPair& pair, double omega);
/// Central-difference phase slope; cross-check for group_delay.
double group_delay_finite_difference(const LdeCoefficients& lde, double omega, double step = 1e-6);

std::vector<ResponseSample> evaluate_response(const LdeCoefficients& lde, std::span<const double> omega_grid);
std::vector<ResponseSample> evaluate_response(const NonCausalPair& pair, std::span<const double> omega_grid);

/// `points` frequencies spanning [0, pi]. With skip_dc the grid starts at
/// pi/points instead (differentiators have no phase at omega = 0).
std::vector<double> frequency_grid(std::size_t points, bool skip_dc = false);

double squared_magnitude(const LdeCoefficients& lde, double omega);

struct FlatnessReport {
    double reference = 0.0;             ///< |H(0)|^2
    std::vector<double> derivatives;    ///< entry i is the order i+1 derivative
    std::vector<bool> flat;

    [[nodiscard]] bool flat_through(int order) const;
};

inline constexpr int kMaxFlatnessOrder = 6;
inline constexpr double kFlatnessThreshold = 1e-4;

/// Derivatives of |H(omega)|^2 at omega = 0 by Richardson-extrapolated central
/// differences. Orders 1..3 use step 1e-3; higher orders widen the step to
/// keep the rounding noise of the stencil below the flatness threshold.
FlatnessReport flatness_report(const LdeCoefficients& lde, int max_order);

double nyquist_gain(const LdeCoefficients& lde);
bool zero_at_minus_one(const LdeCoefficients& lde);

/// Variance reduction factor sum h[m]^2, truncated once the geometric tail
/// bound drops below tolerance * partial sum.
double white_noise_gain(const LdeCoefficients& lde, double tolerance = 1e-12);

/// Roots in z of a[0] z^N + a[1] z^(N-1) + ... + a[N] (trailing zeros dropped),
/// by Durand-Kerner iteration.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> a);

/// Number of (1 - p z^-1) factors in a, found by repeated exact deflation.
int pole_multiplicity(std::span<const double> a, double p, double tolerance = 1e-8);

/// Denominator roots with any repeated factor at `hint` removed by deflation
/// first (repeated roots defeat plain root finders).
std::vector<std::complex<double>> denominator_poles(std::span<const double> a, double hint);

bool is_stable(const LdeCoefficients& lde);

} // namespace lagiir
