#pragma once

#include <cstddef>
#include <vector>

#include "lagiir/basis.hpp"
#include "lagiir/weight.hpp"

namespace lagiir {

/// Full parameter bundle of a smoother (D = 0) or differentiator (D >= 1).
struct FilterDesign {
    int degree = 2;          ///< B, polynomial model degree
    int derivative = 0;      ///< D
    WeightSpec weight;
    double delay = 0.0;      ///< q, samples; the estimate refers to time n - q
    double sample_period = 1.0; ///< T

    void validate() const;
    [[nodiscard]] int pole_multiplicity() const { return degree + weight.kappa + 1; }
};

/// H(z) = sum b_m z^-m / sum a_m z^-m, a[0] = 1.
struct LdeCoefficients {
    std::vector<double> b;
    std::vector<double> a{1.0};
    double sample_period = 1.0;

    [[nodiscard]] double dc_gain() const;
    [[nodiscard]] std::size_t taps() const { return b.size() > a.size() ? b.size() : a.size(); }
};

enum class Combine { Sum };

/// Two-sided filter realized as a forward pass (increasing n) plus a backward
/// pass (decreasing n); the outputs are summed.
struct NonCausalPair {
    LdeCoefficients forward;
    LdeCoefficients backward;
    Combine combine = Combine::Sum;
};

/// One rational filter per basis function; filter k outputs the Laguerre
/// spectrum coefficient beta_k(n). The synthesis weights recombine them.
struct SpectrumFilterBank {
    std::vector<LdeCoefficients> per_k;
    std::vector<double> synthesis;
};

/// h[m] = sum_k c_k psi_k(m) w(m), m = 0..length-1 (causal designs).
std::vector<double> impulse_response_prefix(const FilterDesign& design, const BasisSet& basis, std::size_t length);

/// Two-sided impulse response h(m) for m = -half_length..half_length; element
/// i holds h(i - half_length).
std::vector<double> two_sided_impulse_response(const FilterDesign& design, const BasisSet& basis,
                                               std::size_t half_length);

/// Denominator (1 - p z^-1)^(B+kappa+1); numerator from a * h truncated, with
/// the trailing convolution terms checked to vanish. Throws ValidationError.
LdeCoefficients derive_causal_lde(const FilterDesign& design);

/// Splits the two-sided response into forward and backward halves, each
/// carrying half of the centre sample, and cancels pole factors shared with
/// the numerator.
NonCausalPair derive_noncausal_pair(const FilterDesign& design);

SpectrumFilterBank spectrum_filter_bank(const FilterDesign& design);

} // namespace lagiir
