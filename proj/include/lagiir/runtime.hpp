#pragma once

#include <span>
#include <vector>

#include "lagiir/design.hpp"

namespace lagiir {

enum class Priming {
    Zero,      ///< all-zero delay line
    HoldFirst, ///< steady state for a signal equal to its first sample for all n < 0
};

/// Transposed direct-form II realization of an LDE. Single owner; not
/// thread-safe.
class FilterState {
public:
    explicit FilterState(const LdeCoefficients& coefficients);

    double step(double x);
    void reset();
    /// Loads the closed-form steady state for constant input x0.
    void prime(double x0);

    [[nodiscard]] const LdeCoefficients& coefficients() const { return coefficients_; }
    [[nodiscard]] std::span<const double> delay_line() const { return state_; }
    /// Normalized, equal-length coefficient vectors used by the recursion.
    [[nodiscard]] std::span<const double> b() const { return b_; }
    [[nodiscard]] std::span<const double> a() const { return a_; }

private:
    LdeCoefficients coefficients_;
    std::vector<double> b_;
    std::vector<double> a_;
    std::vector<double> state_;
};

/// Padded, a[0]-normalized coefficient vectors of equal length.
void normalized_taps(const LdeCoefficients& lde, std::vector<double>& b, std::vector<double>& a);

/// Delay-line contents for steady state under constant input x0 (length taps-1).
void steady_state(std::span<const double> b, std::span<const double> a, double x0, std::span<double> state);

std::vector<double> filter_causal(const LdeCoefficients& lde, std::span<const double> signal,
                                  Priming priming = Priming::Zero);

/// Forward pass left-to-right plus the backward filter run right-to-left,
/// summed. HoldFirst primes each pass with the sample it starts from.
std::vector<double> filter_noncausal(const NonCausalPair& pair, std::span<const double> signal,
                                     Priming priming = Priming::HoldFirst);

} // namespace lagiir
