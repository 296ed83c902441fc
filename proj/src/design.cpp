#include "lagiir/design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lagiir/error.hpp"
#include "lagiir/polynomial.hpp"

namespace lagiir {

namespace {

// Extra convolution terms beyond the numerator that must vanish.
constexpr std::size_t kValidationTerms = 5;
constexpr double kValidationTolerance = 1e-9;

// b = a * h truncated to numerator_len taps. The following kValidationTerms
// terms of the product must be zero for h to be the impulse response of b/a.
std::vector<double> numerator_from_impulse(const std::vector<double>& a, const std::vector<double>& h,
                                           std::size_t numerator_len, std::size_t zero_from) {
    const std::size_t total = numerator_len + kValidationTerms;
    std::vector<double> b(total, 0.0);
    for (std::size_t m = 0; m < total; ++m) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.size() && j <= m; ++j) {
            acc += a[j] * h[m - j];
        }
        b[m] = acc;
    }
    double scale = 1.0;
    for (double v : h) {
        scale = std::max(scale, std::abs(v));
    }
    for (std::size_t m = zero_from; m < total; ++m) {
        if (std::abs(b[m]) > kValidationTolerance * scale) {
            throw ValidationError("impulse response is not rational with the expected denominator: term " +
                                  std::to_string(m) + " = " + std::to_string(b[m]));
        }
    }
    for (std::size_t m = zero_from; m < numerator_len; ++m) {
        b[m] = 0.0;
    }
    b.resize(numerator_len);
    return b;
}

// Cancels (1 - p z^-1) factors shared by numerator and denominator.
void cancel_common_poles(LdeCoefficients& lde, double p) {
    const std::size_t original = std::max(lde.b.size(), lde.a.size());
    while (lde.a.size() > 1) {
        const double scale = poly::abs_sum(lde.b);
        if (scale == 0.0) {
            break;
        }
        double remainder = 0.0;
        auto quotient = poly::deflate(lde.b, p, remainder);
        if (std::abs(remainder) > 1e-12 * scale) {
            break;
        }
        double a_remainder = 0.0;
        lde.a = poly::deflate(lde.a, p, a_remainder);
        lde.b = std::move(quotient);
    }
    lde.b.resize(original, 0.0);
    lde.a.resize(original, 0.0);
}

void require_causal(const FilterDesign& design) {
    design.validate();
    if (design.weight.causality != Causality::Causal) {
        throw DesignError("causal derivation requires a causal weight");
    }
}

} // namespace

void FilterDesign::validate() const {
    weight.validate();
    if (degree < 0 || degree > kMaxBasisDegree) {
        throw DesignError("degree B must be in [0, " + std::to_string(kMaxBasisDegree) + "]");
    }
    if (derivative < 0 || derivative > degree) {
        throw DesignError("derivative order D must be in [0, B]");
    }
    if (!(sample_period > 0.0) || !std::isfinite(sample_period)) {
        throw DesignError("sample period T must be positive");
    }
    if (!std::isfinite(delay)) {
        throw DesignError("delay q must be finite");
    }
}

double LdeCoefficients::dc_gain() const {
    const double num = std::accumulate(b.begin(), b.end(), 0.0);
    const double den = std::accumulate(a.begin(), a.end(), 0.0);
    return num / den;
}

std::vector<double> impulse_response_prefix(const FilterDesign& design, const BasisSet& basis, std::size_t length) {
    const auto c = synthesis_weights(basis, design.derivative, design.delay, design.sample_period);
    std::vector<double> h(length);
    for (std::size_t m = 0; m < length; ++m) {
        h[m] = basis.weighted_combination(c, static_cast<double>(m));
    }
    return h;
}

std::vector<double> two_sided_impulse_response(const FilterDesign& design, const BasisSet& basis,
                                               std::size_t half_length) {
    const auto c = synthesis_weights(basis, design.derivative, design.delay, design.sample_period);
    std::vector<double> h(2 * half_length + 1);
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double m = static_cast<double>(i) - static_cast<double>(half_length);
        h[i] = basis.weighted_combination(c, m);
    }
    return h;
}

LdeCoefficients derive_causal_lde(const FilterDesign& design) {
    require_causal(design);
    const auto basis = orthonormal_basis(design.degree, design.weight);
    const auto order = static_cast<std::size_t>(design.pole_multiplicity());
    const double p = design.weight.pole();

    LdeCoefficients lde;
    lde.sample_period = design.sample_period;
    lde.a = poly::binomial_power(p, static_cast<int>(order));
    const auto h = impulse_response_prefix(design, basis, order + 1 + kValidationTerms);
    // The numerator of a repeated-pole transfer function of order N has degree
    // at most N-1, so b[N] is validated as zero too.
    lde.b = numerator_from_impulse(lde.a, h, order + 1, order);
    return lde;
}

NonCausalPair derive_noncausal_pair(const FilterDesign& design) {
    design.validate();
    if (design.weight.causality != Causality::TwoSided) {
        throw DesignError("non-causal derivation requires a two-sided weight");
    }
    if (design.delay != 0.0) {
        throw DesignError("non-causal designs are evaluated at q = 0");
    }
    const auto basis = orthonormal_basis(design.degree, design.weight);
    const auto order = static_cast<std::size_t>(design.degree + 1);
    const double p = design.weight.pole();
    const std::size_t half = order + 1 + kValidationTerms;
    const auto h = two_sided_impulse_response(design, basis, half);

    std::vector<double> fwd(half + 1);
    std::vector<double> bwd(half + 1);
    for (std::size_t m = 0; m <= half; ++m) {
        fwd[m] = h[half + m];
        bwd[m] = h[half - m];
    }
    fwd[0] *= 0.5;
    bwd[0] *= 0.5;

    NonCausalPair pair;
    for (auto* side : {&pair.forward, &pair.backward}) {
        side->sample_period = design.sample_period;
        side->a = poly::binomial_power(p, static_cast<int>(order));
    }
    pair.forward.b = numerator_from_impulse(pair.forward.a, fwd, order + 1, order + 1);
    pair.backward.b = numerator_from_impulse(pair.backward.a, bwd, order + 1, order + 1);
    cancel_common_poles(pair.forward, p);
    cancel_common_poles(pair.backward, p);
    return pair;
}

SpectrumFilterBank spectrum_filter_bank(const FilterDesign& design) {
    require_causal(design);
    const auto basis = orthonormal_basis(design.degree, design.weight);
    const auto order = static_cast<std::size_t>(design.pole_multiplicity());
    const double p = design.weight.pole();
    const auto a = poly::binomial_power(p, static_cast<int>(order));

    SpectrumFilterBank bank;
    bank.synthesis = synthesis_weights(basis, design.derivative, design.delay, design.sample_period);
    for (int k = 0; k <= design.degree; ++k) {
        std::vector<double> unit(static_cast<std::size_t>(design.degree) + 1, 0.0);
        unit[static_cast<std::size_t>(k)] = 1.0;
        std::vector<double> h(order + 1 + kValidationTerms);
        for (std::size_t m = 0; m < h.size(); ++m) {
            h[m] = basis.weighted_combination(unit, static_cast<double>(m));
        }
        LdeCoefficients lde;
        lde.sample_period = design.sample_period;
        lde.a = a;
        lde.b = numerator_from_impulse(a, h, order + 1, order);
        bank.per_k.push_back(std::move(lde));
    }
    return bank;
}

} // namespace lagiir
