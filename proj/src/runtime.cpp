#include "lagiir/runtime.hpp"

#include <algorithm>
#include <numeric>

#include "lagiir/error.hpp"

namespace lagiir {

void normalized_taps(const LdeCoefficients& lde, std::vector<double>& b, std::vector<double>& a) {
    if (lde.a.empty() || lde.a[0] == 0.0) {
        throw DesignError("denominator must have a nonzero leading coefficient");
    }
    if (lde.b.empty()) {
        throw DesignError("numerator must not be empty");
    }
    const std::size_t taps = lde.taps();
    b.assign(taps, 0.0);
    a.assign(taps, 0.0);
    const double a0 = lde.a[0];
    for (std::size_t i = 0; i < lde.b.size(); ++i) {
        b[i] = lde.b[i] / a0;
    }
    for (std::size_t i = 0; i < lde.a.size(); ++i) {
        a[i] = lde.a[i] / a0;
    }
}

void steady_state(std::span<const double> b, std::span<const double> a, double x0, std::span<double> state) {
    const double gain = std::accumulate(b.begin(), b.end(), 0.0) / std::accumulate(a.begin(), a.end(), 0.0);
    const double y0 = gain * x0;
    // Fixed point of the recursion below with x = x0, y = y0.
    const std::size_t n = state.size();
    double next = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        next = b[i + 1] * x0 - a[i + 1] * y0 + next;
        state[i] = next;
    }
}

FilterState::FilterState(const LdeCoefficients& coefficients) : coefficients_(coefficients) {
    normalized_taps(coefficients_, b_, a_);
    state_.assign(b_.size() - 1, 0.0);
}

double FilterState::step(double x) {
    const std::size_t n = state_.size();
    const double y = b_[0] * x + (n > 0 ? state_[0] : 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double carry = i + 1 < n ? state_[i + 1] : 0.0;
        state_[i] = b_[i + 1] * x - a_[i + 1] * y + carry;
    }
    return y;
}

void FilterState::reset() {
    std::fill(state_.begin(), state_.end(), 0.0);
}

void FilterState::prime(double x0) {
    steady_state(b_, a_, x0, state_);
}

std::vector<double> filter_causal(const LdeCoefficients& lde, std::span<const double> signal, Priming priming) {
    FilterState state(lde);
    std::vector<double> out(signal.size());
    if (signal.empty()) {
        return out;
    }
    if (priming == Priming::HoldFirst) {
        state.prime(signal.front());
    }
    for (std::size_t n = 0; n < signal.size(); ++n) {
        out[n] = state.step(signal[n]);
    }
    return out;
}

std::vector<double> filter_noncausal(const NonCausalPair& pair, std::span<const double> signal, Priming priming) {
    auto out = filter_causal(pair.forward, signal, priming);
    std::vector<double> reversed(signal.rbegin(), signal.rend());
    const auto backward = filter_causal(pair.backward, reversed, priming);
    const std::size_t n = signal.size();
    for (std::size_t i = 0; i < n; ++i) {
        out[i] += backward[n - 1 - i];
    }
    return out;
}

} // namespace lagiir
