#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lagiir/runtime.hpp"
#include "lagiir/synthetic.hpp"
#include "lagiir/tables.hpp"
#include "oracles.hpp"

using namespace lagiir;

TEST_CASE("identity and exponential smoother") {
    FilterState identity(LdeCoefficients{{1.0}, {1.0}, 1.0});
    for (double x : {0.5, -2.0, 7.25}) {
        CHECK(identity.step(x) == x);
    }
    FilterState expo(LdeCoefficients{{0.5}, {1.0, -0.5}, 1.0});
    CHECK(expo.step(1.0) == 0.5);
    CHECK(expo.step(1.0) == 0.75);
    CHECK(expo.step(1.0) == 0.875);
    expo.reset();
    CHECK(expo.step(1.0) == 0.5);
}

TEST_CASE("transposed realization equals the direct difference equation") {
    const auto noise = synthetic::white_noise(300, 5);
    for (int degree = 0; degree <= 4; ++degree) {
        for (int kappa : {0, 1}) {
            const auto lde = derive_causal_lde(oracle::causal(degree, std::min(degree, 1), kappa, 0.6, 2.0));
            const auto expected = oracle::difference_equation(lde, noise);
            const auto y = filter_causal(lde, noise);
            CHECK(oracle::max_abs_diff(y, expected) < 1e-11);
        }
    }
    // Unnormalized a[0] is honoured.
    const LdeCoefficients scaled{{1.0, 0.5}, {2.0, -1.0}, 1.0};
    CHECK(oracle::max_abs_diff(filter_causal(scaled, noise), oracle::difference_equation(scaled, noise)) < 1e-13);
}

TEST_CASE("impulse response of a family I smoother") {
    const auto design = oracle::causal(2, 0, 0, 0.5, 2.0);
    const auto lde = table_causal(TableEntry::I_Smoother, 0.5, 2.0);
    const std::size_t n = 2 + 0 + 6;
    std::vector<double> impulse(n, 0.0);
    impulse[0] = 1.0;
    const auto expected = impulse_response_prefix(design, orthonormal_basis(2, design.weight), n);
    CHECK(oracle::max_abs_diff(filter_causal(lde, impulse), expected) < 1e-14);
}

TEST_CASE("hold-first priming") {
    for (int degree = 0; degree <= 4; ++degree) {
        for (int kappa : {0, 1}) {
            const auto smoother = derive_causal_lde(oracle::causal(degree, 0, kappa, 0.8, 1.0));
            FilterState state(smoother);
            state.prime(0.37);
            const std::vector<double> before(state.delay_line().begin(), state.delay_line().end());
            CHECK(state.step(0.37) == doctest::Approx(0.37).epsilon(1e-9));
            // The primed state is a fixed point.
            CHECK(oracle::max_abs_diff(before, {state.delay_line().begin(), state.delay_line().end()}) < 1e-12);

            const std::vector<double> constant(100, -1.5);
            for (double y : filter_causal(smoother, constant, Priming::HoldFirst)) {
                CHECK(y == doctest::Approx(-1.5).epsilon(1e-9));
            }
            if (degree >= 1) {
                const auto diff = derive_causal_lde(oracle::causal(degree, 1, kappa, 0.8, 1.0));
                for (double y : filter_causal(diff, constant, Priming::HoldFirst)) {
                    CHECK(std::abs(y) < 1e-9);
                }
            }
        }
    }
}

TEST_CASE("ramp through the causal differentiator") {
    const auto lde = table_causal(TableEntry::I_Differentiator, 0.5, 4.0);
    std::vector<double> ramp(80);
    for (std::size_t n = 0; n < ramp.size(); ++n) {
        ramp[n] = static_cast<double>(n);
    }
    const auto y = filter_causal(lde, ramp, Priming::Zero);
    for (std::size_t n = 41; n < y.size(); ++n) {
        CHECK(y[n] == doctest::Approx(1.0).epsilon(1e-6));
    }
    // T scales the slope.
    const auto y2 = filter_causal(table_causal(TableEntry::III_Differentiator, 0.5, 6.0, 0.5), ramp, Priming::Zero);
    CHECK(y2.back() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("non-causal filtering") {
    const auto smoother = table_noncausal(TableEntry::II_Smoother, 0.5);
    const auto diff = table_noncausal(TableEntry::II_Differentiator, 0.5);
    const std::vector<double> constant(60, 0.8);
    for (double y : filter_noncausal(smoother, constant)) {
        CHECK(y == doctest::Approx(0.8).epsilon(1e-6));
    }
    for (double y : filter_noncausal(diff, constant)) {
        CHECK(std::abs(y) < 1e-12);
    }
    std::vector<double> ramp(100);
    for (std::size_t n = 0; n < ramp.size(); ++n) {
        ramp[n] = 0.5 * static_cast<double>(n);
    }
    const auto slope = filter_noncausal(diff, ramp);
    for (std::size_t n = 30; n < 70; ++n) {
        CHECK(slope[n] == doctest::Approx(0.5).epsilon(1e-6));
    }
    // Symmetric smoothing commutes with time reversal.
    auto noise = synthetic::white_noise(64, 9);
    const auto forward = filter_noncausal(smoother, noise);
    std::reverse(noise.begin(), noise.end());
    auto backward = filter_noncausal(smoother, noise);
    std::reverse(backward.begin(), backward.end());
    CHECK(oracle::max_abs_diff(forward, backward) == 0.0);
}

TEST_CASE("linearity and shift invariance") {
    const auto x = synthetic::white_noise(200, 1);
    const auto u = synthetic::white_noise(200, 2);
    for (int kappa : {0, 1}) {
        const auto lde = derive_causal_lde(oracle::causal(3, 1, kappa, 0.7, 2.0));
        std::vector<double> mix(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            mix[i] = 2.5 * x[i] - 0.75 * u[i];
        }
        const auto fx = filter_causal(lde, x);
        const auto fu = filter_causal(lde, u);
        const auto fm = filter_causal(lde, mix);
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(fm[i] == doctest::Approx(2.5 * fx[i] - 0.75 * fu[i]).epsilon(1e-10).scale(1.0));
        }
        std::vector<double> shifted(x.size() + 13, 0.0);
        std::copy(x.begin(), x.end(), shifted.begin() + 13);
        const auto fs = filter_causal(lde, shifted);
        for (std::size_t i = 0; i < x.size(); ++i) {
            CHECK(fs[i + 13] == fx[i]);
        }
    }
}

TEST_CASE("steady state helper") {
    const auto lde = derive_causal_lde(oracle::causal(2, 0, 1, 0.5, 3.0));
    std::vector<double> b;
    std::vector<double> a;
    normalized_taps(lde, b, a);
    CHECK(b.size() == a.size());
    std::vector<double> state(b.size() - 1);
    steady_state(b, a, 2.0, state);
    FilterState manual(lde);
    manual.prime(2.0);
    CHECK(oracle::max_abs_diff(state, {manual.delay_line().begin(), manual.delay_line().end()}) == 0.0);
}
