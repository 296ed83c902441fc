#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lagiir/response.hpp"
#include "lagiir/runtime.hpp"
#include "lagiir/tables.hpp"
#include "oracles.hpp"

using namespace lagiir;

namespace {

const double kPi = std::numbers::pi;

std::vector<double> long_impulse(const LdeCoefficients& lde, std::size_t n) {
    std::vector<double> x(n, 0.0);
    x[0] = 1.0;
    return oracle::difference_equation(lde, x);
}

// n-th derivative of |H|^2 at 0 from the cosine series of the impulse
// autocorrelation: |H|^2 = r0 + 2 sum_k r_k cos(k w).
double autocorrelation_derivative(const LdeCoefficients& lde, int n) {
    if (n % 2 == 1) {
        return 0.0;
    }
    const auto h = long_impulse(lde, 2000);
    double sum = 0.0;
    for (std::size_t k = 1; k < h.size(); ++k) {
        double r = 0.0;
        for (std::size_t m = 0; m + k < h.size(); ++m) {
            r += h[m] * h[m + k];
        }
        sum += 2 * r * std::pow(static_cast<double>(k), n);
    }
    return (n / 2 % 2 == 0 ? 1.0 : -1.0) * sum;
}

} // namespace

TEST_CASE("frequency response matches direct polynomial evaluation") {
    for (int kappa : {0, 1}) {
        const auto lde = derive_causal_lde(oracle::causal(2, 1, kappa, 0.6, 1.5, 0.1));
        for (double w : frequency_grid(37)) {
            const auto h = frequency_response(lde, w);
            CHECK(std::abs(h - oracle::response(lde, w)) < 1e-12 * std::max(1.0, std::abs(h)));
        }
    }
    const auto smoother = derive_causal_lde(oracle::causal(2, 0, 0, 0.5, 3.0));
    CHECK(std::abs(frequency_response(smoother, 0.0) - std::complex<double>(1.0, 0.0)) < 1e-12);
}

TEST_CASE("group delay") {
    SUBCASE("equals q at DC for B >= 1 smoothers") {
        for (int degree : {1, 2, 4}) {
            for (int kappa : {0, 1}) {
                for (double q : {0.0, 1.0, 2.5, 4.0}) {
                    const auto lde = derive_causal_lde(oracle::causal(degree, 0, kappa, std::exp(-0.5), q));
                    const auto gd = group_delay(lde, 0.0);
                    REQUIRE(gd.has_value());
                    CHECK(*gd == doctest::Approx(q).epsilon(1e-8).scale(1.0));
                }
            }
        }
    }
    SUBCASE("analytic value agrees with the phase slope") {
        for (int derivative : {0, 1}) {
            const auto lde = derive_causal_lde(oracle::causal(2, derivative, 1, 0.7, 2.0));
            for (double w : {0.05, 0.3, 1.0, 2.0, 2.9}) {
                const auto gd = group_delay(lde, w);
                REQUIRE(gd.has_value());
                CHECK(*gd == doctest::Approx(group_delay_finite_difference(lde, w)).epsilon(1e-6).scale(1.0));
            }
        }
    }
    SUBCASE("family I and III designs over the band") {
        for (auto entry : {TableEntry::I_Smoother, TableEntry::I_Differentiator, TableEntry::III_Smoother,
                           TableEntry::III_Differentiator}) {
            for (double p : {0.25, 0.5, 0.75}) {
                for (double q : {0.0, 2.0, optimal_q(entry, p)}) {
                    const auto lde = table_causal(entry, p, q);
                    for (double w = 0.01; w <= kPi - 0.01; w += 0.0625) {
                        const auto gd = group_delay(lde, w);
                        REQUIRE(gd.has_value());
                        CHECK(*gd == doctest::Approx(group_delay_finite_difference(lde, w)).epsilon(1e-6).scale(1.0));
                    }
                }
            }
        }
    }
    SUBCASE("undefined on a spectral zero") {
        const auto lde = table_causal(TableEntry::I_Differentiator, 0.5, 4.0);
        CHECK_FALSE(group_delay(lde, kPi).has_value());
        const auto samples = evaluate_response(lde, frequency_grid(9, true));
        CHECK(std::isnan(samples.back().group_delay));
        CHECK_FALSE(samples.back().group_delay_valid);
        CHECK(samples.back().magnitude_db == kMagnitudeFloorDb);
    }
    SUBCASE("non-causal smoother has zero group delay") {
        const auto pair = table_noncausal(TableEntry::II_Smoother, 0.5);
        for (double w : {0.0, 0.4, 1.5}) {
            CHECK(std::abs(group_delay(pair, w).value()) < 1e-9);
        }
    }
}

TEST_CASE("zero at z = -1") {
    CHECK(std::abs(frequency_response(table_causal(TableEntry::I_Differentiator, 0.5, 4.0), kPi)) < 1e-15);
    CHECK(zero_at_minus_one(table_causal(TableEntry::I_Differentiator, 0.5, 4.0)));
    const auto no_zero = table_causal(TableEntry::I_Differentiator, 0.5, 0.0);
    CHECK_FALSE(zero_at_minus_one(no_zero));
    CHECK(std::abs(nyquist_gain(no_zero)) > 0.0);
    const double p = std::exp(-0.5);
    CHECK(zero_at_minus_one(table_causal(TableEntry::III_Smoother, p, optimal_q(TableEntry::III_Smoother, p))));
    CHECK(std::abs(nyquist_gain(table_causal(TableEntry::III_Smoother, p, 4.145))) < 1e-3);
}

TEST_CASE("response table layout") {
    const double p = std::exp(-0.5);
    const auto lde = table_causal(TableEntry::I_Smoother, p, optimal_q(TableEntry::I_Smoother, p));
    const auto grid = frequency_grid(512);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == kPi);
    CHECK(frequency_grid(4, true).front() == doctest::Approx(kPi / 4));
    const auto samples = evaluate_response(lde, grid);
    CHECK(samples.front().magnitude_db == doctest::Approx(0.0).scale(1.0));
    CHECK(samples.front().group_delay == doctest::Approx(optimal_q(TableEntry::I_Smoother, p)).epsilon(1e-8));
    CHECK(samples.back().magnitude_db <= -300.0);
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        CHECK(std::abs(samples[i].phase - samples[i - 1].phase) < kPi);
    }
}

TEST_CASE("differentiator responses") {
    SUBCASE("magnitude rises over the low band") {
        const auto lde = table_causal(TableEntry::I_Differentiator, 0.5, optimal_q(TableEntry::I_Differentiator, 0.5));
        double previous = -INFINITY;
        for (int i = 1; i <= 30; ++i) {
            const double db = evaluate_response(lde, std::vector<double>{0.01 * i}).front().magnitude_db;
            CHECK(db > previous);
            previous = db;
        }
    }
    SUBCASE("sign convention: H ~ +j w / T") {
        for (double period : {1.0, 0.25}) {
            const auto pair = table_noncausal(TableEntry::II_Differentiator, 0.5, period);
            const auto h = frequency_response(pair, 0.01);
            CHECK(std::abs(h.real()) < 1e-12);
            CHECK(h.imag() * period / 0.01 == doctest::Approx(1.0).epsilon(1e-3));
            // A sampled sinusoid comes out as its analytic derivative.
            const double w = 0.05;
            std::vector<double> x(400);
            for (std::size_t n = 0; n < x.size(); ++n) {
                x[n] = std::sin(w * static_cast<double>(n));
            }
            const auto y = filter_noncausal(pair, x);
            const double gain = frequency_response(pair, w).imag();
            CHECK(gain * period / w == doctest::Approx(1.0).epsilon(0.02));
            for (std::size_t n = 150; n < 250; ++n) {
                CHECK(y[n] == doctest::Approx(gain * std::cos(w * static_cast<double>(n))).epsilon(1e-9).scale(gain));
            }
        }
    }
    SUBCASE("non-causal smoother response is real") {
        const auto pair = derive_noncausal_pair(oracle::two_sided(2, 0, 0.5));
        for (double w : frequency_grid(64)) {
            CHECK(std::abs(frequency_response(pair, w).imag()) < 1e-12);
        }
    }
}

TEST_CASE("flatness report") {
    const double p = std::exp(-0.5);
    SUBCASE("optimal smoothers are flat through order three") {
        for (auto entry : {TableEntry::I_Smoother, TableEntry::III_Smoother}) {
            const auto report = flatness_report(table_causal(entry, p, optimal_q(entry, p)), 3);
            CHECK(report.flat_through(3));
        }
        const auto report = flatness_report(table_causal(TableEntry::I_Smoother, 0.5, optimal_q(TableEntry::I_Smoother, 0.5)), 3);
        CHECK(report.flat_through(3));
    }
    SUBCASE("exponential smoother curvature") {
        const auto lde = derive_causal_lde(oracle::causal(0, 0, 0, 0.5, 0.0));
        const auto report = flatness_report(lde, kMaxFlatnessOrder);
        CHECK(report.flat[0]);
        CHECK_FALSE(report.flat[1]);
        CHECK(report.flat[2]);
        // |H|^2 = (1-p)^2 / (1 - 2p cos w + p^2); second derivative at 0 is
        // -2p (1-p)^2 / (1-p)^4.
        CHECK(report.derivatives[1] == doctest::Approx(-2 * 0.5 / 0.25).epsilon(1e-6));
    }
    SUBCASE("derivatives agree with the autocorrelation series") {
        for (int kappa : {0, 1}) {
            const auto lde = derive_causal_lde(oracle::causal(2, 0, kappa, 0.5, 1.0));
            const auto report = flatness_report(lde, kMaxFlatnessOrder);
            for (int n = 1; n <= kMaxFlatnessOrder; ++n) {
                const double expected = autocorrelation_derivative(lde, n);
                CHECK(report.derivatives[n - 1] == doctest::Approx(expected).epsilon(1e-3).scale(report.reference));
            }
        }
    }
}

TEST_CASE("variance reduction factor") {
    for (double p : {0.2, 0.5, 0.9}) {
        const LdeCoefficients expo{{1 - p}, {1, -p}, 1.0};
        CHECK(white_noise_gain(expo) == doctest::Approx((1 - p) / (1 + p)).epsilon(1e-11));
    }
    const auto lde = derive_causal_lde(oracle::causal(2, 1, 1, 0.8, 3.0));
    const auto h = long_impulse(lde, 3000);
    double energy = 0.0;
    for (double v : h) {
        energy += v * v;
    }
    CHECK(white_noise_gain(lde) == doctest::Approx(energy).epsilon(1e-10));
    CHECK(white_noise_gain(lde) > 0.0);

    const double p = std::exp(-0.5);
    double best = INFINITY;
    double best_q = -1.0;
    for (int i = 0; i <= 500; ++i) {
        const double vrf = white_noise_gain(table_causal(TableEntry::I_Smoother, p, 0.01 * i));
        if (vrf < best) {
            best = vrf;
            best_q = 0.01 * i;
        }
    }
    CHECK(std::abs(best_q - optimal_q(TableEntry::I_Smoother, p)) <= 0.05);
}

TEST_CASE("poles") {
    const std::vector<double> quadratic{1.0, -3.0, 2.0};
    auto roots = polynomial_roots(quadratic);
    REQUIRE(roots.size() == 2);
    std::sort(roots.begin(), roots.end(), [](auto x, auto y) { return x.real() < y.real(); });
    CHECK(std::abs(roots[0] - 1.0) < 1e-12);
    CHECK(std::abs(roots[1] - 2.0) < 1e-12);
    CHECK(polynomial_roots(std::vector<double>{1.0, -0.5, 0.0}).size() == 1);

    for (int degree = 0; degree <= 6; ++degree) {
        const auto lde = derive_causal_lde(oracle::causal(degree, 0, 1, 0.7, 1.0));
        CHECK(pole_multiplicity(lde.a, 0.7) == degree + 2);
        for (auto z : denominator_poles(lde.a, 0.7)) {
            CHECK(std::abs(z - 0.7) < 1e-9);
        }
        CHECK(is_stable(lde));
    }
    CHECK_FALSE(is_stable(LdeCoefficients{{1.0}, {1.0, -1.2}, 1.0}));
    CHECK(pole_multiplicity(std::vector<double>{1.0, -0.5}, 0.25) == 0);
}
