#include "lagiir/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "lagiir/error.hpp"
#include "lagiir/polynomial.hpp"
#include "lagiir/runtime.hpp"

namespace lagiir {

namespace {

using cplx = std::complex<double>;

constexpr double kZeroMagnitude = 1e-12;
constexpr double kDcProbe = 1e-5;

// P(e^{-j w}) and dP/dw.
struct PolyEval {
    cplx value;
    cplx slope;
};

PolyEval eval_transfer_poly(std::span<const double> c, double omega) {
    const cplx x = std::polar(1.0, -omega);
    cplx value{0.0, 0.0};
    cplx slope{0.0, 0.0};
    for (std::size_t i = c.size(); i-- > 0;) {
        value = value * x + c[i];
    }
    // d/dw sum c_m e^{-j w m} = sum (-j m) c_m e^{-j w m}
    for (std::size_t i = c.size(); i-- > 1;) {
        slope = slope * x + static_cast<double>(i) * c[i];
    }
    slope *= x * cplx{0.0, -1.0};
    return {value, slope};
}

struct RationalEval {
    cplx value;
    cplx slope;
    double numerator_magnitude;
};

RationalEval eval_rational(const LdeCoefficients& lde, double omega) {
    const auto b = eval_transfer_poly(lde.b, omega);
    const auto a = eval_transfer_poly(lde.a, omega);
    const cplx value = b.value / a.value;
    const cplx slope = (b.slope * a.value - b.value * a.slope) / (a.value * a.value);
    return {value, slope, std::abs(b.value)};
}

double magnitude_db(cplx value) {
    const double mag = std::abs(value);
    if (mag <= 0.0) {
        return kMagnitudeFloorDb;
    }
    return std::max(kMagnitudeFloorDb, 20.0 * std::log10(mag));
}

template <class Fn>
std::vector<ResponseSample> sample_grid(std::span<const double> grid, Fn&& fn) {
    std::vector<ResponseSample> out;
    out.reserve(grid.size());
    double previous_phase = 0.0;
    bool have_previous = false;
    for (double omega : grid) {
        ResponseSample s;
        s.omega = omega;
        auto [value, gd] = fn(omega);
        s.value = value;
        s.magnitude_db = magnitude_db(value);
        double phase = std::arg(value);
        if (have_previous) {
            const double two_pi = 2.0 * std::numbers::pi;
            phase += two_pi * std::round((previous_phase - phase) / two_pi);
        }
        s.phase = phase;
        previous_phase = phase;
        have_previous = true;
        s.group_delay_valid = gd.has_value();
        s.group_delay = gd.value_or(std::numeric_limits<double>::quiet_NaN());
        out.push_back(s);
    }
    return out;
}

std::vector<double> trim_trailing_zeros(std::span<const double> a) {
    std::vector<double> c(a.begin(), a.end());
    while (c.size() > 1 && c.back() == 0.0) {
        c.pop_back();
    }
    return c;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

} // namespace

cplx frequency_response(const LdeCoefficients& lde, double omega) {
    return poly::evaluate(lde.b, std::polar(1.0, -omega)) / poly::evaluate(lde.a, std::polar(1.0, -omega));
}

cplx frequency_response(const NonCausalPair& pair, double omega) {
    return frequency_response(pair.forward, omega) + frequency_response(pair.backward, -omega);
}

std::optional<double> group_delay(const LdeCoefficients& lde, double omega) {
    auto r = eval_rational(lde, omega);
    if (r.numerator_magnitude < kZeroMagnitude) {
        if (omega != 0.0) {
            return std::nullopt;
        }
        r = eval_rational(lde, kDcProbe);
    }
    return -std::imag(r.slope / r.value);
}

std::optional<double> group_delay(const NonCausalPair& pair, double omega) {
    auto combined = [&](double w) {
        const auto f = eval_rational(pair.forward, w);
        const auto b = eval_rational(pair.backward, -w);
        return std::pair{f.value + b.value, f.slope - b.slope};
    };
    auto [value, slope] = combined(omega);
    if (std::abs(value) < kZeroMagnitude) {
        if (omega != 0.0) {
            return std::nullopt;
        }
        std::tie(value, slope) = combined(kDcProbe);
    }
    return -std::imag(slope / value);
}

double group_delay_finite_difference(const LdeCoefficients& lde, double omega, double step) {
    const cplx lo = frequency_response(lde, omega - step);
    const cplx hi = frequency_response(lde, omega + step);
    // arg(hi / lo) avoids branch cuts between the two evaluations.
    return -std::arg(hi / lo) / (2.0 * step);
}

std::vector<ResponseSample> evaluate_response(const LdeCoefficients& lde, std::span<const double> omega_grid) {
    return sample_grid(omega_grid, [&](double w) { return std::pair{frequency_response(lde, w), group_delay(lde, w)}; });
}

std::vector<ResponseSample> evaluate_response(const NonCausalPair& pair, std::span<const double> omega_grid) {
    return sample_grid(omega_grid,
                       [&](double w) { return std::pair{frequency_response(pair, w), group_delay(pair, w)}; });
}

std::vector<double> frequency_grid(std::size_t points, bool skip_dc) {
    std::vector<double> grid(points);
    if (points == 0) {
        return grid;
    }
    const double pi = std::numbers::pi;
    for (std::size_t i = 0; i < points; ++i) {
        if (skip_dc) {
            grid[i] = pi * static_cast<double>(i + 1) / static_cast<double>(points);
        } else {
            grid[i] = points == 1 ? 0.0 : pi * static_cast<double>(i) / static_cast<double>(points - 1);
        }
    }
    return grid;
}

double squared_magnitude(const LdeCoefficients& lde, double omega) {
    return std::norm(frequency_response(lde, omega));
}

bool FlatnessReport::flat_through(int order) const {
    if (order < 1 || static_cast<std::size_t>(order) > flat.size()) {
        return false;
    }
    return std::all_of(flat.begin(), flat.begin() + order, [](bool f) { return f; });
}

FlatnessReport flatness_report(const LdeCoefficients& lde, int max_order) {
    if (max_order < 1 || max_order > kMaxFlatnessOrder) {
        throw DesignError("flatness order must be in [1, 6]");
    }
    FlatnessReport report;
    report.reference = squared_magnitude(lde, 0.0);
    const auto central = [&](int n, double h) {
        // n-th central difference: sum_k (-1)^k C(n,k) f((n/2 - k) h) / h^n.
        // |H|^2 is even, so the mirrored terms k and n-k share f(|x|) and are
        // summed as pairs; for odd n each pair cancels exactly.
        double acc = 0.0;
        for (int k = 0; 2 * k <= n; ++k) {
            const double f = squared_magnitude(lde, std::abs((0.5 * n - k) * h));
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            if (2 * k == n) {
                acc += sign * binomial(n, k) * f;
            } else {
                const double mirror = ((n - k) % 2 == 0) ? 1.0 : -1.0;
                acc += (sign + mirror) * binomial(n, k) * f;
            }
        }
        return acc / std::pow(h, n);
    };
    for (int n = 1; n <= max_order; ++n) {
        const double h = n <= 3 ? 1e-3 : 1e-3 * std::pow(10.0, 0.5 * (n - 3));
        const double coarse = central(n, h);
        const double fine = central(n, 0.5 * h);
        const double extrapolated = (4.0 * fine - coarse) / 3.0;
        report.derivatives.push_back(extrapolated);
        const double scale = report.reference > 0.0 ? report.reference : 1.0;
        report.flat.push_back(std::abs(extrapolated) < kFlatnessThreshold * scale);
    }
    return report;
}

double nyquist_gain(const LdeCoefficients& lde) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t m = 0; m < lde.b.size(); ++m) {
        num += (m % 2 == 0 ? 1.0 : -1.0) * lde.b[m];
    }
    for (std::size_t m = 0; m < lde.a.size(); ++m) {
        den += (m % 2 == 0 ? 1.0 : -1.0) * lde.a[m];
    }
    return std::abs(num) / std::abs(den);
}

bool zero_at_minus_one(const LdeCoefficients& lde) {
    double num = 0.0;
    for (std::size_t m = 0; m < lde.b.size(); ++m) {
        num += (m % 2 == 0 ? 1.0 : -1.0) * lde.b[m];
    }
    return std::abs(num) < 1e-10 * poly::abs_sum(lde.b);
}

double white_noise_gain(const LdeCoefficients& lde, double tolerance) {
    double radius = 0.0;
    for (const auto& r : polynomial_roots(lde.a)) {
        radius = std::max(radius, std::abs(r));
    }
    if (radius >= 1.0) {
        throw DesignError("white-noise gain of an unstable filter diverges");
    }
    // Repeated poles give m^k r^m envelopes; a slightly larger radius bounds them.
    const double envelope = 0.5 * (1.0 + radius);
    const double tail_factor = 1.0 / (1.0 - envelope * envelope);
    const std::size_t window = std::max<std::size_t>(lde.taps(), 1);

    FilterState state(lde);
    double sum = 0.0;
    std::vector<double> recent(window, 0.0);
    constexpr std::size_t kMaxSamples = 50'000'000;
    for (std::size_t m = 0; m < kMaxSamples; ++m) {
        const double h = state.step(m == 0 ? 1.0 : 0.0);
        sum += h * h;
        recent[m % window] = h * h;
        if (m >= 2 * window) {
            const double peak = *std::max_element(recent.begin(), recent.end());
            if (peak * static_cast<double>(window) * tail_factor < tolerance * sum) {
                break;
            }
        }
    }
    return sum;
}

std::vector<cplx> polynomial_roots(std::span<const double> a_in) {
    auto a = trim_trailing_zeros(a_in);
    const std::size_t n = a.size() - 1;
    if (n == 0) {
        return {};
    }
    if (a[0] == 0.0) {
        throw DesignError("leading denominator coefficient must be nonzero");
    }
    for (double& v : a) {
        v /= a_in[0];
    }
    // In z: z^n + a1 z^(n-1) + ... + an, i.e. descending powers = a as stored.
    auto eval = [&](cplx z) {
        cplx acc{1.0, 0.0};
        for (std::size_t i = 1; i <= n; ++i) {
            acc = acc * z + a[i];
        }
        return acc;
    };
    double bound = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        bound = std::max(bound, std::abs(a[i]));
    }
    bound += 1.0;
    std::vector<cplx> roots(n);
    const cplx seed{0.4, 0.9};
    for (std::size_t i = 0; i < n; ++i) {
        roots[i] = std::pow(seed, static_cast<double>(i)) * (0.5 * bound);
    }
    for (int iter = 0; iter < 2000; ++iter) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx denom{1.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    denom *= roots[i] - roots[j];
                }
            }
            if (std::abs(denom) == 0.0) {
                denom = cplx{1e-12, 0.0};
            }
            const cplx delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            change = std::max(change, std::abs(delta));
        }
        if (change < 1e-15) {
            break;
        }
    }
    return roots;
}

int pole_multiplicity(std::span<const double> a, double p, double tolerance) {
    auto current = trim_trailing_zeros(a);
    int count = 0;
    while (current.size() > 1) {
        double remainder = 0.0;
        auto quotient = poly::deflate(current, p, remainder);
        if (std::abs(remainder) > tolerance * poly::abs_sum(current)) {
            break;
        }
        current = std::move(quotient);
        ++count;
    }
    return count;
}

std::vector<cplx> denominator_poles(std::span<const double> a, double hint) {
    auto current = trim_trailing_zeros(a);
    std::vector<cplx> poles;
    while (current.size() > 1) {
        double remainder = 0.0;
        auto quotient = poly::deflate(current, hint, remainder);
        if (std::abs(remainder) > 1e-12 * poly::abs_sum(current)) {
            break;
        }
        current = std::move(quotient);
        poles.emplace_back(hint, 0.0);
    }
    for (const auto& r : polynomial_roots(current)) {
        poles.push_back(r);
    }
    return poles;
}

bool is_stable(const LdeCoefficients& lde) {
    return std::all_of(lde.a.begin(), lde.a.end(), [](double v) { return std::isfinite(v); }) &&
           std::ranges::all_of(polynomial_roots(lde.a), [](const cplx& r) { return std::abs(r) < 1.0; });
}

} // namespace lagiir
