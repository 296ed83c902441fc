#pragma once

// Small dense polynomial helpers. Coefficients are stored in ascending
// powers: c[0] + c[1] x + c[2] x^2 + ...  For transfer functions x = z^-1.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lagiir::poly {

inline double evaluate(std::span<const double> c, double x) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) {
        acc = acc * x + c[i];
    }
    return acc;
}

inline std::complex<double> evaluate(std::span<const double> c, std::complex<double> x) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = c.size(); i-- > 0;) {
        acc = acc * x + c[i];
    }
    return acc;
}

/// Coefficients of the order-th derivative.
inline std::vector<double> derivative(std::span<const double> c, int order = 1) {
    std::vector<double> out(c.begin(), c.end());
    for (int d = 0; d < order; ++d) {
        if (out.size() <= 1) {
            return {0.0};
        }
        std::vector<double> next(out.size() - 1);
        for (std::size_t i = 1; i < out.size(); ++i) {
            next[i - 1] = static_cast<double>(i) * out[i];
        }
        out = std::move(next);
    }
    return out;
}

/// Full linear convolution (polynomial product).
inline std::vector<double> convolve(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) {
        return {};
    }
    std::vector<double> out(x.size() + y.size() - 1, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            out[i + j] += x[i] * y[j];
        }
    }
    return out;
}

/// Expansion of (1 - p x)^n.
inline std::vector<double> binomial_power(double p, int n) {
    std::vector<double> out{1.0};
    const double factor[2] = {1.0, -p};
    for (int k = 0; k < n; ++k) {
        out = convolve(out, factor);
    }
    return out;
}

/// Divides c(x) by (1 - p x). Returns the quotient; `remainder` receives the
/// constant remainder term so that c(x) = (1 - p x) q(x) + remainder * x^(n-1).
inline std::vector<double> deflate(std::span<const double> c, double p, double& remainder) {
    if (c.empty()) {
        remainder = 0.0;
        return {};
    }
    std::vector<double> q(c.size() - 1);
    double carry = 0.0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        carry = c[i] + p * carry;
        q[i] = carry;
    }
    remainder = c.back() + p * carry;
    return q;
}

inline double abs_sum(std::span<const double> c) {
    double s = 0.0;
    for (double v : c) {
        s += std::abs(v);
    }
    return s;
}

} // namespace lagiir::poly
