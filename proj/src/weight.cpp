#include "lagiir/weight.hpp"

#include <cmath>
#include <string>

#include "lagiir/error.hpp"

namespace lagiir {

void WeightSpec::validate() const {
    if (!(sigma < 0.0) || !std::isfinite(sigma)) {
        throw DesignError("sigma must be finite and negative, got " + std::to_string(sigma));
    }
    if (kappa < 0) {
        throw DesignError("kappa must be non-negative");
    }
    if (causality == Causality::TwoSided && kappa != 0) {
        throw DesignError("two-sided weights have no shape parameter (kappa must be 0)");
    }
    const double p = pole();
    if (!(p > 0.0 && p < 1.0)) {
        throw DesignError("pole exp(sigma) must lie in (0, 1)");
    }
}

WeightSpec WeightSpec::from_pole(double p, int kappa, Causality causality) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DesignError("pole must lie in (0, 1), got " + std::to_string(p));
    }
    return WeightSpec{std::log(p), kappa, causality};
}

double power_geometric_sum(int j, double p) {
    if (j < 0) {
        throw DesignError("moment order must be non-negative");
    }
    // Stirling numbers of the second kind, row j, built by the usual recurrence.
    std::vector<double> row{1.0};
    for (int n = 1; n <= j; ++n) {
        std::vector<double> next(static_cast<std::size_t>(n) + 1, 0.0);
        for (int k = 1; k <= n; ++k) {
            const double prev_k = k < n ? row[static_cast<std::size_t>(k)] : 0.0;
            next[static_cast<std::size_t>(k)] = k * prev_k + row[static_cast<std::size_t>(k - 1)];
        }
        row = std::move(next);
    }
    const double one_minus = 1.0 - p;
    double sum = 0.0;
    double factorial = 1.0;
    double p_pow = 1.0;
    double denom = one_minus;
    for (int r = 0; r <= j; ++r) {
        if (r > 0) {
            factorial *= r;
            p_pow *= p;
            denom *= one_minus;
        }
        sum += row[static_cast<std::size_t>(r)] * factorial * p_pow / denom;
    }
    return sum;
}

std::vector<double> weight_moments(const WeightSpec& spec, int max_order) {
    spec.validate();
    if (max_order < 0) {
        throw DesignError("max_order must be non-negative");
    }
    const double p = spec.pole();
    std::vector<double> mu(static_cast<std::size_t>(max_order) + 1);
    for (int i = 0; i <= max_order; ++i) {
        if (spec.causality == Causality::Causal) {
            mu[static_cast<std::size_t>(i)] = power_geometric_sum(i + spec.kappa, p);
        } else if (i % 2 == 1) {
            mu[static_cast<std::size_t>(i)] = 0.0;
        } else {
            // m and -m contribute equally; m = 0 only once.
            mu[static_cast<std::size_t>(i)] = 2.0 * power_geometric_sum(i, p) - (i == 0 ? 1.0 : 0.0);
        }
    }
    return mu;
}

} // namespace lagiir
