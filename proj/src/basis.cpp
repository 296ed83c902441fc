#include "lagiir/basis.hpp"

#include <cmath>
#include <span>
#include <string>

#include "lagiir/error.hpp"
#include "lagiir/polynomial.hpp"

namespace lagiir {

namespace {

double moment_inner(const std::vector<double>& u, const std::vector<double>& v, const std::vector<double>& mu) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < v.size(); ++j) {
            acc += u[i] * v[j] * mu[i + j];
        }
    }
    return acc;
}

} // namespace

double BasisSet::evaluate(int k, double m) const {
    return poly::evaluate(alpha.at(static_cast<std::size_t>(k)), m);
}

double BasisSet::derivative(int k, int order, double m) const {
    if (order == 0) {
        return evaluate(k, m);
    }
    const auto d = poly::derivative(alpha.at(static_cast<std::size_t>(k)), order);
    return poly::evaluate(d, m);
}

double BasisSet::weighted_combination(const std::vector<double>& c, double m) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < c.size() && k < alpha.size(); ++k) {
        acc += c[k] * poly::evaluate(alpha[k], m);
    }
    return acc * weight_value(weight, m);
}

double weight_value(const WeightSpec& spec, double m) {
    if (spec.causality == Causality::TwoSided) {
        return std::exp(spec.sigma * std::abs(m));
    }
    if (m < 0.0) {
        return 0.0;
    }
    const double shape = spec.kappa == 0 ? 1.0 : std::pow(m, spec.kappa);
    return shape * std::exp(spec.sigma * m);
}

BasisSet orthonormal_basis(int degree, const WeightSpec& spec) {
    spec.validate();
    if (degree < 0 || degree > kMaxBasisDegree) {
        throw DesignError("basis degree must be in [0, " + std::to_string(kMaxBasisDegree) + "], got " +
                          std::to_string(degree));
    }
    const auto mu = weight_moments(spec, 2 * degree);
    const auto n = static_cast<std::size_t>(degree) + 1;

    BasisSet basis;
    basis.degree = degree;
    basis.weight = spec;
    basis.alpha.reserve(n);

    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> v(n, 0.0);
        v[k] = 1.0;
        const double initial_norm2 = mu[2 * k];
        // Modified Gram-Schmidt, two sweeps for re-orthogonalization.
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (std::size_t i = 0; i < k; ++i) {
                const double proj = moment_inner(basis.alpha[i], v, mu);
                for (std::size_t j = 0; j <= i; ++j) {
                    v[j] -= proj * basis.alpha[i][j];
                }
            }
        }
        const double norm2 = moment_inner(v, v, mu);
        if (!(norm2 > 1e-13 * initial_norm2) || !std::isfinite(norm2)) {
            throw ValidationError("moment Gram matrix is numerically singular at degree " + std::to_string(k));
        }
        const double inv = 1.0 / std::sqrt(norm2);
        v.resize(k + 1);
        for (double& x : v) {
            x *= inv;
        }
        basis.alpha.push_back(std::move(v));
    }
    return basis;
}

std::vector<double> synthesis_weights(const BasisSet& basis, int derivative, double delay, double sample_period) {
    if (derivative < 0 || derivative > basis.degree) {
        throw DesignError("derivative order must be in [0, B]");
    }
    if (!(sample_period > 0.0)) {
        throw DesignError("sample period must be positive");
    }
    const double scale = std::pow(-1.0 / sample_period, derivative);
    std::vector<double> c(basis.alpha.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = scale * basis.derivative(static_cast<int>(k), derivative, delay);
    }
    return c;
}

} // namespace lagiir
