#pragma once

#include <vector>

#include "lagiir/weight.hpp"

namespace lagiir {

inline constexpr int kMaxBasisDegree = 6;

/// Orthonormal polynomials psi_k(m) = sum_i alpha[k][i] m^i under a discount
/// weight: discrete (associated) Laguerre polynomials for causal weights.
struct BasisSet {
    int degree = 0;
    WeightSpec weight;
    /// Row k holds alpha[k][0..k].
    std::vector<std::vector<double>> alpha;

    [[nodiscard]] double evaluate(int k, double m) const;
    /// d^order psi_k / dm^order at m, computed from the coefficients.
    [[nodiscard]] double derivative(int k, int order, double m) const;
    /// sum_k c_k psi_k(m) * w(m).
    [[nodiscard]] double weighted_combination(const std::vector<double>& c, double m) const;
};

/// Gram-Schmidt orthonormalization of 1, m, ..., m^degree against the moment
/// inner product <m^i, m^j> = mu[i+j].
BasisSet orthonormal_basis(int degree, const WeightSpec& spec);

/// c_k = (-1/T)^D * psi_k^(D)(q).
std::vector<double> synthesis_weights(const BasisSet& basis, int derivative, double delay, double sample_period);

/// w(m) for the basis weight (two-sided weights accept negative m).
double weight_value(const WeightSpec& spec, double m);

} // namespace lagiir
