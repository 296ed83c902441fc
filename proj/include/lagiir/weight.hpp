#pragma once

#include <cmath>
#include <vector>

namespace lagiir {

enum class Causality { Causal, TwoSided };

/// Discount weight of the regression.
///
/// Causal:    w(m) = m^kappa * exp(sigma m),  m = 0, 1, 2, ...
/// TwoSided:  w(m) = exp(sigma |m|),          m in Z
///
/// sigma < 0 is the per-sample log decay; the resulting filters have all
/// their poles at p = exp(sigma).
struct WeightSpec {
    double sigma = -0.5;
    int kappa = 0;
    Causality causality = Causality::Causal;

    [[nodiscard]] double pole() const { return std::exp(sigma); }

    /// Throws DesignError when the weight cannot produce a stable filter.
    void validate() const;

    static WeightSpec from_pole(double p, int kappa = 0, Causality causality = Causality::Causal);
};

/// mu[i] = sum_m m^i w(m) for i = 0..max_order, in closed form.
/// Causal sums use  sum_{m>=0} m^j p^m = sum_r S(j,r) r! p^r / (1-p)^(r+1)
/// with S the Stirling numbers of the second kind.
std::vector<double> weight_moments(const WeightSpec& spec, int max_order);

/// sum_{m>=0} m^j p^m for 0 < p < 1.
double power_geometric_sum(int j, double p);

} // namespace lagiir
