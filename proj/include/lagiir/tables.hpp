#pragma once

#include <string_view>
#include <variant>

#include "lagiir/design.hpp"

namespace lagiir {

/// Closed-form B = 2 designs.
///   I   causal,     kappa = 0
///   II  non-causal, kappa = 0, q = 0
///   III causal,     kappa = 1
enum class TableEntry {
    I_Smoother,
    I_Differentiator,
    II_Smoother,
    II_Differentiator,
    III_Smoother,
    III_Differentiator,
};

[[nodiscard]] bool is_noncausal(TableEntry entry);
[[nodiscard]] std::string_view to_string(TableEntry entry);

LdeCoefficients table_causal(TableEntry entry, double p, double q, double sample_period = 1.0);
NonCausalPair table_noncausal(TableEntry entry, double p, double sample_period = 1.0);
std::variant<LdeCoefficients, NonCausalPair> table_coefficients(TableEntry entry, double p, double q,
                                                                double sample_period = 1.0);

/// Delay that puts a zero at z = -1. Throws DesignError for family II entries.
double optimal_q(TableEntry entry, double p);

} // namespace lagiir
