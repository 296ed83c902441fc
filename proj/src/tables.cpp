#include "lagiir/tables.hpp"

#include <cmath>
#include <string>

#include "lagiir/error.hpp"

namespace lagiir {

namespace {

void check_pole(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DesignError("table coefficients require 0 < p < 1");
    }
}

} // namespace

bool is_noncausal(TableEntry entry) {
    return entry == TableEntry::II_Smoother || entry == TableEntry::II_Differentiator;
}

std::string_view to_string(TableEntry entry) {
    switch (entry) {
    case TableEntry::I_Smoother: return "I_smoother";
    case TableEntry::I_Differentiator: return "I_differentiator";
    case TableEntry::II_Smoother: return "II_smoother";
    case TableEntry::II_Differentiator: return "II_differentiator";
    case TableEntry::III_Smoother: return "III_smoother";
    case TableEntry::III_Differentiator: return "III_differentiator";
    }
    return "unknown";
}

LdeCoefficients table_causal(TableEntry entry, double p, double q, double T) {
    check_pole(p);
    const double p2 = p * p;
    const double q2 = q * q;
    LdeCoefficients lde;
    lde.sample_period = T;
    switch (entry) {
    case TableEntry::I_Smoother: {
        const double c = 0.5 * (1.0 - p);
        lde.b = {c * (q2 * p2 + 3 * q * p2 + 2 * p2 - 2 * q2 * p + 2 * p + q2 - 3 * q + 2),
                 -c * (2 * q2 * p2 + 8 * q * p2 + 6 * p2 - 4 * q2 * p - 4 * q * p + 6 * p + 2 * q2 - 4 * q),
                 c * (q2 * p2 + 5 * q * p2 + 6 * p2 - 2 * q2 * p - 4 * q * p + q2 - q),
                 0.0};
        lde.a = {1.0, -3 * p, 3 * p2, -p2 * p};
        break;
    }
    case TableEntry::I_Differentiator: {
        const double c = (1.0 - p) * (1.0 - p) / (2.0 * T);
        lde.b = {c * (2 * q * p + 3 * p - 2 * q + 3),
                 -4 * c * (q * p + 2 * p - q + 1),
                 c * (2 * q * p + 5 * p - 2 * q + 1),
                 0.0};
        lde.a = {1.0, -3 * p, 3 * p2, -p2 * p};
        break;
    }
    case TableEntry::III_Smoother: {
        const double c = (1.0 - p) * (1.0 - p) / 6.0;
        lde.b = {0.0,
                 c * (3 * q2 * p2 + 9 * q * p2 + 6 * p2 - 6 * q2 * p + 6 * q * p + 12 * p + 3 * q2 - 15 * q + 18),
                 -2 * c * (q * p + 3 * p - q + 3) * (3 * q * p + 3 * p - 3 * q + 3),
                 c * (3 * q2 * p2 + 15 * q * p2 + 18 * p2 - 6 * q2 * p - 6 * q * p + 12 * p + 3 * q2 - 9 * q + 6),
                 0.0};
        lde.a = {1.0, -4 * p, 6 * p2, -4 * p2 * p, p2 * p2};
        break;
    }
    case TableEntry::III_Differentiator: {
        const double c = (1.0 - p) * (1.0 - p) * (1.0 - p) / (2.0 * T);
        lde.b = {0.0,
                 c * (2 * q * p + 3 * p - 2 * q + 5),
                 -4 * c * (q * p + 2 * p - q + 2),
                 c * (2 * q * p + 5 * p - 2 * q + 3),
                 0.0};
        lde.a = {1.0, -4 * p, 6 * p2, -4 * p2 * p, p2 * p2};
        break;
    }
    default:
        throw DesignError("table " + std::string(to_string(entry)) + " is non-causal");
    }
    return lde;
}

NonCausalPair table_noncausal(TableEntry entry, double p, double T) {
    check_pole(p);
    const double p2 = p * p;
    NonCausalPair pair;
    pair.forward.sample_period = T;
    pair.backward.sample_period = T;
    if (entry == TableEntry::II_Smoother) {
        const double c = 1.0 / (2.0 * (p2 + 8 * p + 1));
        const double edge = (p2 + 10 * p + 1) * (1 - p) / (1 + p);
        pair.forward.b = {c * edge, 3 * c * p * (p2 - 1), 3 * c * p2 * (p2 - 1), c * p2 * p * edge};
        pair.forward.a = {1.0, -3 * p, 3 * p2, -p2 * p};
        pair.backward = pair.forward;
    } else if (entry == TableEntry::II_Differentiator) {
        const double b1 = (p - 1) * (p - 1) * (p - 1) / (2.0 * T * (p + 1));
        pair.forward.b = {0.0, b1, 0.0, 0.0};
        pair.forward.a = {1.0, -2 * p, p2, 0.0};
        pair.backward.b = {0.0, -b1, 0.0, 0.0};
        pair.backward.a = pair.forward.a;
    } else {
        throw DesignError("table " + std::string(to_string(entry)) + " is causal");
    }
    return pair;
}

std::variant<LdeCoefficients, NonCausalPair> table_coefficients(TableEntry entry, double p, double q, double T) {
    if (is_noncausal(entry)) {
        return table_noncausal(entry, p, T);
    }
    return table_causal(entry, p, q, T);
}

double optimal_q(TableEntry entry, double p) {
    check_pole(p);
    switch (entry) {
    case TableEntry::I_Smoother:
        return (4 * p - std::sqrt(2 * (p * p + 4 * p + 1)) + 2) / (2 * (1 - p));
    case TableEntry::I_Differentiator:
        return (1 + 2 * p) / (1 - p);
    case TableEntry::III_Smoother:
        return (4 * p - std::sqrt(2 * (p * p + 6 * p + 1)) + 4) / (2 * (1 - p));
    case TableEntry::III_Differentiator:
        return 2 * (1 + p) / (1 - p);
    default:
        throw DesignError("no optimal-q formula for non-causal designs (q = 0)");
    }
}

} // namespace lagiir
