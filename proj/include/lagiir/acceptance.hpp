#pragma once

#include <string>
#include <vector>

namespace lagiir {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail; ///< measured quantities, deterministic
};

struct AcceptanceOptions {
    /// Added to b[0] of every closed-form family I/III filter before it is
    /// compared with the derivation; used to prove criterion 1 can fail.
    double table_b0_perturbation = 0.0;
    /// Restrict the run to these criterion ids (empty = all).
    std::vector<int> only;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// One line per criterion plus a summary line; no timings in the text.
std::string format_report(const std::vector<CriterionResult>& results);

[[nodiscard]] bool all_passed(const std::vector<CriterionResult>& results);

} // namespace lagiir
