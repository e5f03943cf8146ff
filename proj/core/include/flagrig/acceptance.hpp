#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace flagrig {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

/// Runs the acceptance criteria (all of them, or the listed subset) with one
/// seed driving every randomized draw. Each criterion is exact apart from the
/// float-mode quadrature bounds, and the stated runtime budgets are part of
/// the pass conditions.
std::vector<CriterionResult> run_acceptance(
    uint64_t seed, const std::vector<int>& only = {},
    const std::function<void(const CriterionResult&)>& on_result = {});

} // namespace flagrig
