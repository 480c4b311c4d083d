#pragma once

#include <functional>
#include <string>
#include <vector>

namespace coulomb::acceptance {

enum class Suite { quick, full };

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// Runs the numbered acceptance criteria. Quick mode shrinks sample sizes and
/// point counts but keeps every tolerance.
std::vector<CriterionResult> run_suite(Suite suite, const std::function<void(const CriterionResult&)>& on_result = {});

/// Single criterion by number (1..11).
CriterionResult run_criterion(int id, Suite suite);

inline constexpr int kCriteria = 11;

/// "PASS [n] title: detail"
std::string format_line(const CriterionResult& r);

} // namespace coulomb::acceptance
