#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sap/numerics.hpp"
#include "sap/table.hpp"

namespace sap {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    double measured = 0.0;   // headline statistic
    double tolerance = 0.0;  // bound it is held to (after tolerance scaling)
    std::string detail;
};

/// Supporting number reported next to a criterion; never decides pass/fail.
struct InfoRow {
    int criterion = 0;
    std::string key;
    double value = 0.0;
    std::string note;
};

struct ValidationOptions {
    std::uint64_t seed = 1;
    int workers = 1;
    double budget_scale = 1.0;     // multiplies every Monte Carlo sample budget
    double tolerance_scale = 1.0;  // multiplies every numeric tolerance
    NumericsConfig numerics;
};

struct ValidationReport {
    std::vector<CriterionResult> criteria;
    std::vector<InfoRow> info;
    std::vector<double> seconds;  // wall time per criterion, same order

    bool all_passed() const;
    Table criteria_table() const;
    Table info_table() const;
};

inline constexpr int kCriteriaCount = 10;

/// Runs one of criteria 1..9. Criterion 10 compares two whole runs and is
/// built by determinism_check.
CriterionResult run_criterion(int id, const ValidationOptions& opt, std::vector<InfoRow>& info);

using ProgressFn = std::function<void(const CriterionResult&, double seconds)>;

ValidationReport run_validation(const ValidationOptions& opt, const std::vector<int>& ids,
                                const ProgressFn& progress = {});

/// Criterion 10: both reports must give byte-identical CSV bodies.
CriterionResult determinism_check(const ValidationReport& first, const ValidationReport& second);

/// One line per criterion: "[PASS] 3 title: measured ... (tolerance ...)".
std::string summary_line(const CriterionResult& r);

}  // namespace sap
