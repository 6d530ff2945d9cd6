// Runs acceptance criteria 1..10 at full budget and prints one line each.
// Criteria listed with --expected-failures are strict expected failures: the
// run fails if one of them passes, or if any other criterion fails.
#include <algorithm>
#include <iostream>
#include <set>
#include <vector>

#include <CLI11.hpp>

#include "sap/validation.hpp"

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    sap::ValidationOptions opt;
    std::vector<int> expected;
    app.add_option("--seed", opt.seed);
    app.add_option("--workers", opt.workers);
    app.add_option("--budget-scale", opt.budget_scale);
    app.add_option("--tolerance-scale", opt.tolerance_scale);
    app.add_option("--expected-failures", expected)->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    std::vector<int> ids;
    for (int i = 1; i < sap::kCriteriaCount; ++i) ids.push_back(i);
    sap::ValidationReport first = sap::run_validation(opt, ids, [](const sap::CriterionResult& r, double) {
        std::cout << sap::summary_line(r) << std::endl;
    });
    const sap::ValidationReport second = sap::run_validation(opt, ids);
    first.criteria.push_back(sap::determinism_check(first, second));
    std::cout << sap::summary_line(first.criteria.back()) << std::endl;

    const std::set<int> xfail(expected.begin(), expected.end());
    int unexpected = 0;
    for (const auto& r : first.criteria) {
        const bool listed = xfail.count(r.id) > 0;
        if (r.passed == listed) {
            ++unexpected;
            std::cout << "unexpected outcome for criterion " << r.id << ": "
                      << (r.passed ? "passed but listed as an expected failure" : "failed") << '\n';
        }
    }
    const auto passed = std::count_if(first.criteria.begin(), first.criteria.end(),
                                      [](const sap::CriterionResult& r) { return r.passed; });
    std::cout << passed << " of " << first.criteria.size() << " criteria passed";
    if (!xfail.empty()) std::cout << "; expected failures:";
    for (int id : xfail) std::cout << ' ' << id;
    std::cout << '\n';
    return unexpected == 0 ? 0 : 1;
}
