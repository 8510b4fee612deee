// One PASS/FAIL line per acceptance criterion, preceded by its sub-checks.
#include <cstdio>
#include <iostream>

#include "hk/verify.hpp"

int main() {
    int failed = 0;
    for (int id = 1; id <= hk::criterion_count(); ++id) {
        hk::CriterionResult r = hk::run_criterion(id);
        std::cout << hk::format_result(r) << std::flush;
        if (!r.pass()) ++failed;
    }
    std::cout << (hk::criterion_count() - failed) << "/" << hk::criterion_count()
              << " criteria pass\n";
    return failed == 0 ? 0 : 1;
}
