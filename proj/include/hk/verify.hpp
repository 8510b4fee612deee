#pragma once

#include <string>
#include <vector>

#include "hk/json_io.hpp"

namespace hk {

struct CheckLine {
    std::string label;
    bool pass = false;
    std::string detail;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::string tolerance;
    std::vector<CheckLine> checks;
    double seconds = 0;

    bool pass() const;
};

int criterion_count();
CriterionResult run_criterion(int id);  // 1..criterion_count()
std::vector<CriterionResult> run_all_criteria();

std::string format_result(const CriterionResult& r);  // sub-lines, then one PASS/FAIL line
Json to_json(const CriterionResult& r);

}  // namespace hk
