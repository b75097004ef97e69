#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hamrep/report.hpp"

namespace hamrep {

inline constexpr int kCriterionCount = 10;

struct CriterionResult {
    int id = 0;
    std::string title;
    CheckReport report;
    std::vector<Artifact> artifacts;  // acceptance_criterionNN_<seed>.json (and .csv where tabular)
};

// Runs one acceptance criterion (1..10). Criterion 10 runs 1..9 twice and compares
// their artifacts byte for byte. Throws InvalidArgument for other ids.
CriterionResult run_criterion(int id, std::uint64_t seed = 1);

// Criterion 10 against artifacts already produced by a first run of 1..9.
CriterionResult determinism_criterion(const std::vector<CriterionResult>& first, std::uint64_t seed = 1);

// All criteria in order; 1..9 run once and criterion 10 reruns them.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 1);

// "criterion 01 PASS <title>" or FAIL.
std::string criterion_line(const CriterionResult& r);

}  // namespace hamrep
