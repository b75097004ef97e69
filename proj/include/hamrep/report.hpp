#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace hamrep {

// Shortest round-trip decimal form; "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double v);
// JSON number, or the string form above for non-finite values.
nlohmann::json json_number(double v);

// Outcome of one numerical check. worst is the largest measured violation
// (or gap, or excess) and the check passes when worst <= tolerance, unless
// the check says otherwise in verdict.
struct CheckReport {
    std::string check;
    bool pass = true;
    std::string verdict;
    double worst = 0.0;
    double tolerance = 0.0;
    nlohmann::json witnesses = nlohmann::json::array();
    std::vector<CheckReport> children;

    // Keeps the witness list short: only the first few are stored.
    void add_witness(nlohmann::json w, std::size_t limit = 8);
    // pass = all children pass (and this node's own pass flag).
    void absorb(CheckReport child);
    nlohmann::json to_json() const;
};

// Named output file produced by a command or an acceptance criterion.
struct Artifact {
    std::string name;
    std::string content;
};

// Serialized report document with the versioned schema field.
std::string dump_report(const nlohmann::json& body);

}  // namespace hamrep
