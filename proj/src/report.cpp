#include "hamrep/report.hpp"

#include <charconv>
#include <cmath>

namespace hamrep {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

nlohmann::json json_number(double v) {
    if (std::isfinite(v)) return v == 0.0 ? 0.0 : v;
    return format_number(v);
}

void CheckReport::add_witness(nlohmann::json w, std::size_t limit) {
    if (witnesses.size() < limit) witnesses.push_back(std::move(w));
}

void CheckReport::absorb(CheckReport child) {
    pass = pass && child.pass;
    children.push_back(std::move(child));
}

nlohmann::json CheckReport::to_json() const {
    nlohmann::json j;
    j["check"] = check;
    j["pass"] = pass;
    j["verdict"] = verdict.empty() ? (pass ? "pass" : "fail") : verdict;
    j["worst_margin"] = json_number(worst);
    j["tolerance"] = json_number(tolerance);
    j["witnesses"] = witnesses;
    if (!children.empty()) {
        auto arr = nlohmann::json::array();
        for (const auto& c : children) arr.push_back(c.to_json());
        j["children"] = arr;
    }
    return j;
}

std::string dump_report(const nlohmann::json& body) {
    nlohmann::json doc = body;
    doc["schema"] = 1;
    return doc.dump(2) + "\n";
}

}  // namespace hamrep
