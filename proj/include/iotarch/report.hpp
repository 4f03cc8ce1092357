#pragma once

#include "checker.hpp"
#include "model.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace iotarch {

// `RULECODE subject1,subject2,... : message`
inline std::string format_diagnostic_text(const Diagnostic& d) {
    std::string out{to_string(d.rule)};
    out += ' ';
    for (std::size_t i = 0; i < d.subjects.size(); ++i) {
        if (i > 0) out += ',';
        out += d.subjects[i].str();
    }
    out += " : ";
    if (d.severity == Severity::Warning) out += "warning: ";
    out += d.message;
    return out;
}

inline nlohmann::json diagnostic_to_json(const Diagnostic& d) {
    nlohmann::json subjects = nlohmann::json::array();
    for (const auto& s : d.subjects) subjects.push_back(s.str());
    return {{"ruleCode", std::string{to_string(d.rule)}},
            {"subjects", std::move(subjects)},
            {"message", d.message},
            {"severity", std::string{to_string(d.severity)}}};
}

// Inverse of diagnostic_to_json. Throws std::invalid_argument on unknown codes or severities.
inline Diagnostic diagnostic_from_json(const nlohmann::json& j) {
    const auto code = rule_code_from_string(j.at("ruleCode").get<std::string>());
    if (!code) throw std::invalid_argument("unknown ruleCode " + j.at("ruleCode").get<std::string>());
    const auto sev = j.at("severity").get<std::string>();
    if (sev != "Error" && sev != "Warning") throw std::invalid_argument("unknown severity " + sev);
    Diagnostic d{*code, {}, j.at("message").get<std::string>(), sev == "Error" ? Severity::Error : Severity::Warning};
    for (const auto& s : j.at("subjects")) d.subjects.emplace_back(s.get<std::string>());
    return d;
}

inline std::string format_report_text(const CheckReport& r) {
    std::string out;
    for (const auto& d : r.diagnostics) out += format_diagnostic_text(d) + "\n";
    return out;
}

// One JSON object per line.
inline std::string format_report_structured(const CheckReport& r) {
    std::string out;
    for (const auto& d : r.diagnostics) out += diagnostic_to_json(d).dump() + "\n";
    return out;
}

} // namespace iotarch
