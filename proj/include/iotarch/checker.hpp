#pragma once

#include "model.hpp"
#include "relation.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace iotarch {

struct CheckerConfig {
    // Surface sensors whose inD image or composed diagram legs are not single-valued.
    bool strict_functional = false;
    // Let Warning diagnostics count against the verdicts.
    bool treat_warnings_as_errors = false;
};

struct CheckReport {
    std::vector<Diagnostic> diagnostics;
    bool verdict_architecture = false;
    bool verdict_functioning = false;
};

namespace detail {

inline std::string join(const IdSet& ids) {
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += ", ";
        out += id.str();
    }
    return out;
}

inline std::string braces(const IdSet& ids) { return "{" + join(ids) + "}"; }

template <typename Map>
const IdSet* protocols_of(const Map& m, const Identifier& id) {
    auto it = m.find(id);
    if (it == m.end()) return nullptr;
    if constexpr (requires { it->second.protocols(); }) {
        return &it->second.protocols();
    } else {
        return &it->second.protocols;
    }
}

inline bool intersects(const IdSet& a, const IdSet& b) {
    return std::any_of(a.begin(), a.end(), [&b](const Identifier& x) { return b.contains(x); });
}

} // namespace detail

// The two diagnostics of the commuting-diagram rule. Shared with the brute-force oracle so both
// report byte-identical records.
inline Diagnostic unjustified_controller_path(const Identifier& sensor, const Identifier& actuator) {
    return {RuleCode::ConsistBindings,
            {sensor, actuator},
            sensor + " -> " + actuator + ": controller path not justified by control dependency",
            Severity::Error};
}

inline Diagnostic unrealized_control_dependency(const Identifier& sensor, const Identifier& actuator) {
    return {RuleCode::ConsistBindings,
            {sensor, actuator},
            sensor + " -> " + actuator + ": control dependency not realized by any controller path",
            Severity::Error};
}

// binding_ds and binding_ad must both be non-empty. Devices missing from a non-empty binding
// relation are reported as warnings.
inline std::vector<Diagnostic> check_connected_hw(const SystemModel& sys) {
    std::vector<Diagnostic> out;
    const auto& ds = sys.binding_ds();
    const auto& ad = sys.binding_ad();
    if (ds.empty()) {
        out.push_back({RuleCode::ConnectedHw, {"bindingDS"},
                       "bindingDS is empty: no device is bound to a sensor", Severity::Error});
    }
    if (ad.empty()) {
        out.push_back({RuleCode::ConnectedHw, {"bindingAD"},
                       "bindingAD is empty: no actuator is bound to a device", Severity::Error});
    }
    const IdSet sensed = ds.domain();
    const IdSet actuated = ad.range();
    for (const auto& [id, device] : sys.devices()) {
        if (!ds.empty() && !sensed.contains(id)) {
            out.push_back({RuleCode::ConnectedHw, {id}, "device " + id + " is not bound to any sensor",
                           Severity::Warning});
        }
        if (!ad.empty() && !actuated.contains(id)) {
            out.push_back({RuleCode::ConnectedHw, {id}, "device " + id + " is not bound to any actuator",
                           Severity::Warning});
        }
    }
    return out;
}

// Every controller needs at least one input sensor and one output actuator.
inline std::vector<Diagnostic> check_well_struct_ctrl(const SystemModel& sys) {
    std::vector<Diagnostic> out;
    const IdSet fed = sys.in_d().range();
    const IdSet driving = sys.out_o().domain();
    for (const auto& [id, ctl] : sys.controllers()) {
        const bool has_in = fed.contains(id);
        const bool has_out = driving.contains(id);
        if (has_in && has_out) continue;
        std::string what;
        if (!has_in && !has_out) {
            what = "has no input sensor (inD) and no output actuator (outO)";
        } else if (!has_in) {
            what = "has no input sensor (inD)";
        } else {
            what = "has no output actuator (outO)";
        }
        out.push_back({RuleCode::WellStructCtrl, {id}, "controller " + id + " " + what, Severity::Error});
    }
    return out;
}

// dom(inD) subset of S and ran(outO) subset of A. Only hand-assembled models can fail this.
inline std::vector<Diagnostic> check_weak_consistent_cpnts(const SystemModel& sys) {
    std::vector<Diagnostic> out;
    for (const auto& s : sys.in_d().domain()) {
        if (!sys.sensors().contains(s)) {
            out.push_back({RuleCode::WeakConsistent, {s}, "inD uses " + s + ", which is not a declared sensor",
                           Severity::Error});
        }
    }
    for (const auto& a : sys.out_o().range()) {
        if (!sys.actuators().contains(a)) {
            out.push_back({RuleCode::WeakConsistent, {a}, "outO uses " + a + ", which is not a declared actuator",
                           Severity::Error});
        }
    }
    return out;
}

// inD ; outO must equal CtrlDepend ; binding_ad^-1 as sets of (sensor, actuator) pairs.
inline std::vector<Diagnostic> check_consist_bindings(const SystemModel& sys, const CheckerConfig& cfg = {}) {
    std::vector<Diagnostic> out;
    const Relation via_controllers = compose(sys.in_d(), sys.out_o());
    const Relation via_devices = compose(sys.ctrl_depend(), inverse(sys.binding_ad()));

    for (const auto& [s, a] : difference(via_controllers, via_devices)) out.push_back(unjustified_controller_path(s, a));
    for (const auto& [s, a] : difference(via_devices, via_controllers)) out.push_back(unrealized_control_dependency(s, a));

    if (cfg.strict_functional) {
        auto warn_multi = [&out](const Identifier& s, const IdSet& image, const std::string& what) {
            if (image.size() <= 1) return;
            std::vector<Identifier> subjects{s};
            subjects.insert(subjects.end(), image.begin(), image.end());
            out.push_back({RuleCode::ConsistBindings, std::move(subjects),
                           "sensor " + s + " " + what + " (" + detail::join(image) + ")", Severity::Warning});
        };
        for (const auto& s : sys.in_d().domain()) warn_multi(s, sys.in_d().image(s), "feeds several controllers");
        for (const auto& s : via_controllers.domain()) {
            warn_multi(s, via_controllers.image(s), "reaches several actuators through controllers");
        }
        for (const auto& s : via_devices.domain()) {
            warn_multi(s, via_devices.image(s), "reaches several actuators through control dependencies");
        }
    }
    return out;
}

// For (s,d) in CtrlDepend, (s,c) in inD and (a,d) in binding_ad, (c,a) must be in outO.
inline std::vector<Diagnostic> check_ctrl_dependency(const SystemModel& sys) {
    std::vector<Diagnostic> out;
    for (const auto& [s, d] : sys.ctrl_depend()) {
        const IdSet controllers = sys.in_d().image(s);
        const IdSet actuators = sys.binding_ad().preimage(d);
        for (const auto& c : controllers) {
            for (const auto& a : actuators) {
                if (sys.out_o().contains(c, a)) continue;
                out.push_back({RuleCode::CtrlDependency,
                               {s, d, c, a},
                               "sensor " + s + " controls device " + d + " and feeds controller " + c +
                                   ", but " + c + " does not drive actuator " + a + " bound to " + d,
                               Severity::Error});
            }
        }
    }
    return out;
}

// ran(inD) subset of dom(outO).
inline std::vector<Diagnostic> check_sensor2actuator(const SystemModel& sys) {
    std::vector<Diagnostic> out;
    const IdSet driving = sys.out_o().domain();
    for (const auto& c : sys.in_d().range()) {
        if (driving.contains(c)) continue;
        out.push_back({RuleCode::Sensor2Actuator, {c},
                       "controller " + c + " collects sensor inputs but sends orders to no actuator",
                       Severity::Error});
    }
    return out;
}

// Every inD and outO pair must share at least one communication protocol.
inline std::vector<Diagnostic> check_comp_comm(const SystemModel& sys) {
    std::vector<Diagnostic> out;
    auto check_pair = [&out](const Identifier& x, std::string_view x_kind, const IdSet* px, const Identifier& y,
                             std::string_view y_kind, const IdSet* py) {
        if (px == nullptr || py == nullptr) return; // dangling; reported by the weak-consistency rule
        if (detail::intersects(*px, *py)) return;
        out.push_back({RuleCode::CompComm,
                       {x, y},
                       std::string{x_kind} + " " + x + " " + detail::braces(*px) + " and " + std::string{y_kind} +
                           " " + y + " " + detail::braces(*py) + " share no communication protocol",
                       Severity::Error});
    };
    for (const auto& [s, c] : sys.in_d()) {
        check_pair(s, "sensor", detail::protocols_of(sys.sensors(), s), c, "controller",
                   detail::protocols_of(sys.controllers(), c));
    }
    for (const auto& [c, a] : sys.out_o()) {
        check_pair(c, "controller", detail::protocols_of(sys.controllers(), c), a, "actuator",
                   detail::protocols_of(sys.actuators(), a));
    }
    return out;
}

inline bool counts_against_verdict(const Diagnostic& d, const CheckerConfig& cfg) {
    return d.severity == Severity::Error || cfg.treat_warnings_as_errors;
}

// Runs all seven rules. Architecture holds iff no counted CONNECTED_HW diagnostic; functioning
// additionally requires no counted diagnostic from the other six rules.
inline CheckReport check_all(const SystemModel& sys, const CheckerConfig& cfg = {}) {
    CheckReport report;
    auto append = [&report](std::vector<Diagnostic> ds) {
        report.diagnostics.insert(report.diagnostics.end(), std::make_move_iterator(ds.begin()),
                                  std::make_move_iterator(ds.end()));
    };
    append(check_connected_hw(sys));
    append(check_well_struct_ctrl(sys));
    append(check_weak_consistent_cpnts(sys));
    append(check_consist_bindings(sys, cfg));
    append(check_ctrl_dependency(sys));
    append(check_sensor2actuator(sys));
    append(check_comp_comm(sys));
    std::sort(report.diagnostics.begin(), report.diagnostics.end(), diagnostic_less);

    bool architecture = true;
    bool others = true;
    for (const auto& d : report.diagnostics) {
        if (!counts_against_verdict(d, cfg)) continue;
        (d.rule == RuleCode::ConnectedHw ? architecture : others) = false;
    }
    report.verdict_architecture = architecture;
    report.verdict_functioning = architecture && others;
    return report;
}

} // namespace iotarch
