#pragma once

#include "identifier.hpp"
#include "relation.hpp"
#include "value_range.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace iotarch {

// ---------------------------------------------------------------------------
// Physical components
// ---------------------------------------------------------------------------

// A sensor: category, finite value range, current value inside that range, protocols.
class Sensor {
public:
    Sensor(Identifier id, Identifier category, ValueRange range, Value value, IdSet protocols)
        : id_{std::move(id)}, category_{std::move(category)}, range_{std::move(range)}, value_{value},
          protocols_{std::move(protocols)} {
        if (range_.empty()) throw std::invalid_argument("sensor " + id_ + ": empty value range");
        if (!range_.contains(value_)) {
            throw std::invalid_argument("sensor " + id_ + ": value " + std::to_string(value_) +
                                        " outside range " + range_.to_string());
        }
    }

    [[nodiscard]] const Identifier& id() const noexcept { return id_; }
    [[nodiscard]] const Identifier& category() const noexcept { return category_; }
    [[nodiscard]] const ValueRange& range() const noexcept { return range_; }
    [[nodiscard]] Value value() const noexcept { return value_; }
    [[nodiscard]] const IdSet& protocols() const noexcept { return protocols_; }

    friend bool operator==(const Sensor&, const Sensor&) = default;

private:
    Identifier id_;
    Identifier category_;
    ValueRange range_;
    Value value_;
    IdSet protocols_;
};

// An actuator maps each accepted order to the signal it emits towards its devices.
// The input orders are exactly the keys of the order map.
class Actuator {
public:
    Actuator(Identifier id, Identifier category, std::map<Identifier, Identifier> signal_of_order,
             IdSet output_signals, IdSet protocols)
        : id_{std::move(id)}, category_{std::move(category)}, signal_of_order_{std::move(signal_of_order)},
          output_signals_{std::move(output_signals)}, protocols_{std::move(protocols)} {
        if (signal_of_order_.empty()) throw std::invalid_argument("actuator " + id_ + ": no input orders");
        for (const auto& [order, signal] : signal_of_order_) {
            if (!output_signals_.contains(signal)) {
                throw std::invalid_argument("actuator " + id_ + ": signal " + signal + " of order " + order +
                                            " is not an output signal");
            }
        }
    }

    // Output signals default to the range of the order map.
    Actuator(Identifier id, Identifier category, std::map<Identifier, Identifier> signal_of_order, IdSet protocols)
        : Actuator(std::move(id), std::move(category), signal_of_order, range_of(signal_of_order),
                   std::move(protocols)) {}

    [[nodiscard]] const Identifier& id() const noexcept { return id_; }
    [[nodiscard]] const Identifier& category() const noexcept { return category_; }
    [[nodiscard]] const std::map<Identifier, Identifier>& signal_of_order() const noexcept { return signal_of_order_; }
    [[nodiscard]] const IdSet& output_signals() const noexcept { return output_signals_; }
    [[nodiscard]] const IdSet& protocols() const noexcept { return protocols_; }

    [[nodiscard]] IdSet input_orders() const {
        IdSet out;
        for (const auto& kv : signal_of_order_) out.insert(out.end(), kv.first);
        return out;
    }
    [[nodiscard]] bool accepts(const Identifier& order) const { return signal_of_order_.contains(order); }
    [[nodiscard]] std::optional<Identifier> signal_for(const Identifier& order) const {
        auto it = signal_of_order_.find(order);
        if (it == signal_of_order_.end()) return std::nullopt;
        return it->second;
    }

    friend bool operator==(const Actuator&, const Actuator&) = default;

private:
    static IdSet range_of(const std::map<Identifier, Identifier>& m) {
        IdSet out;
        for (const auto& kv : m) out.insert(kv.second);
        return out;
    }

    Identifier id_;
    Identifier category_;
    std::map<Identifier, Identifier> signal_of_order_;
    IdSet output_signals_;
    IdSet protocols_;
};

// Labelled transition system <states, initial, signals, delta>. delta may be partial.
class DeviceBehaviour {
public:
    using Delta = std::map<std::pair<Identifier, Identifier>, Identifier>;

    DeviceBehaviour(IdSet states, Identifier initial, IdSet signals, Delta delta)
        : states_{std::move(states)}, initial_{std::move(initial)}, signals_{std::move(signals)},
          delta_{std::move(delta)} {
        if (states_.empty()) throw std::invalid_argument("behaviour has no states");
        if (!states_.contains(initial_)) {
            throw std::invalid_argument("initial state " + initial_ + " is not a declared state");
        }
        for (const auto& [key, target] : delta_) {
            if (!states_.contains(key.first)) throw std::invalid_argument("transition from unknown state " + key.first);
            if (!signals_.contains(key.second)) throw std::invalid_argument("transition on unknown signal " + key.second);
            if (!states_.contains(target)) throw std::invalid_argument("transition to unknown state " + target);
        }
    }

    // States and signals are those mentioned by the initial state and the transitions.
    static DeviceBehaviour from_transitions(Identifier initial, Delta delta) {
        IdSet states{initial};
        IdSet signals;
        for (const auto& [key, target] : delta) {
            states.insert(key.first);
            states.insert(target);
            signals.insert(key.second);
        }
        return DeviceBehaviour{std::move(states), std::move(initial), std::move(signals), std::move(delta)};
    }

    // Two-state light-like device: off/on, total over {on_signal, off_signal}.
    static DeviceBehaviour two_state() {
        return DeviceBehaviour{{"off", "on"},
                               "off",
                               {"off_signal", "on_signal"},
                               {{{"off", "on_signal"}, "on"},
                                {{"on", "off_signal"}, "off"},
                                {{"on", "on_signal"}, "on"},
                                {{"off", "off_signal"}, "off"}}};
    }

    [[nodiscard]] const IdSet& states() const noexcept { return states_; }
    [[nodiscard]] const Identifier& initial() const noexcept { return initial_; }
    [[nodiscard]] const IdSet& signals() const noexcept { return signals_; }
    [[nodiscard]] const Delta& delta() const noexcept { return delta_; }

    [[nodiscard]] std::optional<Identifier> next(const Identifier& state, const Identifier& signal) const {
        auto it = delta_.find({state, signal});
        if (it == delta_.end()) return std::nullopt;
        return it->second;
    }

    friend bool operator==(const DeviceBehaviour&, const DeviceBehaviour&) = default;

private:
    IdSet states_;
    Identifier initial_;
    IdSet signals_;
    Delta delta_;
};

class Device {
public:
    Device(Identifier id, Identifier category, DeviceBehaviour behaviour)
        : Device(id, std::move(category), behaviour, behaviour.initial()) {}

    Device(Identifier id, Identifier category, DeviceBehaviour behaviour, Identifier current_state)
        : id_{std::move(id)}, category_{std::move(category)}, behaviour_{std::move(behaviour)},
          current_state_{std::move(current_state)} {
        if (!behaviour_.states().contains(current_state_)) {
            throw std::invalid_argument("device " + id_ + ": current state " + current_state_ + " is not a state");
        }
    }

    [[nodiscard]] const Identifier& id() const noexcept { return id_; }
    [[nodiscard]] const Identifier& category() const noexcept { return category_; }
    [[nodiscard]] const DeviceBehaviour& behaviour() const noexcept { return behaviour_; }
    [[nodiscard]] const Identifier& current_state() const noexcept { return current_state_; }

    friend bool operator==(const Device&, const Device&) = default;

private:
    Identifier id_;
    Identifier category_;
    DeviceBehaviour behaviour_;
    Identifier current_state_;
};

// ---------------------------------------------------------------------------
// Software components
// ---------------------------------------------------------------------------

struct LiteralPattern {
    Value value;
    friend bool operator==(const LiteralPattern&, const LiteralPattern&) = default;
};

struct RangePattern {
    Value lo;
    Value hi;
    friend bool operator==(const RangePattern&, const RangePattern&) = default;
};

// Matches any value; the variable name is kept only for printing.
struct WildcardPattern {
    Identifier variable;
    friend bool operator==(const WildcardPattern&, const WildcardPattern&) = default;
};

using ValuePattern = std::variant<LiteralPattern, RangePattern, WildcardPattern>;

inline bool matches(const ValuePattern& p, Value v) {
    return std::visit(
        [v](const auto& q) -> bool {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, LiteralPattern>) {
                return q.value == v;
            } else if constexpr (std::is_same_v<T, RangePattern>) {
                return q.lo <= v && v <= q.hi;
            } else {
                return true;
            }
        },
        p);
}

// `Kind(pattern) --> Order(order)`. The kind tag is carried but never interpreted.
class ControlRule {
public:
    ControlRule(Identifier kind, ValuePattern pattern, Identifier order)
        : kind_{std::move(kind)}, pattern_{std::move(pattern)}, order_{std::move(order)} {
        if (const auto* r = std::get_if<RangePattern>(&pattern_); r != nullptr && r->lo > r->hi) {
            throw std::invalid_argument("range pattern [" + std::to_string(r->lo) + ".." + std::to_string(r->hi) +
                                        "] has lo > hi");
        }
    }

    [[nodiscard]] const Identifier& kind() const noexcept { return kind_; }
    [[nodiscard]] const ValuePattern& pattern() const noexcept { return pattern_; }
    [[nodiscard]] const Identifier& order() const noexcept { return order_; }

    friend bool operator==(const ControlRule&, const ControlRule&) = default;

private:
    Identifier kind_;
    ValuePattern pattern_;
    Identifier order_;
};

struct Service {
    Identifier id;
    std::vector<ControlRule> rules;

    friend bool operator==(const Service&, const Service&) = default;
};

struct Controller {
    Identifier id;
    IdSet protocols;

    friend bool operator==(const Controller&, const Controller&) = default;
};

// ---------------------------------------------------------------------------
// Architecture
// ---------------------------------------------------------------------------

template <typename T>
using ById = std::map<Identifier, T>;

struct PhysicalModel {
    ById<Sensor> sensors;
    ById<Actuator> actuators;
    ById<Device> devices;
    Relation binding_ds; // device x sensor
    Relation binding_ad; // actuator x device

    friend bool operator==(const PhysicalModel&, const PhysicalModel&) = default;
};

struct SoftwareModel {
    ById<Controller> controllers;
    ById<Service> services;
    Relation serv_depend; // controller x service

    friend bool operator==(const SoftwareModel&, const SoftwareModel&) = default;
};

enum class RuleCode {
    ConnectedHw,
    WellStructCtrl,
    WeakConsistent,
    ConsistBindings,
    CtrlDependency,
    Sensor2Actuator,
    CompComm,
    RefIntegrity,
};

enum class Severity { Error, Warning };

inline std::string_view to_string(RuleCode c) noexcept {
    switch (c) {
        case RuleCode::ConnectedHw: return "CONNECTED_HW";
        case RuleCode::WellStructCtrl: return "WELL_STRUCT_CTRL";
        case RuleCode::WeakConsistent: return "WEAK_CONSISTENT";
        case RuleCode::ConsistBindings: return "CONSIST_BINDINGS";
        case RuleCode::CtrlDependency: return "CTRL_DEPENDENCY";
        case RuleCode::Sensor2Actuator: return "SENSOR2ACTUATOR";
        case RuleCode::CompComm: return "COMP_COMM";
        case RuleCode::RefIntegrity: return "REF_INTEGRITY";
    }
    return "?";
}

inline std::string_view to_string(Severity s) noexcept { return s == Severity::Error ? "Error" : "Warning"; }

inline std::optional<RuleCode> rule_code_from_string(std::string_view s) {
    for (auto c : {RuleCode::ConnectedHw, RuleCode::WellStructCtrl, RuleCode::WeakConsistent,
                   RuleCode::ConsistBindings, RuleCode::CtrlDependency, RuleCode::Sensor2Actuator,
                   RuleCode::CompComm, RuleCode::RefIntegrity}) {
        if (to_string(c) == s) return c;
    }
    return std::nullopt;
}

struct Diagnostic {
    RuleCode rule;
    std::vector<Identifier> subjects;
    std::string message;
    Severity severity = Severity::Error;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

// Report order: rule code, then subjects, then message.
inline bool diagnostic_less(const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.rule, a.subjects, a.message, a.severity) < std::tie(b.rule, b.subjects, b.message, b.severity);
}

class ModelError : public std::runtime_error {
public:
    explicit ModelError(std::vector<Diagnostic> diagnostics)
        : std::runtime_error(summary(diagnostics)), diagnostics_{std::move(diagnostics)} {}

    [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    static std::string summary(const std::vector<Diagnostic>& ds) {
        std::string out = std::to_string(ds.size()) + " referential integrity error(s)";
        if (!ds.empty()) out += ": " + ds.front().message;
        return out;
    }

    std::vector<Diagnostic> diagnostics_;
};

class SystemModel;
SystemModel build_system(Identifier name, PhysicalModel phys, SoftwareModel soft, Relation in_d, Relation out_o,
                         Relation ctrl_depend);

// The complete control system: physical part, software part and their interconnection.
// Values produced by build_system are referentially intact; unchecked() skips validation.
class SystemModel {
public:
    static SystemModel unchecked(Identifier name, PhysicalModel phys, SoftwareModel soft, Relation in_d,
                                 Relation out_o, Relation ctrl_depend) {
        return SystemModel{std::move(name), std::move(phys), std::move(soft), std::move(in_d), std::move(out_o),
                           std::move(ctrl_depend)};
    }

    [[nodiscard]] const Identifier& name() const noexcept { return name_; }
    [[nodiscard]] const PhysicalModel& phys() const noexcept { return phys_; }
    [[nodiscard]] const SoftwareModel& soft() const noexcept { return soft_; }
    [[nodiscard]] const Relation& in_d() const noexcept { return in_d_; }
    [[nodiscard]] const Relation& out_o() const noexcept { return out_o_; }
    [[nodiscard]] const Relation& ctrl_depend() const noexcept { return ctrl_depend_; }

    [[nodiscard]] const ById<Sensor>& sensors() const noexcept { return phys_.sensors; }
    [[nodiscard]] const ById<Actuator>& actuators() const noexcept { return phys_.actuators; }
    [[nodiscard]] const ById<Device>& devices() const noexcept { return phys_.devices; }
    [[nodiscard]] const ById<Controller>& controllers() const noexcept { return soft_.controllers; }
    [[nodiscard]] const ById<Service>& services() const noexcept { return soft_.services; }
    [[nodiscard]] const Relation& binding_ds() const noexcept { return phys_.binding_ds; }
    [[nodiscard]] const Relation& binding_ad() const noexcept { return phys_.binding_ad; }
    [[nodiscard]] const Relation& serv_depend() const noexcept { return soft_.serv_depend; }

    friend bool operator==(const SystemModel&, const SystemModel&) = default;

private:
    SystemModel(Identifier name, PhysicalModel phys, SoftwareModel soft, Relation in_d, Relation out_o,
                Relation ctrl_depend)
        : name_{std::move(name)}, phys_{std::move(phys)}, soft_{std::move(soft)}, in_d_{std::move(in_d)},
          out_o_{std::move(out_o)}, ctrl_depend_{std::move(ctrl_depend)} {}

    Identifier name_;
    PhysicalModel phys_;
    SoftwareModel soft_;
    Relation in_d_;
    Relation out_o_;
    Relation ctrl_depend_;
};

namespace detail {

template <typename T>
void check_keys(std::string_view kind, const ById<T>& m, std::vector<Diagnostic>& out) {
    for (const auto& [key, value] : m) {
        if (!(key == value.id())) {
            out.push_back({RuleCode::RefIntegrity,
                           {key, value.id()},
                           std::string{kind} + " registered as " + key + " but named " + value.id(),
                           Severity::Error});
        }
    }
}

template <typename T>
void check_keys_plain(std::string_view kind, const ById<T>& m, std::vector<Diagnostic>& out) {
    for (const auto& [key, value] : m) {
        if (!(key == value.id)) {
            out.push_back({RuleCode::RefIntegrity,
                           {key, value.id},
                           std::string{kind} + " registered as " + key + " but named " + value.id,
                           Severity::Error});
        }
    }
}

template <typename LeftMap, typename RightMap>
void check_endpoints(std::string_view relation, const Relation& r, std::string_view left_kind, const LeftMap& left,
                     std::string_view right_kind, const RightMap& right, std::vector<Diagnostic>& out) {
    for (const auto& [x, y] : r) {
        const std::string pair = "(" + x + ", " + y + ")";
        if (!left.contains(x)) {
            out.push_back({RuleCode::RefIntegrity,
                           {x},
                           std::string{relation} + " pair " + pair + ": " + std::string{left_kind} + " " + x +
                               " is not declared",
                           Severity::Error});
        }
        if (!right.contains(y)) {
            out.push_back({RuleCode::RefIntegrity,
                           {y},
                           std::string{relation} + " pair " + pair + ": " + std::string{right_kind} + " " + y +
                               " is not declared",
                           Severity::Error});
        }
    }
}

} // namespace detail

// Validates referential integrity and returns the assembled model. Throws ModelError carrying
// every REF_INTEGRITY diagnostic found; never returns a partially valid model.
inline SystemModel build_system(Identifier name, PhysicalModel phys, SoftwareModel soft, Relation in_d,
                                Relation out_o, Relation ctrl_depend) {
    std::vector<Diagnostic> errors;

    detail::check_keys("sensor", phys.sensors, errors);
    detail::check_keys("actuator", phys.actuators, errors);
    detail::check_keys("device", phys.devices, errors);
    detail::check_keys_plain("controller", soft.controllers, errors);
    detail::check_keys_plain("service", soft.services, errors);

    // Each name may live in one namespace only.
    std::map<Identifier, std::vector<std::string_view>> owners;
    for (const auto& kv : phys.sensors) owners[kv.first].push_back("sensor");
    for (const auto& kv : phys.actuators) owners[kv.first].push_back("actuator");
    for (const auto& kv : phys.devices) owners[kv.first].push_back("device");
    for (const auto& kv : soft.controllers) owners[kv.first].push_back("controller");
    for (const auto& kv : soft.services) owners[kv.first].push_back("service");
    IdSet protocols;
    for (const auto& kv : phys.sensors) protocols.insert(kv.second.protocols().begin(), kv.second.protocols().end());
    for (const auto& kv : phys.actuators) protocols.insert(kv.second.protocols().begin(), kv.second.protocols().end());
    for (const auto& kv : soft.controllers) protocols.insert(kv.second.protocols.begin(), kv.second.protocols.end());
    for (const auto& p : protocols) owners[p].push_back("protocol");
    for (const auto& [id, kinds] : owners) {
        if (kinds.size() < 2) continue;
        std::string list;
        for (auto k : kinds) {
            if (!list.empty()) list += ", ";
            list += k;
        }
        errors.push_back({RuleCode::RefIntegrity, {id}, "name " + id + " is used in several namespaces (" + list + ")",
                          Severity::Error});
    }

    detail::check_endpoints("binding_ds", phys.binding_ds, "device", phys.devices, "sensor", phys.sensors, errors);
    detail::check_endpoints("binding_ad", phys.binding_ad, "actuator", phys.actuators, "device", phys.devices, errors);
    detail::check_endpoints("servDepend", soft.serv_depend, "controller", soft.controllers, "service", soft.services,
                            errors);
    detail::check_endpoints("inD", in_d, "sensor", phys.sensors, "controller", soft.controllers, errors);
    detail::check_endpoints("outO", out_o, "controller", soft.controllers, "actuator", phys.actuators, errors);
    detail::check_endpoints("CtrlDepend", ctrl_depend, "sensor", phys.sensors, "device", phys.devices, errors);

    if (!errors.empty()) throw ModelError{std::move(errors)};
    return SystemModel::unchecked(std::move(name), std::move(phys), std::move(soft), std::move(in_d),
                                  std::move(out_o), std::move(ctrl_depend));
}

} // namespace iotarch
