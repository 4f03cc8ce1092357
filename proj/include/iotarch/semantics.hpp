#pragma once

#include "checker.hpp"
#include "model.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace iotarch {

using Tick = std::int64_t;

struct SenseEvent {
    Identifier sensor;
    Value value = 0;
    Tick tick = 0;

    friend bool operator==(const SenseEvent&, const SenseEvent&) = default;
};

// An order sent by a controller to an actuator. Orders the actuator does not accept are kept
// in the trace with accepted == false and drive no device.
struct OrderEvent {
    Identifier controller;
    Identifier actuator;
    Identifier order;
    Tick cause_tick = 0;
    Identifier via_service;
    bool accepted = true;

    friend bool operator==(const OrderEvent&, const OrderEvent&) = default;
};

// `to` is empty when delta has no entry for (from, signal): the device stays in `from`.
struct DeviceTransition {
    Identifier device;
    Identifier from;
    Identifier signal;
    std::optional<Identifier> to;

    friend bool operator==(const DeviceTransition&, const DeviceTransition&) = default;
};

struct TraceStep {
    SenseEvent sense;
    std::vector<OrderEvent> orders;
    std::vector<DeviceTransition> transitions;

    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct Trace {
    std::vector<TraceStep> steps;

    friend bool operator==(const Trace&, const Trace&) = default;
};

class PreconditionViolation : public std::logic_error {
public:
    explicit PreconditionViolation(const std::string& what, std::optional<std::size_t> event_index = std::nullopt)
        : std::logic_error(what), event_index_{event_index} {}

    [[nodiscard]] std::optional<std::size_t> event_index() const noexcept { return event_index_; }

private:
    std::optional<std::size_t> event_index_;
};

// Specificity-tiered first match: the first literal rule equal to the value wins, else the first
// range containing it, else the first wildcard. Tiers keep `Lightvalue(0) --> Order(off)` reachable
// behind a leading catch-all rule.
inline std::optional<Identifier> compute_order(const Service& service, Value value) {
    const ControlRule* range_hit = nullptr;
    const ControlRule* wildcard_hit = nullptr;
    for (const auto& rule : service.rules) {
        const auto& p = rule.pattern();
        if (const auto* lit = std::get_if<LiteralPattern>(&p)) {
            if (lit->value == value) return rule.order();
        } else if (const auto* rng = std::get_if<RangePattern>(&p)) {
            if (range_hit == nullptr && rng->lo <= value && value <= rng->hi) range_hit = &rule;
        } else if (wildcard_hit == nullptr) {
            wildcard_hit = &rule;
        }
    }
    if (range_hit != nullptr) return range_hit->order();
    if (wildcard_hit != nullptr) return wildcard_hit->order();
    return std::nullopt;
}

// Simulation state over a functioning-consistent model. Only start() creates one, so every
// SimState satisfies the consistency precondition of the reaction rule.
class SimState {
public:
    static SimState start(SystemModel model) {
        const CheckReport report = check_all(model);
        if (!report.verdict_functioning) {
            throw PreconditionViolation("model " + model.name() + " is not functioning-consistent (" +
                                        std::to_string(report.diagnostics.size()) + " diagnostic(s))");
        }
        std::map<Identifier, Identifier> states;
        for (const auto& [id, d] : model.devices()) states.emplace(id, d.current_state());
        return SimState{std::make_shared<const SystemModel>(std::move(model)), std::move(states), 0};
    }

    [[nodiscard]] const SystemModel& model() const noexcept { return *model_; }
    [[nodiscard]] const std::map<Identifier, Identifier>& device_states() const noexcept { return states_; }
    [[nodiscard]] const Identifier& state_of(const Identifier& device) const { return states_.at(device); }
    [[nodiscard]] Tick tick() const noexcept { return tick_; }

    friend bool operator==(const SimState& a, const SimState& b) {
        return *a.model_ == *b.model_ && a.states_ == b.states_ && a.tick_ == b.tick_;
    }

private:
    SimState(std::shared_ptr<const SystemModel> model, std::map<Identifier, Identifier> states, Tick tick)
        : model_{std::move(model)}, states_{std::move(states)}, tick_{tick} {}

    friend struct StepAccess;

    std::shared_ptr<const SystemModel> model_;
    std::map<Identifier, Identifier> states_;
    Tick tick_ = 0;
};

struct StepResult {
    SimState state;
    TraceStep step;
};

struct StepAccess {
    static std::map<Identifier, Identifier>& states(SimState& s) { return s.states_; }
    static Tick& tick(SimState& s) { return s.tick_; }
};

// One sense-decision-control reaction. For every controller fed by the sensor and every actuator
// it drives that is bound to a device depending on the sensor, the controller's services (in id
// order, first match) compute one order; accepted orders become a signal applied to each such device.
inline StepResult step_react_on_sense(const SimState& st, const SenseEvent& ev) {
    const SystemModel& m = st.model();
    auto sensor_it = m.sensors().find(ev.sensor);
    if (sensor_it == m.sensors().end()) throw PreconditionViolation("unknown sensor " + ev.sensor);
    if (!sensor_it->second.range().contains(ev.value)) {
        throw PreconditionViolation("value " + std::to_string(ev.value) + " outside range " +
                                    sensor_it->second.range().to_string() + " of sensor " + ev.sensor);
    }

    SimState next = st;
    auto& states = StepAccess::states(next);
    TraceStep step{ev, {}, {}};

    const IdSet dependent_devices = m.ctrl_depend().image(ev.sensor);
    for (const auto& c : m.in_d().image(ev.sensor)) {
        // actuator -> devices it must drive for this sensor
        std::map<Identifier, IdSet> targets;
        for (const auto& d : dependent_devices) {
            for (const auto& a : m.binding_ad().preimage(d)) {
                if (m.out_o().contains(c, a)) targets[a].insert(d);
            }
        }
        if (targets.empty()) continue;

        std::optional<Identifier> order;
        Identifier via;
        for (const auto& srv : m.serv_depend().image(c)) {
            auto it = m.services().find(srv);
            if (it == m.services().end()) continue;
            if ((order = compute_order(it->second, ev.value))) {
                via = srv;
                break;
            }
        }
        if (!order) continue;

        for (const auto& [a, devices] : targets) {
            const Actuator& act = m.actuators().at(a);
            const auto signal = act.signal_for(*order);
            step.orders.push_back({c, a, *order, ev.tick, via, signal.has_value()});
            if (!signal) continue;
            for (const auto& d : devices) {
                Identifier& cur = states.at(d);
                auto to = m.devices().at(d).behaviour().next(cur, *signal);
                step.transitions.push_back({d, cur, *signal, to});
                if (to) cur = *to;
            }
        }
    }
    ++StepAccess::tick(next);
    return {std::move(next), std::move(step)};
}

// Folds step_react_on_sense over events whose ticks strictly increase.
inline Trace run_scenario(const SystemModel& model, const std::vector<SenseEvent>& events) {
    SimState st = SimState::start(model);
    Trace trace;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (i > 0 && events[i].tick <= events[i - 1].tick) {
            throw PreconditionViolation("event " + std::to_string(i) + ": tick " + std::to_string(events[i].tick) +
                                            " does not increase",
                                        i);
        }
        try {
            auto [next, step] = step_react_on_sense(st, events[i]);
            st = std::move(next);
            trace.steps.push_back(std::move(step));
        } catch (const PreconditionViolation& e) {
            throw PreconditionViolation("event " + std::to_string(i) + ": " + e.what(), i);
        }
    }
    return trace;
}

inline std::vector<SenseEvent> sense_events(const Trace& trace) {
    std::vector<SenseEvent> out;
    out.reserve(trace.steps.size());
    for (const auto& s : trace.steps) out.push_back(s.sense);
    return out;
}

// State reached by applying the recorded transitions to the model's starting states.
inline SimState replay(const SystemModel& model, const Trace& trace) {
    SimState st = SimState::start(model);
    auto& states = StepAccess::states(st);
    for (const auto& step : trace.steps) {
        for (const auto& t : step.transitions) {
            if (t.to) states.at(t.device) = *t.to;
        }
        ++StepAccess::tick(st);
    }
    return st;
}

// Every order must equal what its service computes for the causing value, travel an outO edge
// and come from a service the controller depends on.
inline bool audit_order_integrity(const Trace& trace, const SystemModel& model) {
    for (const auto& step : trace.steps) {
        for (const auto& o : step.orders) {
            auto srv = model.services().find(o.via_service);
            if (srv == model.services().end()) return false;
            if (compute_order(srv->second, step.sense.value) != o.order) return false;
            if (!model.serv_depend().contains(o.controller, o.via_service)) return false;
            if (!model.out_o().contains(o.controller, o.actuator)) return false;
            if (o.cause_tick != step.sense.tick) return false;
        }
    }
    return true;
}

} // namespace iotarch
