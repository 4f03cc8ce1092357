#pragma once

#include "checker.hpp"
#include "model.hpp"

#include <stdexcept>
#include <vector>

namespace iotarch {

inline constexpr std::size_t kOracleMaxElements = 24;

// Brute-force reference for check_consist_bindings: for each (sensor, actuator) pair, search every
// controller and every device for a witness of each diagram leg. Quadratic-times-linear; test use only.
inline std::vector<Diagnostic> oracle_consist_bindings(const SystemModel& sys) {
    const std::size_t n =
        sys.sensors().size() + sys.actuators().size() + sys.devices().size() + sys.controllers().size();
    if (n > kOracleMaxElements) {
        throw std::length_error("oracle_consist_bindings: model has " + std::to_string(n) +
                                " elements, limit is " + std::to_string(kOracleMaxElements));
    }

    std::vector<Diagnostic> out;
    for (const auto& [s, sensor] : sys.sensors()) {
        for (const auto& [a, actuator] : sys.actuators()) {
            bool via_controller = false;
            for (const auto& [c, controller] : sys.controllers()) {
                if (sys.in_d().contains(s, c) && sys.out_o().contains(c, a)) {
                    via_controller = true;
                    break;
                }
            }
            bool via_device = false;
            for (const auto& [d, device] : sys.devices()) {
                if (sys.ctrl_depend().contains(s, d) && sys.binding_ad().contains(a, d)) {
                    via_device = true;
                    break;
                }
            }
            if (via_controller && !via_device) out.push_back(unjustified_controller_path(s, a));
            if (via_device && !via_controller) out.push_back(unrealized_control_dependency(s, a));
        }
    }
    return out;
}

} // namespace iotarch
