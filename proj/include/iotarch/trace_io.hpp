#pragma once

#include "semantics.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace iotarch {

// Line-oriented trace records, LF-terminated:
//   TICK n SENSE s v
//   ORDER c a ord via srv      (accepted order)
//   REJECT c a ord via srv     (order outside the actuator's input orders)
//   TRANS d s1 -sig-> s2
//   STUCK d s1 -sig->          (no delta entry; state unchanged)
inline std::string format_trace(const Trace& trace) {
    std::ostringstream os;
    for (const auto& step : trace.steps) {
        os << "TICK " << step.sense.tick << " SENSE " << step.sense.sensor << " " << step.sense.value << "\n";
        for (const auto& o : step.orders) {
            os << (o.accepted ? "ORDER " : "REJECT ") << o.controller << " " << o.actuator << " " << o.order
               << " via " << o.via_service << "\n";
        }
        for (const auto& t : step.transitions) {
            if (t.to) {
                os << "TRANS " << t.device << " " << t.from << " -" << t.signal << "-> " << *t.to << "\n";
            } else {
                os << "STUCK " << t.device << " " << t.from << " -" << t.signal << "->\n";
            }
        }
    }
    return os.str();
}

struct ScenarioLine {
    SenseEvent event;
    int line = 0;
};

class ScenarioError : public std::runtime_error {
public:
    ScenarioError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_{line} {}

    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

// One event per line, `tick sensorId value`. Blank lines and lines starting with `#` are skipped.
inline std::vector<ScenarioLine> parse_scenario(std::string_view text) {
    std::vector<ScenarioLine> out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string line{text.substr(pos, eol - pos)};
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        std::istringstream in{line};
        std::string tick_s, sensor_s, value_s, extra;
        if (!(in >> tick_s)) continue;
        if (tick_s.front() == '#') continue;
        if (!(in >> sensor_s >> value_s) || (in >> extra)) {
            throw ScenarioError(line_no, "expected `tick sensorId value`");
        }
        auto to_int = [line_no](const std::string& s, std::string_view what) {
            std::int64_t v{};
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc{} || ptr != s.data() + s.size()) {
                throw ScenarioError(line_no, std::string{what} + " '" + s + "' is not an integer");
            }
            return v;
        };
        const Tick tick = to_int(tick_s, "tick");
        if (tick < 0) throw ScenarioError(line_no, "tick must be non-negative");
        if (!Identifier::is_valid(sensor_s)) throw ScenarioError(line_no, "invalid sensor identifier '" + sensor_s + "'");
        out.push_back({SenseEvent{Identifier{sensor_s}, to_int(value_s, "value"), tick}, line_no});
    }
    return out;
}

} // namespace iotarch
