// iotarch: check, simulate, emit Event-B contexts for, and format `.iot` architecture files.
//
// Exit status: 0 success / consistent, 1 diagnostics reported, 2 parse, usage or I/O error.

#include <iotarch/iotarch.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kUsage = 2;

struct ReadError {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) throw ReadError{"cannot read " + path};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool color_enabled() {
    const char* v = std::getenv("IOTARCH_COLOR");
    return v != nullptr && std::string{v} == "1";
}

std::optional<iotarch::SystemModel> load_model(const std::string& path) {
    try {
        return iotarch::dsl::parse_system(read_file(path));
    } catch (const ReadError& e) {
        std::cerr << "iotarch: " << e.message << "\n";
    } catch (const iotarch::dsl::ParseFailure& e) {
        for (const auto& err : e.errors()) std::cerr << path << ":" << err.to_string() << "\n";
    }
    return std::nullopt;
}

void print_report(const iotarch::CheckReport& report, bool structured) {
    if (structured) {
        std::cout << iotarch::format_report_structured(report);
        return;
    }
    const bool color = color_enabled();
    for (const auto& d : report.diagnostics) {
        std::string line = iotarch::format_diagnostic_text(d);
        if (color) {
            const auto code_len = iotarch::to_string(d.rule).size();
            const char* esc = d.severity == iotarch::Severity::Error ? "\x1b[31m" : "\x1b[33m";
            line = esc + line.substr(0, code_len) + "\x1b[0m" + line.substr(code_len);
        }
        std::cout << line << "\n";
    }
}

void print_summary(const iotarch::SystemModel& sys, const iotarch::CheckReport& report) {
    std::size_t errors = 0;
    std::size_t warnings = 0;
    for (const auto& d : report.diagnostics) (d.severity == iotarch::Severity::Error ? errors : warnings)++;
    std::cout << sys.name() << ": " << errors << " error(s), " << warnings << " warning(s); architecture "
              << (report.verdict_architecture ? "consistent" : "inconsistent") << ", functioning "
              << (report.verdict_functioning ? "consistent" : "inconsistent") << "\n";
}

int cmd_check(const std::string& path, const iotarch::CheckerConfig& cfg, const std::string& format) {
    auto sys = load_model(path);
    if (!sys) return kUsage;
    const auto report = iotarch::check_all(*sys, cfg);
    const bool structured = format == "structured";
    print_report(report, structured);
    if (!structured) print_summary(*sys, report);
    return report.verdict_functioning ? kOk : kDiagnostics;
}

int cmd_simulate(const std::string& path, const std::string& scenario_path) {
    auto sys = load_model(path);
    if (!sys) return kUsage;

    const auto report = iotarch::check_all(*sys);
    if (!report.verdict_functioning) {
        print_report(report, false);
        print_summary(*sys, report);
        std::cerr << "iotarch: refusing to simulate an inconsistent model\n";
        return kDiagnostics;
    }

    std::vector<iotarch::ScenarioLine> lines;
    try {
        lines = iotarch::parse_scenario(read_file(scenario_path));
    } catch (const ReadError& e) {
        std::cerr << "iotarch: " << e.message << "\n";
        return kUsage;
    } catch (const iotarch::ScenarioError& e) {
        std::cerr << scenario_path << ":" << e.what() << "\n";
        return kUsage;
    }

    std::vector<iotarch::SenseEvent> events;
    events.reserve(lines.size());
    for (const auto& l : lines) events.push_back(l.event);
    try {
        const auto trace = iotarch::run_scenario(*sys, events);
        std::cout << iotarch::format_trace(trace);
    } catch (const iotarch::PreconditionViolation& e) {
        if (e.event_index()) {
            std::cerr << scenario_path << ": line " << lines.at(*e.event_index()).line << ": " << e.what() << "\n";
        } else {
            std::cerr << "iotarch: " << e.what() << "\n";
        }
        return kDiagnostics;
    }
    return kOk;
}

int cmd_emit(const std::string& path, const std::string& out_dir) {
    auto sys = load_model(path);
    if (!sys) return kUsage;
    try {
        for (const auto& p : iotarch::eventb::write_contexts(*sys, out_dir)) std::cout << p.string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "iotarch: " << e.what() << "\n";
        return kUsage;
    }
    return kOk;
}

int cmd_fmt(const std::string& path, bool in_place, bool check_only) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const ReadError& e) {
        std::cerr << "iotarch: " << e.message << "\n";
        return kUsage;
    }
    std::string formatted;
    try {
        formatted = iotarch::dsl::format_system(iotarch::dsl::parse_system(text));
    } catch (const iotarch::dsl::ParseFailure& e) {
        for (const auto& err : e.errors()) std::cerr << path << ":" << err.to_string() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "iotarch: " << e.what() << "\n";
        return kUsage;
    }

    if (check_only) {
        if (formatted == text) return kOk;
        std::cout << path << " is not canonically formatted\n";
        return kDiagnostics;
    }
    if (in_place) {
        if (formatted == text) return kOk;
        std::ofstream out{path, std::ios::binary | std::ios::trunc};
        out << formatted;
        if (!out) {
            std::cerr << "iotarch: cannot write " << path << "\n";
            return kUsage;
        }
        return kOk;
    }
    std::cout << formatted;
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"IoT architecture consistency checker, simulator and Event-B context generator"};
    app.require_subcommand(1);

    std::string model_path;
    std::string scenario_path;
    std::string out_dir;
    std::string format = "text";
    iotarch::CheckerConfig cfg;
    bool in_place = false;
    bool check_only = false;

    auto* check = app.add_subcommand("check", "Check the seven consistency rules");
    check->add_option("file", model_path, "model file (.iot)")->required();
    check->add_flag("--strict-functional", cfg.strict_functional, "warn on sensors with several diagram images");
    check->add_flag("--warnings-as-errors", cfg.treat_warnings_as_errors, "let warnings fail the verdicts");
    check->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "structured"}));

    auto* simulate = app.add_subcommand("simulate", "Run a sense-event scenario over a consistent model");
    simulate->add_option("file", model_path, "model file (.iot)")->required();
    simulate->add_option("scenario", scenario_path, "scenario file: `tick sensorId value` per line")->required();

    auto* emit = app.add_subcommand("emit-eventb", "Write the Event-B instance contexts and the generic layer");
    emit->add_option("file", model_path, "model file (.iot)")->required();
    emit->add_option("--out", out_dir, "output directory")->required();

    auto* fmt = app.add_subcommand("fmt", "Print or rewrite the canonical form");
    fmt->add_option("file", model_path, "model file (.iot)")->required();
    fmt->add_flag("--in-place", in_place, "rewrite the file");
    fmt->add_flag("--check", check_only, "exit 1 when the file is not canonical");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    if (check->parsed()) return cmd_check(model_path, cfg, format);
    if (simulate->parsed()) return cmd_simulate(model_path, scenario_path);
    if (emit->parsed()) return cmd_emit(model_path, out_dir);
    if (fmt->parsed()) return cmd_fmt(model_path, in_place, check_only);
    return kUsage;
}
