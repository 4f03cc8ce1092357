#pragma once

#include "eventb_generic.hpp"
#include "model.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iotarch::eventb {

struct EmittedContext {
    std::string name;
    std::string extends_name;
    std::string text;

    [[nodiscard]] std::string filename() const { return name + ".ctx.txt"; }

    friend bool operator==(const EmittedContext&, const EmittedContext&) = default;
};

namespace detail {

inline std::string set_extension(const Relation& r) {
    if (r.empty()) return "∅";
    std::string out = "{";
    bool first = true;
    for (const auto& [x, y] : r) {
        if (!first) out += ", ";
        first = false;
        out += x.str() + " ↦ " + y.str();
    }
    return out + "}";
}

class ContextWriter {
public:
    ContextWriter(std::string name, std::string extends) : name_{std::move(name)}, extends_{std::move(extends)} {}

    void constant(const Identifier& id, const Identifier& carrier) {
        constants_.push_back(id);
        axiom(id.str() + " ∈ " + carrier.str());
    }
    void relation(std::string_view name, const Relation& r) { axiom(std::string{name} + " = " + set_extension(r)); }

    // extra_extends lists contexts whose constants the axioms also mention.
    EmittedContext finish(const std::vector<std::string>& extra_extends = {}) const {
        std::string text = "CONTEXT " + name_ + "\nEXTENDS " + extends_;
        for (const auto& e : extra_extends) text += " " + e;
        text += "\n";
        if (!constants_.empty()) {
            text += "CONSTANTS\n";
            for (const auto& c : constants_) text += "  " + c.str() + "\n";
        }
        text += "AXIOMS\n";
        for (std::size_t i = 0; i < axioms_.size(); ++i) {
            text += "  axm" + std::to_string(i + 1) + " : " + axioms_[i] + "\n";
        }
        text += "END\n";
        return {name_, extends_, std::move(text)};
    }

private:
    void axiom(std::string a) { axioms_.push_back(std::move(a)); }

    std::string name_;
    std::string extends_;
    std::vector<Identifier> constants_;
    std::vector<std::string> axioms_;
};

} // namespace detail

// Instance layer: HW_ArchiCtx1 (physical elements and bindings), SW_ArchiCtx1 (controllers,
// services, servDepend), HWSW_Archi1 (inD, outO, CtrlDepend). Consistency is not required.
inline std::array<EmittedContext, 3> emit_contexts(const SystemModel& sys) {
    detail::ContextWriter hw{"HW_ArchiCtx1", "HW_ArchiCtx0"};
    std::vector<std::pair<Identifier, Identifier>> physical; // (id, category), sorted by id
    for (const auto& [id, s] : sys.sensors()) physical.emplace_back(id, s.category());
    for (const auto& [id, a] : sys.actuators()) physical.emplace_back(id, a.category());
    for (const auto& [id, d] : sys.devices()) physical.emplace_back(id, d.category());
    std::sort(physical.begin(), physical.end());
    for (const auto& [id, cat] : physical) hw.constant(id, cat);
    hw.relation("binding_ds", sys.binding_ds());
    hw.relation("binding_ad", sys.binding_ad());

    detail::ContextWriter sw{"SW_ArchiCtx1", "SW_ArchiCtx0"};
    std::vector<std::pair<Identifier, Identifier>> software;
    for (const auto& [id, c] : sys.controllers()) software.emplace_back(id, "CONTROLLER");
    for (const auto& [id, s] : sys.services()) software.emplace_back(id, "SERVICE");
    std::sort(software.begin(), software.end());
    for (const auto& [id, carrier] : software) sw.constant(id, carrier);
    sw.relation("servDepend", sys.serv_depend());

    detail::ContextWriter hwsw{"HWSW_Archi1", "HWSW_Archi0"};
    hwsw.relation("inD", sys.in_d());
    hwsw.relation("outO", sys.out_o());
    hwsw.relation("CtrlDepend", sys.ctrl_depend());

    return {hw.finish(), sw.finish(), hwsw.finish({"HW_ArchiCtx1", "SW_ArchiCtx1"})};
}

// Writes the three instance contexts and the generic layer into dir (created if missing).
// Returns the written paths. Throws std::runtime_error on I/O failure.
inline std::vector<std::filesystem::path> write_contexts(const SystemModel& sys, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    auto write = [&written](const std::filesystem::path& path, std::string_view text) {
        std::ofstream out{path, std::ios::binary | std::ios::trunc};
        if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.close();
        if (!out) throw std::runtime_error("failed writing " + path.string());
        written.push_back(path);
    };
    for (const auto& ctx : emit_contexts(sys)) write(dir / ctx.filename(), ctx.text);
    for (const auto& st : kGenericLayer) write(dir / st.filename, st.text);
    return written;
}

} // namespace iotarch::eventb
