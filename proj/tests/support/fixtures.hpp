#pragma once

#include <iotarch/iotarch.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace iotarch::testing {

inline std::filesystem::path samples_dir() { return IOTARCH_SAMPLES_DIR; }

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in{p, std::ios::binary};
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string sample_text(const std::string& name) { return read_text(samples_dir() / name); }
inline SystemModel load_sample(const std::string& name) { return dsl::parse_system(sample_text(name)); }

inline std::vector<std::filesystem::path> sample_models() {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator{samples_dir()}) {
        if (e.path().extension() == ".iot") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Rebuilds a model with some relations replaced; the rest is copied from base.
struct Edit {
    std::optional<Relation> binding_ds{}, binding_ad{}, serv_depend{}, in_d{}, out_o{}, ctrl_depend{};
    std::optional<ById<Controller>> controllers{};
};

inline SystemModel edited(const SystemModel& base, const Edit& e) {
    PhysicalModel phys = base.phys();
    SoftwareModel soft = base.soft();
    if (e.binding_ds) phys.binding_ds = *e.binding_ds;
    if (e.binding_ad) phys.binding_ad = *e.binding_ad;
    if (e.serv_depend) soft.serv_depend = *e.serv_depend;
    if (e.controllers) soft.controllers = *e.controllers;
    return build_system(base.name(), std::move(phys), std::move(soft), e.in_d.value_or(base.in_d()),
                        e.out_o.value_or(base.out_o()), e.ctrl_depend.value_or(base.ctrl_depend()));
}

inline Relation with(Relation r, const Identifier& x, const Identifier& y) {
    r.insert(x, y);
    return r;
}

inline Relation without(Relation r, const Identifier& x, const Identifier& y) {
    r.erase(x, y);
    return r;
}

// The ExampleApp after the two-edge repair for ls2, in both variants for the unjustified ls1 path:
// chain adds ctrlDepend (ls1, lvrl1); drop removes inD (ls1, ctl1) and the now unused ctl1.
inline SystemModel repaired_by_chain(const SystemModel& example) {
    return edited(example, {.serv_depend = with(example.serv_depend(), "ctl2", "srv1"),
                            .out_o = with(example.out_o(), "ctl2", "la"),
                            .ctrl_depend = with(example.ctrl_depend(), "ls1", "lvrl1")});
}

inline SystemModel repaired_by_drop(const SystemModel& example) {
    ById<Controller> controllers = example.controllers();
    controllers.erase("ctl1");
    return edited(example, {.serv_depend = Relation{{"ctl2", "srv1"}},
                            .in_d = without(example.in_d(), "ls1", "ctl1"),
                            .out_o = Relation{{"ctl2", "la"}},
                            .controllers = controllers});
}

} // namespace iotarch::testing
