#include <iotarch/model.hpp>

#include "support/fixtures.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

namespace iotarch {
namespace {

PhysicalModel light_phys() {
    PhysicalModel p;
    p.sensors.emplace("ls1", Sensor{"ls1", "LIGHTSENSOR", ValueRange::closed(0, 10), 0, {"MQTT"}});
    p.actuators.emplace("la", Actuator{"la", "LIGHTACTUATOR", {{"on", "on_signal"}, {"off", "off_signal"}}, {"MQTT"}});
    p.devices.emplace("lvrl1", Device{"lvrl1", "LIGHT", DeviceBehaviour::two_state()});
    return p;
}

SoftwareModel one_controller() {
    SoftwareModel s;
    s.controllers.emplace("ctl1", Controller{"ctl1", {"MQTT"}});
    return s;
}

std::vector<Diagnostic> build_errors(PhysicalModel phys, SoftwareModel soft, Relation in_d, Relation out_o,
                                     Relation ctrl) {
    try {
        (void)build_system("T", std::move(phys), std::move(soft), std::move(in_d), std::move(out_o), std::move(ctrl));
    } catch (const ModelError& e) {
        return e.diagnostics();
    }
    return {};
}

TEST(Sensor, ValueMustLieInNonEmptyRange) {
    EXPECT_THROW((Sensor{"s", "LIGHTSENSOR", ValueRange{}, 0, {}}), std::invalid_argument);
    EXPECT_THROW((Sensor{"s", "LIGHTSENSOR", ValueRange::closed(1, 3), 0, {}}), std::invalid_argument);
    EXPECT_NO_THROW((Sensor{"s", "LIGHTSENSOR", ValueRange::closed(1, 3), 3, {}}));
}

TEST(Actuator, SignalsCoverOrders) {
    EXPECT_THROW((Actuator{"a", "LIGHTACTUATOR", {}, {}}), std::invalid_argument);
    EXPECT_THROW((Actuator{"a", "LIGHTACTUATOR", {{"on", "s1"}}, IdSet{"s2"}, {}}), std::invalid_argument);
    const Actuator a{"a", "LIGHTACTUATOR", {{"on", "s1"}, {"up", "s1"}}, {}};
    EXPECT_EQ(a.input_orders(), (IdSet{"on", "up"}));
    EXPECT_EQ(a.output_signals(), (IdSet{"s1"}));
    EXPECT_TRUE(a.accepts("up"));
    EXPECT_EQ(a.signal_for("halt"), std::nullopt);
}

TEST(DeviceBehaviour, TwoStateIsTotal) {
    const auto b = DeviceBehaviour::two_state();
    EXPECT_EQ(b.initial(), Identifier{"off"});
    for (const auto& s : b.states()) {
        for (const auto& sig : b.signals()) EXPECT_TRUE(b.next(s, sig).has_value());
    }
    EXPECT_EQ(b.next("off", "on_signal"), Identifier{"on"});
    EXPECT_EQ(b.next("on", "off_signal"), Identifier{"off"});
}

TEST(DeviceBehaviour, RejectsForeignTransitions) {
    EXPECT_THROW((DeviceBehaviour{{"a"}, "b", {}, {}}), std::invalid_argument);
    EXPECT_THROW((DeviceBehaviour{{"a"}, "a", {"x"}, {{{"a", "y"}, "a"}}}), std::invalid_argument);
    EXPECT_THROW((DeviceBehaviour{{"a"}, "a", {"x"}, {{{"a", "x"}, "b"}}}), std::invalid_argument);
    EXPECT_THROW((Device{"d", "LIGHT", DeviceBehaviour::two_state(), "dim"}), std::invalid_argument);
}

TEST(ControlRule, RangeNeedsOrderedBounds) {
    EXPECT_THROW((ControlRule{"Temp", RangePattern{5, 4}, "heat"}), std::invalid_argument);
    EXPECT_TRUE(matches(RangePattern{-3, 3}, -3));
    EXPECT_FALSE(matches(LiteralPattern{1}, 2));
    EXPECT_TRUE(matches(WildcardPattern{"n"}, 99));
}

TEST(BuildSystem, ExampleAppIsReferentiallyIntact) {
    const auto m = testing::load_sample("ExampleApp.iot");
    EXPECT_EQ(m.name(), Identifier{"ExampleApp"});
    EXPECT_EQ(m.sensors().size(), 2U);
    EXPECT_EQ(m.controllers().size(), 2U);
}

TEST(BuildSystem, EmptyModelIsVacuouslyIntact) {
    const auto m = build_system("Empty", {}, {}, {}, {}, {});
    EXPECT_TRUE(m.sensors().empty());
    EXPECT_TRUE(m.in_d().empty());
    EXPECT_TRUE(m.serv_depend().empty());
}

TEST(BuildSystem, DanglingSensorInInD) {
    const auto errs = build_errors(light_phys(), one_controller(), {{"ls9", "ctl1"}}, {}, {});
    ASSERT_EQ(errs.size(), 1U);
    EXPECT_EQ(errs[0].rule, RuleCode::RefIntegrity);
    EXPECT_EQ(errs[0].subjects, std::vector<Identifier>{"ls9"});
    EXPECT_EQ(errs[0].message, "inD pair (ls9, ctl1): sensor ls9 is not declared");
}

TEST(BuildSystem, CollectsEveryError) {
    auto phys = light_phys();
    phys.binding_ds.insert("ghost_dev", "ls1");
    phys.binding_ad.insert("la", "ghost_dev2");
    auto soft = one_controller();
    soft.serv_depend.insert("ctl1", "srv_missing");
    const auto errs = build_errors(phys, soft, {{"ls1", "ctl9"}}, {{"ctl1", "a9"}}, {{"s9", "lvrl1"}});
    EXPECT_EQ(errs.size(), 6U);
    for (const auto& d : errs) EXPECT_EQ(d.rule, RuleCode::RefIntegrity);
}

TEST(BuildSystem, RejectsNameSharedAcrossNamespaces) {
    auto phys = light_phys();
    auto soft = one_controller();
    soft.services.emplace("ls1", Service{"ls1", {}});
    const auto errs = build_errors(phys, soft, {}, {}, {});
    ASSERT_EQ(errs.size(), 1U);
    EXPECT_EQ(errs[0].subjects, std::vector<Identifier>{"ls1"});
}

TEST(BuildSystem, RejectsProtocolNamedLikeElement) {
    auto phys = light_phys();
    auto soft = one_controller();
    soft.controllers.at("ctl1").protocols.insert("la");
    EXPECT_EQ(build_errors(phys, soft, {}, {}, {}).size(), 1U);
}

TEST(BuildSystem, RejectsKeyNotMatchingId) {
    auto phys = light_phys();
    phys.devices.emplace("lvrl2", Device{"other", "LIGHT", DeviceBehaviour::two_state()});
    EXPECT_FALSE(build_errors(phys, one_controller(), {}, {}, {}).empty());
}

TEST(BuildSystemProperty, EveryEndpointIsDeclared) {
    testing::Rng rng{21};
    for (int i = 0; i < 300; ++i) {
        const auto m = testing::random_model(rng);
        for (const auto& [d, s] : m.binding_ds()) {
            EXPECT_TRUE(m.devices().contains(d));
            EXPECT_TRUE(m.sensors().contains(s));
        }
        for (const auto& [a, d] : m.binding_ad()) {
            EXPECT_TRUE(m.actuators().contains(a));
            EXPECT_TRUE(m.devices().contains(d));
        }
        for (const auto& [s, c] : m.in_d()) {
            EXPECT_TRUE(m.sensors().contains(s));
            EXPECT_TRUE(m.controllers().contains(c));
        }
        for (const auto& [c, a] : m.out_o()) {
            EXPECT_TRUE(m.controllers().contains(c));
            EXPECT_TRUE(m.actuators().contains(a));
        }
        for (const auto& [s, d] : m.ctrl_depend()) {
            EXPECT_TRUE(m.sensors().contains(s));
            EXPECT_TRUE(m.devices().contains(d));
        }
        for (const auto& [c, v] : m.serv_depend()) {
            EXPECT_TRUE(m.controllers().contains(c));
            EXPECT_TRUE(m.services().contains(v));
        }
    }
}

TEST(BuildSystemProperty, AnyDanglingPairIsReported) {
    testing::Rng rng{22};
    for (int i = 0; i < 200; ++i) {
        const auto m = testing::random_model(rng);
        Relation in_d = m.in_d();
        in_d.insert("ghost", m.controllers().empty() ? Identifier{"ghost_ctl"} : m.controllers().begin()->first);
        try {
            (void)build_system(m.name(), m.phys(), m.soft(), in_d, m.out_o(), m.ctrl_depend());
            ADD_FAILURE() << "dangling sensor accepted";
        } catch (const ModelError& e) {
            const bool named = std::any_of(e.diagnostics().begin(), e.diagnostics().end(), [](const Diagnostic& d) {
                return d.subjects == std::vector<Identifier>{"ghost"};
            });
            EXPECT_TRUE(named);
        }
    }
}

TEST(RuleCode, NamesRoundTrip) {
    for (auto c : {RuleCode::ConnectedHw, RuleCode::WellStructCtrl, RuleCode::WeakConsistent,
                   RuleCode::ConsistBindings, RuleCode::CtrlDependency, RuleCode::Sensor2Actuator,
                   RuleCode::CompComm, RuleCode::RefIntegrity}) {
        EXPECT_EQ(rule_code_from_string(to_string(c)), c);
    }
    EXPECT_EQ(to_string(RuleCode::ConnectedHw), "CONNECTED_HW");
    EXPECT_EQ(rule_code_from_string("NOPE"), std::nullopt);
}

} // namespace
} // namespace iotarch
