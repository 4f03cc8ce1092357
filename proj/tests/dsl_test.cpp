#include <iotarch/dsl.hpp>

#include "support/fixtures.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

namespace iotarch {
namespace {

std::vector<dsl::ParseError> parse_errors(std::string_view text) {
    try {
        (void)dsl::parse_system(text);
    } catch (const dsl::ParseFailure& e) {
        return e.errors();
    }
    return {};
}

template <typename T>
IdSet keys(const ById<T>& m) {
    IdSet out;
    for (const auto& kv : m) out.insert(kv.first);
    return out;
}

// Byte offset of the span start, or npos when the span is outside the text.
std::size_t offset_of(std::string_view text, const dsl::SourceSpan& span) {
    std::size_t line = 1;
    std::size_t pos = 0;
    while (line < static_cast<std::size_t>(span.line)) {
        pos = text.find('\n', pos);
        if (pos == std::string_view::npos) return std::string_view::npos;
        ++pos;
        ++line;
    }
    pos += static_cast<std::size_t>(span.column - 1);
    return pos <= text.size() ? pos : std::string_view::npos;
}

TEST(Lexer, MergesControlServiceLabel) {
    const auto toks = dsl::tokenize("Control-Service : (c, s)");
    ASSERT_FALSE(toks.empty());
    EXPECT_EQ(toks[0].kind, dsl::Tok::Word);
    EXPECT_EQ(toks[0].text, "Control-Service");
}

TEST(Lexer, DistinguishesArrows) {
    const auto toks = dsl::tokenize("a --> b -> -3 ..");
    std::vector<dsl::Tok> kinds;
    for (const auto& t : toks) kinds.push_back(t.kind);
    EXPECT_EQ(kinds, (std::vector<dsl::Tok>{dsl::Tok::Word, dsl::Tok::LongArrow, dsl::Tok::Word, dsl::Tok::Arrow, dsl::Tok::Int, dsl::Tok::DotDot,
                                       dsl::Tok::End}));
}

TEST(Parse, ExampleAppListing) {
    const auto m = testing::load_sample("ExampleApp.iot");
    EXPECT_EQ(m.name(), Identifier{"ExampleApp"});
    EXPECT_EQ(keys(m.sensors()), (IdSet{"ls1", "ls2"}));
    EXPECT_EQ(keys(m.actuators()), (IdSet{"la"}));
    EXPECT_EQ(keys(m.devices()), (IdSet{"lvrl1"}));
    EXPECT_EQ(keys(m.controllers()), (IdSet{"ctl1", "ctl2"}));
    EXPECT_EQ(keys(m.services()), (IdSet{"srv1", "srv2"}));
    EXPECT_EQ(m.binding_ds(), (Relation{{"lvrl1", "ls2"}}));
    EXPECT_EQ(m.binding_ad(), (Relation{{"la", "lvrl1"}}));
    EXPECT_EQ(m.in_d(), (Relation{{"ls1", "ctl1"}, {"ls2", "ctl2"}}));
    EXPECT_EQ(m.out_o(), (Relation{{"ctl1", "la"}}));
    EXPECT_EQ(m.ctrl_depend(), (Relation{{"ls2", "lvrl1"}}));
    EXPECT_EQ(m.serv_depend(), (Relation{{"ctl1", "srv1"}}));
}

TEST(Parse, ExampleAppDefaultsAndRules) {
    const auto m = testing::load_sample("ExampleApp.iot");
    const auto& ls1 = m.sensors().at("ls1");
    EXPECT_EQ(ls1.category(), Identifier{"LIGHTSENSOR"});
    EXPECT_EQ(ls1.range(), ValueRange::closed(0, 1023));
    EXPECT_EQ(ls1.value(), 0);
    EXPECT_EQ(ls1.protocols(), IdSet{"MQTT"});
    EXPECT_EQ(m.actuators().at("la").signal_of_order(), dsl::default_signal_of_order());
    EXPECT_EQ(m.devices().at("lvrl1").behaviour(), DeviceBehaviour::two_state());
    const auto& srv1 = m.services().at("srv1");
    ASSERT_EQ(srv1.rules.size(), 3U);
    EXPECT_EQ(srv1.rules[0].kind(), Identifier{"Lightvalue"});
    EXPECT_EQ(srv1.rules[0].pattern(), ValuePattern{WildcardPattern{"n"}});
    EXPECT_EQ(srv1.rules[1].pattern(), ValuePattern{LiteralPattern{0}});
    EXPECT_EQ(srv1.rules[1].order(), Identifier{"off"});
    EXPECT_EQ(m.services().at("srv2").rules.size(), 2U);
}

TEST(Parse, HeaderAlone) {
    const auto m = dsl::parse_system("IOTSystem Empty");
    EXPECT_EQ(m.name(), Identifier{"Empty"});
    EXPECT_EQ(m, build_system("Empty", {}, {}, {}, {}, {}));
}

TEST(Parse, MissingCommaInPair) {
    std::string text = testing::sample_text("ExampleApp.iot");
    const std::string good = "SCBinding: (ls1, ctl1)";
    const auto at = text.find(good);
    ASSERT_NE(at, std::string::npos);
    text.replace(at, good.size(), "SCBinding: (ls1 ctl1)");

    const auto errs = parse_errors(text);
    ASSERT_EQ(errs.size(), 1U);
    EXPECT_EQ(errs[0].expected, ",");
    EXPECT_EQ(errs[0].found, "'ctl1'");
    const std::size_t off = offset_of(text, errs[0].span);
    ASSERT_NE(off, std::string::npos);
    EXPECT_EQ(text.substr(off, static_cast<std::size_t>(errs[0].span.length)), "ctl1");
}

TEST(Parse, ErrorMessageQuotesPunctuation) {
    const dsl::ParseError e{{3, 4, 1}, ",", "'ctl1'"};
    EXPECT_EQ(e.to_string(), "3:4: expected ',', found 'ctl1'");
}

TEST(Parse, MissingHeader) {
    const auto errs = parse_errors("LIGHTSENSOR : ls1\n");
    ASSERT_FALSE(errs.empty());
    EXPECT_EQ(errs[0].span.line, 1);
}

TEST(Parse, UndeclaredReferenceIsReportedAtItsToken) {
    const std::string text = "IOTSystem T\nLIGHTSENSOR : ls1\nCONTROLLER : c\nSCBinding : (ls9, c)\n";
    const auto errs = parse_errors(text);
    ASSERT_EQ(errs.size(), 1U);
    EXPECT_EQ(errs[0].span.line, 4);
    EXPECT_EQ(text.substr(offset_of(text, errs[0].span), static_cast<std::size_t>(errs[0].span.length)), "ls9");
}

TEST(Parse, WrongKindInRelation) {
    const auto errs = parse_errors("IOTSystem T\nLIGHTSENSOR : ls1\nLIGHT : l\nSCBinding : (ls1, l)\n");
    ASSERT_EQ(errs.size(), 1U);
    EXPECT_NE(errs[0].expected.find("controller"), std::string::npos);
}

TEST(Parse, DuplicateDeclaration) {
    EXPECT_EQ(parse_errors("IOTSystem T\nLIGHTSENSOR : ls1\nMOTIONSENSOR : ls1\n").size(), 1U);
}

TEST(Parse, ValueOutsideRange) {
    EXPECT_EQ(parse_errors("IOTSystem T\nLIGHTSENSOR : s\nRANGE s : [0..3]\nVALUE s : 9\n").size(), 1U);
}

TEST(Parse, RecoversAndReportsSeveralLines) {
    const auto errs = parse_errors("IOTSystem T\nLIGHTSENSOR : , \nCONTROLLER : c\nSCBinding : (x y)\n");
    EXPECT_EQ(errs.size(), 2U);
    for (std::size_t i = 1; i < errs.size(); ++i) EXPECT_LE(errs[i - 1].span.line, errs[i].span.line);
}

TEST(Parse, CrlfMatchesLf) {
    std::string lf = testing::sample_text("HomeApp.iot");
    std::string crlf;
    for (char ch : lf) {
        if (ch == '\n') crlf += '\r';
        crlf += ch;
    }
    EXPECT_EQ(dsl::parse_system(crlf), dsl::parse_system(lf));
}

TEST(Parse, AttributeLinesOverrideDefaults) {
    const auto m = testing::load_sample("HomeApp.iot");
    EXPECT_EQ(m.sensors().at("ts_living").range(), ValueRange::closed(-40, 60));
    EXPECT_EQ(m.sensors().at("ts_living").value(), 20);
    EXPECT_EQ(m.controllers().at("ctl_door").protocols, (IdSet{"MQTT", "zigbee"}));
    EXPECT_EQ(m.actuators().at("da_front").signal_for("open"), Identifier{"pulse_open"});
    EXPECT_EQ(m.devices().at("living_heater").current_state(), Identifier{"heating"});
    EXPECT_EQ(m.devices().at("front_door").behaviour().initial(), Identifier{"closed"});
}

TEST(Format, EmptyModel) { EXPECT_EQ(dsl::format_system(build_system("Empty", {}, {}, {}, {}, {})), "IOTSystem Empty\n"); }

TEST(Format, SortsDeclarations) {
    const std::string out = dsl::format_system(dsl::parse_system("IOTSystem T\nLIGHTSENSOR : zeta, alpha\n"));
    EXPECT_EQ(out, "IOTSystem T\n\nLIGHTSENSOR : alpha, zeta\n");
}

TEST(Format, KeepsRuleOrder) {
    const auto m = testing::load_sample("ExampleApp.iot");
    const std::string out = dsl::format_system(m);
    EXPECT_NE(out.find("srv1 : {\n  Lightvalue(n) --> Order(on)\n  Lightvalue(0) --> Order(off)\n"),
              std::string::npos);
}

TEST(Format, RejectsCategoryOutsideTheLanguage) {
    PhysicalModel p;
    p.sensors.emplace("s", Sensor{"s", "Light", ValueRange::closed(0, 1), 0, {"MQTT"}});
    EXPECT_THROW(dsl::format_system(build_system("T", p, {}, {}, {}, {})), std::invalid_argument);
}

TEST(RoundTrip, SampleCorpus) {
    for (const auto& path : testing::sample_models()) {
        SCOPED_TRACE(path.string());
        const auto first = dsl::parse_system(testing::read_text(path));
        const std::string canonical = dsl::format_system(first);
        const auto second = dsl::parse_system(canonical);
        EXPECT_EQ(second, first);
        EXPECT_EQ(dsl::format_system(second), canonical);
    }
}

TEST(RoundTripProperty, FuzzedModels) {
    testing::Rng rng{31};
    for (int i = 0; i < 400; ++i) {
        const auto m = testing::random_model(rng);
        const std::string text = dsl::format_system(m);
        SystemModel back = build_system("x", {}, {}, {}, {}, {});
        try {
            back = dsl::parse_system(text);
        } catch (const dsl::ParseFailure& e) {
            FAIL() << e.what() << "\n" << text;
        }
        ASSERT_EQ(back, m) << text;
    }
}

TEST(ParseProperty, ErrorSpansLieInsideInput) {
    testing::Rng rng{32};
    const std::string base = testing::sample_text("HomeApp.iot");
    const std::string junk = "(),:;{}[]-> x 7 ..";
    for (int i = 0; i < 300; ++i) {
        std::string text = base;
        for (int k = testing::uniform(rng, 1, 4); k > 0; --k) {
            const auto pos = static_cast<std::size_t>(testing::uniform(rng, 0, static_cast<int>(text.size()) - 1));
            if (testing::coin(rng)) {
                text.erase(pos, static_cast<std::size_t>(testing::uniform(rng, 1, 6)));
            } else {
                text.insert(pos, 1, junk[static_cast<std::size_t>(testing::uniform(rng, 0, static_cast<int>(junk.size()) - 1))]);
            }
        }
        const auto errs = parse_errors(text);
        for (const auto& e : errs) {
            EXPECT_GE(e.span.line, 1);
            EXPECT_GE(e.span.column, 1);
            EXPECT_FALSE(e.expected.empty());
            EXPECT_FALSE(e.found.empty());
            const std::size_t off = offset_of(text, e.span);
            ASSERT_NE(off, std::string::npos) << text;
            EXPECT_LE(off + static_cast<std::size_t>(e.span.length), text.size() + 1);
        }
        EXPECT_EQ(parse_errors(text), errs);
    }
}

TEST(ParseProperty, Deterministic) {
    for (const auto& path : testing::sample_models()) {
        const std::string text = testing::read_text(path);
        EXPECT_EQ(dsl::parse_system(text), dsl::parse_system(text));
    }
}

} // namespace
} // namespace iotarch
