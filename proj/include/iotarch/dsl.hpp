#pragma once

#include "dsl_lexer.hpp"
#include "model.hpp"

#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace iotarch::dsl {

// ---------------------------------------------------------------------------
// Defaults for attributes a program leaves out
// ---------------------------------------------------------------------------

inline const Identifier& default_protocol() {
    static const Identifier mqtt{"MQTT"};
    return mqtt;
}
inline IdSet default_protocols() { return {default_protocol()}; }
inline ValueRange default_sensor_range() { return ValueRange::closed(0, 1023); }
inline std::map<Identifier, Identifier> default_signal_of_order() {
    return {{"off", "off_signal"}, {"on", "on_signal"}};
}
inline DeviceBehaviour default_behaviour() { return DeviceBehaviour::two_state(); }

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct ParseError {
    SourceSpan span;
    std::string expected;
    std::string found;

    [[nodiscard]] std::string to_string() const {
        const bool punctuation = expected.find_first_of(" abcdefghijklmnopqrstuvwxyz") == std::string::npos;
        return std::to_string(span.line) + ":" + std::to_string(span.column) + ": expected " +
               (punctuation ? "'" + expected + "'" : expected) + ", found " + found;
    }

    friend bool operator==(const ParseError&, const ParseError&) = default;
};

class ParseFailure : public std::runtime_error {
public:
    explicit ParseFailure(std::vector<ParseError> errors)
        : std::runtime_error(errors.empty() ? "parse failed" : errors.front().to_string()),
          errors_{std::move(errors)} {}

    [[nodiscard]] const std::vector<ParseError>& errors() const noexcept { return errors_; }

private:
    std::vector<ParseError> errors_;
};

// ---------------------------------------------------------------------------
// Category token convention
// ---------------------------------------------------------------------------

enum class ElementKind { Sensor, Actuator, Device, Controller, Service };

inline std::string_view to_string(ElementKind k) noexcept {
    switch (k) {
        case ElementKind::Sensor: return "sensor";
        case ElementKind::Actuator: return "actuator";
        case ElementKind::Device: return "device";
        case ElementKind::Controller: return "controller";
        case ElementKind::Service: return "service";
    }
    return "?";
}

inline bool is_category_token(std::string_view s) noexcept {
    if (s.empty() || s.front() < 'A' || s.front() > 'Z') return false;
    for (char c : s) {
        if (!((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_')) return false;
    }
    return true;
}

// LIGHTSENSOR -> sensor, LIGHTACTUATOR -> actuator, CONTROLLER, SERVICE, anything else -> device.
inline ElementKind kind_of_category(std::string_view cat) noexcept {
    if (cat == "CONTROLLER") return ElementKind::Controller;
    if (cat == "SERVICE") return ElementKind::Service;
    if (cat.ends_with("SENSOR")) return ElementKind::Sensor;
    if (cat.ends_with("ACTUATOR")) return ElementKind::Actuator;
    return ElementKind::Device;
}

namespace detail {

struct SyntaxError {
    ParseError error;
};

struct LocatedId {
    Identifier id;
    SourceSpan span;
};

struct Decl {
    ElementKind kind;
    Identifier category;
    LocatedId name;
};

enum class RelationLabel {
    LegacyBinding,   // ADBinding / DSBinding: resolved by the namespaces of the tuple
    DeviceSensor,
    ActuatorDevice,
    SensorController,
    ControllerActuator,
    SensorDevice,
    ControllerService,
};

struct RelationEntry {
    RelationLabel label;
    LocatedId first;
    LocatedId second;
};

enum class AttributeKind { Protocols, Range, Value, Orders, Signals, Behaviour, State };

inline std::string_view keyword(AttributeKind k) {
    switch (k) {
        case AttributeKind::Protocols: return "PROTOCOLS";
        case AttributeKind::Range: return "RANGE";
        case AttributeKind::Value: return "VALUE";
        case AttributeKind::Orders: return "ORDERS";
        case AttributeKind::Signals: return "SIGNALS";
        case AttributeKind::Behaviour: return "BEHAVIOUR";
        case AttributeKind::State: return "STATE";
    }
    return "?";
}

struct Attribute {
    AttributeKind kind;
    LocatedId target;
    IdSet ids;                                    // PROTOCOLS, SIGNALS
    ValueRange range;                             // RANGE
    Value value = 0;                              // VALUE
    std::map<Identifier, Identifier> orders;      // ORDERS
    std::optional<LocatedId> state;               // BEHAVIOUR initial, STATE
    DeviceBehaviour::Delta delta;                 // BEHAVIOUR
};

struct RuleBlock {
    LocatedId service;
    std::vector<ControlRule> rules;
};

struct Draft {
    std::optional<LocatedId> name;
    std::vector<Decl> decls;
    std::vector<RelationEntry> relations;
    std::vector<Attribute> attributes;
    std::vector<RuleBlock> rule_blocks;
};

inline std::optional<RelationLabel> relation_label(std::string_view w) {
    if (w == "ADBinding" || w == "DSBinding") return RelationLabel::LegacyBinding;
    if (w == "DeviceSensor") return RelationLabel::DeviceSensor;
    if (w == "ActuatorDevice") return RelationLabel::ActuatorDevice;
    if (w == "SCBinding") return RelationLabel::SensorController;
    if (w == "CABinding") return RelationLabel::ControllerActuator;
    if (w == "SDDependency" || w == "SDDependeny") return RelationLabel::SensorDevice;
    if (w == "Control-Service") return RelationLabel::ControllerService;
    return std::nullopt;
}

inline std::optional<AttributeKind> attribute_keyword(std::string_view w) {
    for (auto k : {AttributeKind::Protocols, AttributeKind::Range, AttributeKind::Value, AttributeKind::Orders,
                   AttributeKind::Signals, AttributeKind::Behaviour, AttributeKind::State}) {
        if (keyword(k) == w) return k;
    }
    return std::nullopt;
}

// Recursive-descent parser over the token list. Each statement is parsed independently; a
// syntax error records one ParseError and skips to the next line.
class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_{std::move(tokens)} {}

    Draft parse(std::vector<ParseError>& errors) {
        Draft draft;
        skip_newlines();
        try {
            expect_keyword("IOTSystem");
            draft.name = expect_identifier("system name");
            end_of_statement();
        } catch (const SyntaxError& e) {
            errors.push_back(e.error);
            recover();
        }
        while (true) {
            skip_newlines();
            if (peek().kind == Tok::End) break;
            try {
                statement(draft);
            } catch (const SyntaxError& e) {
                errors.push_back(e.error);
                recover();
            }
        }
        return draft;
    }

private:
    const Token& peek(std::size_t k = 0) const {
        const std::size_t idx = std::min(pos_ + k, toks_.size() - 1);
        return toks_[idx];
    }
    const Token& advance() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool check(Tok kind) const { return peek().kind == kind; }

    [[noreturn]] static void fail(const Token& at, std::string expected) {
        throw SyntaxError{{at.span, std::move(expected), describe(at)}};
    }

    const Token& expect(Tok kind, std::string_view what) {
        if (!check(kind)) fail(peek(), std::string{what});
        return advance();
    }

    void expect_keyword(std::string_view kw) {
        if (!check(Tok::Word) || peek().text != kw) fail(peek(), "'" + std::string{kw} + "'");
        advance();
    }

    LocatedId expect_identifier(std::string_view what) {
        const Token& t = peek();
        if (t.kind != Tok::Word || !Identifier::is_valid(t.text)) fail(t, std::string{what});
        advance();
        return {Identifier{t.text}, t.span};
    }

    Value expect_int() {
        const Token& t = peek();
        if (t.kind != Tok::Int) fail(t, "integer");
        Value v{};
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) fail(t, "integer within 64-bit range");
        advance();
        return v;
    }

    void skip_newlines() {
        while (check(Tok::Newline)) advance();
    }
    // Newlines are allowed right after a separator so long lists can wrap.
    void skip_newlines_after_separator() { skip_newlines(); }

    void end_of_statement() {
        if (check(Tok::End)) return;
        expect(Tok::Newline, "end of line");
    }

    void recover() {
        int depth = 0;
        while (!check(Tok::End)) {
            if (check(Tok::LBrace)) ++depth;
            if (check(Tok::RBrace)) {
                if (depth == 0) {
                    advance();
                    return;
                }
                --depth;
            }
            if (check(Tok::Newline) && depth == 0) {
                advance();
                return;
            }
            advance();
        }
    }

    void statement(Draft& draft) {
        const Token& head = peek();
        if (head.kind != Tok::Word) fail(head, "declaration, binding, attribute or rule block");

        if (auto label = relation_label(head.text)) {
            advance();
            relation_list(*label, draft);
            return;
        }
        // An attribute keyword followed by `:` is a category named like the keyword.
        if (auto attr = attribute_keyword(head.text); attr && peek(1).kind == Tok::Word) {
            advance();
            attribute(*attr, draft);
            return;
        }
        if (peek(1).kind == Tok::Colon && peek(2).kind == Tok::LBrace) {
            rule_block(draft);
            return;
        }
        if (is_category_token(head.text)) {
            declaration(draft);
            return;
        }
        if (head.text == "IOTSystem") fail(head, "a single IOTSystem header");
        fail(head, "declaration, binding, attribute or rule block");
    }

    void declaration(Draft& draft) {
        const Token& cat = advance();
        const Identifier category{cat.text};
        const ElementKind kind = kind_of_category(cat.text);
        expect(Tok::Colon, ":");
        do {
            skip_newlines_after_separator();
            draft.decls.push_back({kind, category, expect_identifier("identifier")});
        } while (check(Tok::Comma) && (advance(), true));
        end_of_statement();
    }

    void relation_list(RelationLabel label, Draft& draft) {
        expect(Tok::Colon, ":");
        do {
            skip_newlines_after_separator();
            expect(Tok::LParen, "(");
            LocatedId first = expect_identifier("identifier");
            expect(Tok::Comma, ",");
            LocatedId second = expect_identifier("identifier");
            expect(Tok::RParen, ")");
            draft.relations.push_back({label, std::move(first), std::move(second)});
        } while (check(Tok::Comma) && (advance(), true));
        end_of_statement();
    }

    IdSet identifier_list() {
        IdSet out;
        do {
            skip_newlines_after_separator();
            out.insert(expect_identifier("identifier").id);
        } while (check(Tok::Comma) && (advance(), true));
        return out;
    }

    void attribute(AttributeKind kind, Draft& draft) {
        Attribute a{kind, expect_identifier("element identifier"), {}, {}, 0, {}, std::nullopt, {}};
        expect(Tok::Colon, ":");
        switch (kind) {
            case AttributeKind::Protocols:
            case AttributeKind::Signals:
                a.ids = identifier_list();
                break;
            case AttributeKind::Range:
                do {
                    skip_newlines_after_separator();
                    if (check(Tok::LBracket)) {
                        const Token& open = advance();
                        const Value lo = expect_int();
                        expect(Tok::DotDot, "..");
                        const Value hi = expect_int();
                        expect(Tok::RBracket, "]");
                        if (lo > hi) throw SyntaxError{{open.span, "interval with lower bound <= upper bound",
                                                        "[" + std::to_string(lo) + ".." + std::to_string(hi) + "]"}};
                        a.range.add(lo, hi);
                    } else {
                        a.range.add(expect_int());
                    }
                } while (check(Tok::Comma) && (advance(), true));
                break;
            case AttributeKind::Value:
                a.value = expect_int();
                break;
            case AttributeKind::Orders:
                do {
                    skip_newlines_after_separator();
                    const LocatedId order = expect_identifier("order identifier");
                    expect(Tok::Arrow, "->");
                    const LocatedId signal = expect_identifier("signal identifier");
                    if (!a.orders.emplace(order.id, signal.id).second) {
                        throw SyntaxError{{order.span, "each order mapped once", "'" + order.id + "' again"}};
                    }
                } while (check(Tok::Comma) && (advance(), true));
                break;
            case AttributeKind::Behaviour:
                a.state = expect_identifier("initial state");
                while (check(Tok::Semicolon)) {
                    advance();
                    skip_newlines_after_separator();
                    const Token& open = expect(Tok::LParen, "(");
                    const LocatedId from = expect_identifier("state");
                    expect(Tok::Comma, ",");
                    const LocatedId signal = expect_identifier("signal");
                    expect(Tok::RParen, ")");
                    expect(Tok::Arrow, "->");
                    const LocatedId to = expect_identifier("state");
                    if (!a.delta.emplace(std::pair{from.id, signal.id}, to.id).second) {
                        throw SyntaxError{{open.span, "one transition per (state, signal)",
                                           "(" + from.id + ", " + signal.id + ") again"}};
                    }
                }
                break;
            case AttributeKind::State:
                a.state = expect_identifier("state");
                break;
        }
        end_of_statement();
        draft.attributes.push_back(std::move(a));
    }

    ValuePattern pattern() {
        if (check(Tok::Int)) return LiteralPattern{expect_int()};
        if (check(Tok::Word)) return WildcardPattern{expect_identifier("pattern variable").id};
        if (check(Tok::LBracket)) {
            const Token& open = advance();
            const Value lo = expect_int();
            expect(Tok::DotDot, "..");
            const Value hi = expect_int();
            expect(Tok::RBracket, "]");
            if (lo > hi) {
                throw SyntaxError{{open.span, "range with lower bound <= upper bound",
                                   "[" + std::to_string(lo) + ".." + std::to_string(hi) + "]"}};
            }
            return RangePattern{lo, hi};
        }
        fail(peek(), "integer, variable or [lo..hi]");
    }

    void rule_block(Draft& draft) {
        RuleBlock block{expect_identifier("service identifier"), {}};
        expect(Tok::Colon, ":");
        expect(Tok::LBrace, "{");
        while (true) {
            skip_newlines();
            if (check(Tok::RBrace)) {
                advance();
                break;
            }
            if (check(Tok::End)) fail(peek(), "}");
            const LocatedId kind = expect_identifier("rule value kind (e.g. Lightvalue)");
            expect(Tok::LParen, "(");
            ValuePattern p = pattern();
            expect(Tok::RParen, ")");
            expect(Tok::LongArrow, "-->");
            expect_keyword("Order");
            expect(Tok::LParen, "(");
            const LocatedId order = expect_identifier("order identifier");
            expect(Tok::RParen, ")");
            block.rules.emplace_back(kind.id, std::move(p), order.id);
            if (!check(Tok::RBrace)) expect(Tok::Newline, "end of line or '}'");
        }
        end_of_statement();
        draft.rule_blocks.push_back(std::move(block));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// Turns a syntactically valid draft into model values, checking names and attributes.
class Resolver {
public:
    explicit Resolver(std::vector<ParseError>& errors) : errors_{errors} {}

    std::optional<SystemModel> resolve(const Draft& draft) {
        if (!draft.name) return std::nullopt;

        for (const auto& d : draft.decls) declare(d);

        std::map<Identifier, std::map<AttributeKind, const Attribute*>> attrs;
        for (const auto& a : draft.attributes) {
            const auto* known = find(a.target);
            if (known == nullptr) continue;
            if (!attribute_applies(a.kind, known->kind)) {
                error(a.target.span, std::string{keyword(a.kind)} + " target of a matching kind",
                      "'" + a.target.id + "' (" + std::string{to_string(known->kind)} + ")");
                continue;
            }
            if (!attrs[a.target.id].emplace(a.kind, &a).second) {
                error(a.target.span, "one " + std::string{keyword(a.kind)} + " line per element",
                      "'" + a.target.id + "' again");
            }
        }

        auto get = [&attrs](const Identifier& id, AttributeKind k) -> const Attribute* {
            auto it = attrs.find(id);
            if (it == attrs.end()) return nullptr;
            auto jt = it->second.find(k);
            return jt == it->second.end() ? nullptr : jt->second;
        };
        auto protocols_for = [&](const Identifier& id) {
            const Attribute* p = get(id, AttributeKind::Protocols);
            return p ? p->ids : default_protocols();
        };

        // Protocol names share the global namespace with element names.
        for (const auto& a : draft.attributes) {
            if (a.kind != AttributeKind::Protocols) continue;
            for (const auto& p : a.ids) {
                if (const auto* other = find_quiet(p)) {
                    error(a.target.span, "protocol names distinct from element names",
                          "'" + p + "' (declared as " + std::string{to_string(other->kind)} + ")");
                }
            }
        }

        PhysicalModel phys;
        SoftwareModel soft;
        for (const auto& d : unique_decls_) {
            const Identifier& id = d.name.id;
            try {
                switch (d.kind) {
                    case ElementKind::Sensor: {
                        const Attribute* r = get(id, AttributeKind::Range);
                        const Attribute* v = get(id, AttributeKind::Value);
                        ValueRange range = r ? r->range : default_sensor_range();
                        Value value = v ? v->value : range.min();
                        if (!range.contains(value)) {
                            error(v->target.span, "value in range " + range.to_string(), std::to_string(value));
                            continue;
                        }
                        phys.sensors.emplace(id, Sensor{id, d.category, range, value, protocols_for(id)});
                        break;
                    }
                    case ElementKind::Actuator: {
                        const Attribute* o = get(id, AttributeKind::Orders);
                        const Attribute* s = get(id, AttributeKind::Signals);
                        auto orders = o ? o->orders : default_signal_of_order();
                        if (s) {
                            bool ok = true;
                            for (const auto& [ord, sig] : orders) {
                                if (!s->ids.contains(sig)) {
                                    error(s->target.span, "SIGNALS covering every ORDERS signal",
                                          "'" + sig + "' missing");
                                    ok = false;
                                }
                            }
                            if (!ok) continue;
                            phys.actuators.emplace(id, Actuator{id, d.category, orders, s->ids, protocols_for(id)});
                        } else {
                            phys.actuators.emplace(id, Actuator{id, d.category, orders, protocols_for(id)});
                        }
                        break;
                    }
                    case ElementKind::Device: {
                        const Attribute* b = get(id, AttributeKind::Behaviour);
                        const Attribute* st = get(id, AttributeKind::State);
                        DeviceBehaviour behaviour =
                            b ? DeviceBehaviour::from_transitions(b->state->id, b->delta) : default_behaviour();
                        if (st && !behaviour.states().contains(st->state->id)) {
                            error(st->state->span, "state of device " + id, "'" + st->state->id + "'");
                            continue;
                        }
                        phys.devices.emplace(id, Device{id, d.category, behaviour,
                                                        st ? st->state->id : behaviour.initial()});
                        break;
                    }
                    case ElementKind::Controller:
                        soft.controllers.emplace(id, Controller{id, protocols_for(id)});
                        break;
                    case ElementKind::Service:
                        soft.services.emplace(id, Service{id, {}});
                        break;
                }
            } catch (const std::invalid_argument& e) {
                error(d.name.span, "valid " + std::string{to_string(d.kind)} + " attributes", e.what());
            }
        }

        for (const auto& block : draft.rule_blocks) {
            const auto* known = find(block.service);
            if (known == nullptr) continue;
            if (known->kind != ElementKind::Service) {
                error(block.service.span, "service", "'" + block.service.id + "' (" +
                                                         std::string{to_string(known->kind)} + ")");
                continue;
            }
            auto it = soft.services.find(block.service.id);
            if (it == soft.services.end()) continue;
            if (!rule_block_seen_.insert(block.service.id).second) {
                error(block.service.span, "one rule block per service", "'" + block.service.id + "' again");
                continue;
            }
            it->second.rules = block.rules;
        }

        Relation in_d, out_o, ctrl_depend;
        for (const auto& e : draft.relations) {
            switch (e.label) {
                case RelationLabel::LegacyBinding: {
                    const auto* a = find(e.first);
                    const auto* b = find(e.second);
                    if (a == nullptr || b == nullptr) break;
                    if (a->kind == ElementKind::Device && b->kind == ElementKind::Sensor) {
                        phys.binding_ds.insert(e.first.id, e.second.id);
                    } else if (a->kind == ElementKind::Actuator && b->kind == ElementKind::Device) {
                        phys.binding_ad.insert(e.first.id, e.second.id);
                    } else {
                        error(e.first.span, "(device, sensor) or (actuator, device) pair",
                              "(" + std::string{to_string(a->kind)} + ", " + std::string{to_string(b->kind)} + ")");
                    }
                    break;
                }
                case RelationLabel::DeviceSensor:
                    typed(e, ElementKind::Device, ElementKind::Sensor, phys.binding_ds);
                    break;
                case RelationLabel::ActuatorDevice:
                    typed(e, ElementKind::Actuator, ElementKind::Device, phys.binding_ad);
                    break;
                case RelationLabel::SensorController:
                    typed(e, ElementKind::Sensor, ElementKind::Controller, in_d);
                    break;
                case RelationLabel::ControllerActuator:
                    typed(e, ElementKind::Controller, ElementKind::Actuator, out_o);
                    break;
                case RelationLabel::SensorDevice:
                    typed(e, ElementKind::Sensor, ElementKind::Device, ctrl_depend);
                    break;
                case RelationLabel::ControllerService:
                    typed(e, ElementKind::Controller, ElementKind::Service, soft.serv_depend);
                    break;
            }
        }

        if (!errors_.empty()) return std::nullopt;
        try {
            return build_system(draft.name->id, std::move(phys), std::move(soft), std::move(in_d), std::move(out_o),
                               std::move(ctrl_depend));
        } catch (const ModelError& e) {
            for (const auto& d : e.diagnostics()) error(draft.name->span, "referentially intact model", d.message);
            return std::nullopt;
        }
    }

private:
    static bool attribute_applies(AttributeKind a, ElementKind e) {
        switch (a) {
            case AttributeKind::Protocols:
                return e == ElementKind::Sensor || e == ElementKind::Actuator || e == ElementKind::Controller;
            case AttributeKind::Range:
            case AttributeKind::Value: return e == ElementKind::Sensor;
            case AttributeKind::Orders:
            case AttributeKind::Signals: return e == ElementKind::Actuator;
            case AttributeKind::Behaviour:
            case AttributeKind::State: return e == ElementKind::Device;
        }
        return false;
    }

    void error(SourceSpan span, std::string expected, std::string found) {
        errors_.push_back({span, std::move(expected), std::move(found)});
    }

    void declare(const Decl& d) {
        auto [it, fresh] = names_.emplace(d.name.id, d);
        if (!fresh) {
            const auto& prev = it->second;
            error(d.name.span, "identifier not declared before",
                  "'" + d.name.id + "' (already declared as " + std::string{to_string(prev.kind)} + " at " +
                      std::to_string(prev.name.span.line) + ":" + std::to_string(prev.name.span.column) + ")");
            return;
        }
        unique_decls_.push_back(d);
    }

    const Decl* find_quiet(const Identifier& id) const {
        auto it = names_.find(id);
        return it == names_.end() ? nullptr : &it->second;
    }

    const Decl* find(const LocatedId& ref) {
        const Decl* d = find_quiet(ref.id);
        if (d == nullptr) error(ref.span, "declared identifier", "'" + ref.id + "'");
        return d;
    }

    void typed(const RelationEntry& e, ElementKind left, ElementKind right, Relation& into) {
        bool ok = true;
        for (auto [ref, want] : {std::pair{&e.first, left}, std::pair{&e.second, right}}) {
            const Decl* d = find_quiet(ref->id);
            if (d == nullptr) {
                error(ref->span, "declared " + std::string{to_string(want)}, "'" + ref->id + "'");
                ok = false;
            } else if (d->kind != want) {
                error(ref->span, std::string{to_string(want)},
                      "'" + ref->id + "' (" + std::string{to_string(d->kind)} + ")");
                ok = false;
            }
        }
        if (ok) into.insert(e.first.id, e.second.id);
    }

    std::vector<ParseError>& errors_;
    std::map<Identifier, Decl> names_;
    std::vector<Decl> unique_decls_;
    IdSet rule_block_seen_;
};

inline bool span_less(const ParseError& a, const ParseError& b) {
    return std::tie(a.span.line, a.span.column) < std::tie(b.span.line, b.span.column);
}

} // namespace detail

// Parses a `.iot` program. Throws ParseFailure carrying every syntax, name and attribute error,
// ordered by position.
inline SystemModel parse_system(std::string_view text) {
    std::vector<ParseError> errors;
    detail::Parser parser{tokenize(text)};
    detail::Draft draft = parser.parse(errors);
    std::optional<SystemModel> model;
    if (errors.empty()) {
        model = detail::Resolver{errors}.resolve(draft);
    }
    if (!errors.empty() || !model) {
        std::stable_sort(errors.begin(), errors.end(), detail::span_less);
        throw ParseFailure{std::move(errors)};
    }
    return std::move(*model);
}

// ---------------------------------------------------------------------------
// Formatter
// ---------------------------------------------------------------------------

namespace detail {

inline std::string pattern_text(const ValuePattern& p) {
    return std::visit(
        [](const auto& q) -> std::string {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, LiteralPattern>) {
                return std::to_string(q.value);
            } else if constexpr (std::is_same_v<T, RangePattern>) {
                return "[" + std::to_string(q.lo) + ".." + std::to_string(q.hi) + "]";
            } else {
                return q.variable.str();
            }
        },
        p);
}

inline void require_category(const Identifier& cat, ElementKind want, const Identifier& id) {
    if (!is_category_token(cat.str()) || kind_of_category(cat.str()) != want) {
        throw std::invalid_argument(std::string{to_string(want)} + " " + id + ": category " + cat +
                                    " cannot be written in the DSL");
    }
}

inline std::string join_ids(const IdSet& ids) {
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += ", ";
        out += id.str();
    }
    return out;
}

inline void emit_relation(std::ostringstream& os, std::string_view label, const Relation& r) {
    if (r.empty()) return;
    os << label << " : ";
    bool first = true;
    for (const auto& [x, y] : r) {
        if (!first) os << ", ";
        first = false;
        os << "(" << x << ", " << y << ")";
    }
    os << "\n";
}

} // namespace detail

// Canonical text: declarations grouped by category, bindings, interconnection relations, rule
// blocks, then non-default attributes. Everything except rule order is sorted. Throws
// std::invalid_argument for categories that do not follow the DSL's naming convention.
inline std::string format_system(const SystemModel& sys) {
    std::ostringstream os;
    os << "IOTSystem " << sys.name() << "\n";

    std::map<Identifier, IdSet> sensor_cats, actuator_cats, device_cats;
    for (const auto& [id, s] : sys.sensors()) {
        detail::require_category(s.category(), ElementKind::Sensor, id);
        sensor_cats[s.category()].insert(id);
    }
    for (const auto& [id, a] : sys.actuators()) {
        detail::require_category(a.category(), ElementKind::Actuator, id);
        actuator_cats[a.category()].insert(id);
    }
    for (const auto& [id, d] : sys.devices()) {
        detail::require_category(d.category(), ElementKind::Device, id);
        device_cats[d.category()].insert(id);
    }
    IdSet controllers, services;
    for (const auto& kv : sys.controllers()) controllers.insert(kv.first);
    for (const auto& kv : sys.services()) services.insert(kv.first);

    std::ostringstream decls;
    for (const auto* group : {&sensor_cats, &actuator_cats, &device_cats}) {
        for (const auto& [cat, ids] : *group) decls << cat << " : " << detail::join_ids(ids) << "\n";
    }
    if (!controllers.empty()) decls << "CONTROLLER : " << detail::join_ids(controllers) << "\n";
    if (!services.empty()) decls << "SERVICE : " << detail::join_ids(services) << "\n";

    std::ostringstream bindings;
    detail::emit_relation(bindings, "DeviceSensor", sys.binding_ds());
    detail::emit_relation(bindings, "ActuatorDevice", sys.binding_ad());

    std::ostringstream links;
    detail::emit_relation(links, "SCBinding", sys.in_d());
    detail::emit_relation(links, "CABinding", sys.out_o());
    detail::emit_relation(links, "SDDependency", sys.ctrl_depend());
    detail::emit_relation(links, "Control-Service", sys.serv_depend());

    std::ostringstream rules;
    for (const auto& [id, srv] : sys.services()) {
        if (srv.rules.empty()) continue;
        rules << id << " : {\n";
        for (const auto& r : srv.rules) {
            rules << "  " << r.kind() << "(" << detail::pattern_text(r.pattern()) << ") --> Order(" << r.order()
                  << ")\n";
        }
        rules << "}\n";
    }

    std::ostringstream attrs;
    const IdSet default_protos = default_protocols();
    auto protocols_line = [&](const Identifier& id, const IdSet& ps) {
        if (ps != default_protos) attrs << "PROTOCOLS " << id << " : " << detail::join_ids(ps) << "\n";
    };
    // PROTOCOLS lines for every element kind that carries protocols, sorted by element id.
    std::map<Identifier, const IdSet*> protocol_owners;
    for (const auto& [id, s] : sys.sensors()) protocol_owners[id] = &s.protocols();
    for (const auto& [id, a] : sys.actuators()) protocol_owners[id] = &a.protocols();
    for (const auto& [id, c] : sys.controllers()) protocol_owners[id] = &c.protocols;
    for (const auto& [id, ps] : protocol_owners) protocols_line(id, *ps);

    const DeviceBehaviour default_beh = default_behaviour();
    for (const auto& [id, d] : sys.devices()) {
        const auto& b = d.behaviour();
        if (b == default_beh) continue;
        attrs << "BEHAVIOUR " << id << " : " << b.initial();
        for (const auto& [key, target] : b.delta()) {
            attrs << " ; (" << key.first << ", " << key.second << ") -> " << target;
        }
        attrs << "\n";
    }
    for (const auto& [id, s] : sys.sensors()) {
        if (s.range() != default_sensor_range()) attrs << "RANGE " << id << " : " << s.range().to_string() << "\n";
        if (s.value() != s.range().min()) attrs << "VALUE " << id << " : " << s.value() << "\n";
    }
    const auto default_orders = default_signal_of_order();
    for (const auto& [id, a] : sys.actuators()) {
        if (a.signal_of_order() != default_orders) {
            attrs << "ORDERS " << id << " : ";
            bool first = true;
            for (const auto& [ord, sig] : a.signal_of_order()) {
                if (!first) attrs << ", ";
                first = false;
                attrs << ord << " -> " << sig;
            }
            attrs << "\n";
        }
        IdSet used;
        for (const auto& kv : a.signal_of_order()) used.insert(kv.second);
        if (a.output_signals() != used) attrs << "SIGNALS " << id << " : " << detail::join_ids(a.output_signals()) << "\n";
    }
    for (const auto& [id, d] : sys.devices()) {
        if (d.current_state() != d.behaviour().initial()) attrs << "STATE " << id << " : " << d.current_state() << "\n";
    }

    for (const auto* section : {&decls, &bindings, &links, &rules, &attrs}) {
        const std::string body = section->str();
        if (!body.empty()) os << "\n" << body;
    }
    return os.str();
}

} // namespace iotarch::dsl
