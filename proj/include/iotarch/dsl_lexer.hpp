#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace iotarch::dsl {

// 1-based line and column (in bytes), length in bytes.
struct SourceSpan {
    int line = 1;
    int column = 1;
    int length = 1;

    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class Tok {
    Word,      // identifier, keyword, category; also the compound `Control-Service`
    Int,       // optionally negative decimal integer
    Colon,
    Comma,
    Semicolon,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    DotDot,
    LongArrow, // -->
    Arrow,     // ->
    Newline,
    End,
    Invalid,
};

struct Token {
    Tok kind;
    std::string text;
    SourceSpan span;
};

inline std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::Newline: return "end of line";
        case Tok::End: return "end of input";
        default: return "'" + t.text + "'";
    }
}

// Splits DSL text into tokens. `//` comments run to end of line; CR is treated as blank.
// Bytes that start no token become Invalid tokens (a whole UTF-8 sequence at a time) for the
// parser to report.
inline std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    SourceSpan last{1, 1, 1};

    auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
    auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    auto at = [&](std::size_t k) -> char { return k < text.size() ? text[k] : '\0'; };

    auto push = [&](Tok kind, std::size_t len) {
        SourceSpan span{line, col, static_cast<int>(len)};
        out.push_back({kind, std::string{text.substr(i, len)}, span});
        last = {line, col + static_cast<int>(len) - 1, 1};
        i += len;
        col += static_cast<int>(len);
    };

    while (i < text.size()) {
        const char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            last = {line, col, 1};
            ++i;
            ++col;
            continue;
        }
        if (c == '\n') {
            push(Tok::Newline, 1);
            ++line;
            col = 1;
            continue;
        }
        if (c == '/' && at(i + 1) == '/') {
            while (i < text.size() && text[i] != '\n') {
                last = {line, col, 1};
                ++i;
                ++col;
            }
            continue;
        }
        if (is_alpha(c)) {
            std::size_t j = i;
            while (j < text.size() && (is_alpha(text[j]) || is_digit(text[j]) || text[j] == '_')) ++j;
            if (text.substr(i, j - i) == "Control" && text.substr(j, 8) == "-Service") j += 8;
            push(Tok::Word, j - i);
            continue;
        }
        if (is_digit(c) || (c == '-' && is_digit(at(i + 1)))) {
            std::size_t j = i + 1;
            while (j < text.size() && is_digit(text[j])) ++j;
            push(Tok::Int, j - i);
            continue;
        }
        if (c == '-' && at(i + 1) == '-' && at(i + 2) == '>') {
            push(Tok::LongArrow, 3);
            continue;
        }
        if (c == '-' && at(i + 1) == '>') {
            push(Tok::Arrow, 2);
            continue;
        }
        if (c == '.' && at(i + 1) == '.') {
            push(Tok::DotDot, 2);
            continue;
        }
        switch (c) {
            case ':': push(Tok::Colon, 1); continue;
            case ',': push(Tok::Comma, 1); continue;
            case ';': push(Tok::Semicolon, 1); continue;
            case '(': push(Tok::LParen, 1); continue;
            case ')': push(Tok::RParen, 1); continue;
            case '{': push(Tok::LBrace, 1); continue;
            case '}': push(Tok::RBrace, 1); continue;
            case '[': push(Tok::LBracket, 1); continue;
            case ']': push(Tok::RBracket, 1); continue;
            default: break;
        }
        std::size_t len = 1;
        const auto byte = static_cast<unsigned char>(c);
        if (byte >= 0xC0) {
            while (i + len < text.size() && (static_cast<unsigned char>(text[i + len]) & 0xC0) == 0x80) ++len;
        }
        push(Tok::Invalid, len);
    }
    out.push_back({Tok::End, "", last});
    return out;
}

} // namespace iotarch::dsl
