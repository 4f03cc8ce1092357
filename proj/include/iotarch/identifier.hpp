#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace iotarch {

// Name of a model element, order, signal, state, protocol or category.
// Letters, digits and underscore, starting with a letter.
class Identifier {
public:
    Identifier() = default;

    Identifier(std::string name) : name_{std::move(name)} {
        if (!is_valid(name_)) {
            throw std::invalid_argument("invalid identifier '" + name_ + "'");
        }
    }
    Identifier(const char* name) : Identifier(std::string{name}) {}
    Identifier(std::string_view name) : Identifier(std::string{name}) {}

    static bool is_valid(std::string_view s) noexcept {
        if (s.empty() || !is_letter(s.front())) return false;
        for (char c : s) {
            if (!is_letter(c) && !is_digit(c) && c != '_') return false;
        }
        return true;
    }

    [[nodiscard]] const std::string& str() const noexcept { return name_; }
    [[nodiscard]] bool empty() const noexcept { return name_.empty(); }

    friend auto operator<=>(const Identifier&, const Identifier&) = default;
    friend bool operator==(const Identifier&, const Identifier&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Identifier& id) { return os << id.name_; }

private:
    static constexpr bool is_letter(char c) noexcept {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    }
    static constexpr bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

    std::string name_;
};

inline std::string operator+(const std::string& lhs, const Identifier& rhs) { return lhs + rhs.str(); }
inline std::string operator+(const Identifier& lhs, const std::string& rhs) { return lhs.str() + rhs; }
inline std::string operator+(const char* lhs, const Identifier& rhs) { return lhs + rhs.str(); }
inline std::string operator+(const Identifier& lhs, const char* rhs) { return lhs.str() + rhs; }

} // namespace iotarch

template <>
struct std::hash<iotarch::Identifier> {
    std::size_t operator()(const iotarch::Identifier& id) const noexcept {
        return std::hash<std::string>{}(id.str());
    }
};
