#pragma once

#include "identifier.hpp"

#include <initializer_list>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace iotarch {

using IdSet = std::set<Identifier>;
using IdPair = std::pair<Identifier, Identifier>;

// Finite binary relation over identifiers with set semantics; duplicate pairs collapse.
// Iteration is in lexicographic (first, second) order.
class Relation {
public:
    using const_iterator = std::set<IdPair>::const_iterator;

    Relation() = default;
    Relation(std::initializer_list<IdPair> pairs) : pairs_{pairs} {}
    template <typename It>
    Relation(It first, It last) : pairs_(first, last) {}

    bool insert(Identifier x, Identifier y) { return pairs_.emplace(std::move(x), std::move(y)).second; }
    bool insert(const IdPair& p) { return pairs_.insert(p).second; }
    bool erase(const Identifier& x, const Identifier& y) { return pairs_.erase({x, y}) > 0; }

    [[nodiscard]] bool contains(const Identifier& x, const Identifier& y) const { return pairs_.contains({x, y}); }
    [[nodiscard]] bool empty() const noexcept { return pairs_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return pairs_.size(); }

    [[nodiscard]] const_iterator begin() const noexcept { return pairs_.begin(); }
    [[nodiscard]] const_iterator end() const noexcept { return pairs_.end(); }

    // {y | (x,y) in r}
    [[nodiscard]] IdSet image(const Identifier& x) const {
        IdSet out;
        for (auto it = pairs_.lower_bound({x, Identifier{}}); it != pairs_.end() && it->first == x; ++it) {
            out.insert(it->second);
        }
        return out;
    }

    // {x | (x,y) in r}
    [[nodiscard]] IdSet preimage(const Identifier& y) const {
        IdSet out;
        for (const auto& [a, b] : pairs_) {
            if (b == y) out.insert(a);
        }
        return out;
    }

    [[nodiscard]] IdSet domain() const {
        IdSet out;
        for (const auto& p : pairs_) out.insert(out.end(), p.first);
        return out;
    }

    [[nodiscard]] IdSet range() const {
        IdSet out;
        for (const auto& p : pairs_) out.insert(p.second);
        return out;
    }

    friend bool operator==(const Relation&, const Relation&) = default;

private:
    std::set<IdPair> pairs_;
};

// {(x,z) | exists y. (x,y) in r1 and (y,z) in r2}
inline Relation compose(const Relation& r1, const Relation& r2) {
    std::map<Identifier, std::vector<Identifier>> by_first;
    for (const auto& [y, z] : r2) by_first[y].push_back(z);
    Relation out;
    for (const auto& [x, y] : r1) {
        auto it = by_first.find(y);
        if (it == by_first.end()) continue;
        for (const auto& z : it->second) out.insert(x, z);
    }
    return out;
}

inline Relation inverse(const Relation& r) {
    Relation out;
    for (const auto& [x, y] : r) out.insert(y, x);
    return out;
}

inline IdSet image(const Relation& r, const Identifier& x) { return r.image(x); }

// Pairs of a that are not in b.
inline Relation difference(const Relation& a, const Relation& b) {
    Relation out;
    for (const auto& p : a) {
        if (!b.contains(p.first, p.second)) out.insert(p);
    }
    return out;
}

} // namespace iotarch
