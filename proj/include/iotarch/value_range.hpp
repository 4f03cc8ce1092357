#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace iotarch {

using Value = std::int64_t;

struct Interval {
    Value lo;
    Value hi;

    friend bool operator==(const Interval&, const Interval&) = default;
};

// Finite set of integers stored as sorted, disjoint, non-adjacent closed intervals.
// The normal form makes == coincide with set equality.
class ValueRange {
public:
    ValueRange() = default;
    ValueRange(std::initializer_list<Interval> parts) {
        for (const auto& p : parts) add(p.lo, p.hi);
    }

    static ValueRange closed(Value lo, Value hi) {
        ValueRange r;
        r.add(lo, hi);
        return r;
    }

    void add(Value lo, Value hi) {
        if (lo > hi) throw std::invalid_argument("interval lower bound exceeds upper bound");
        parts_.push_back({lo, hi});
        normalize();
    }
    void add(Value v) { add(v, v); }

    [[nodiscard]] bool contains(Value v) const noexcept {
        auto it = std::upper_bound(parts_.begin(), parts_.end(), v,
                                   [](Value x, const Interval& iv) { return x < iv.lo; });
        if (it == parts_.begin()) return false;
        return v <= std::prev(it)->hi;
    }

    [[nodiscard]] bool empty() const noexcept { return parts_.empty(); }
    [[nodiscard]] Value min() const { return parts_.front().lo; }
    [[nodiscard]] Value max() const { return parts_.back().hi; }
    [[nodiscard]] const std::vector<Interval>& intervals() const noexcept { return parts_; }

    // "[0..10], 12" style, the DSL's range syntax.
    [[nodiscard]] std::string to_string() const {
        std::string out;
        for (const auto& iv : parts_) {
            if (!out.empty()) out += ", ";
            if (iv.lo == iv.hi) {
                out += std::to_string(iv.lo);
            } else {
                out += "[" + std::to_string(iv.lo) + ".." + std::to_string(iv.hi) + "]";
            }
        }
        return out;
    }

    friend bool operator==(const ValueRange&, const ValueRange&) = default;

private:
    void normalize() {
        std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        std::vector<Interval> merged;
        for (const auto& iv : parts_) {
            // second test only runs when hi < lo <= INT64_MAX, so hi + 1 cannot overflow
            if (!merged.empty() && (iv.lo <= merged.back().hi || iv.lo == merged.back().hi + 1)) {
                merged.back().hi = std::max(merged.back().hi, iv.hi);
            } else {
                merged.push_back(iv);
            }
        }
        parts_ = std::move(merged);
    }

    std::vector<Interval> parts_;
};

} // namespace iotarch
