// Linear inequalities over the belief simplex and small geometric helpers.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "beliefstock/model.hpp"

namespace beliefstock {

/// Membership slack: strict constraints require a clear margin so boundary
/// beliefs resolve deterministically to one region.
inline constexpr double kMembershipSlack = 1e-12;

/// a . x < b (strict) or a . x <= b.
struct HalfSpace {
    std::vector<double> a;
    double b = 0.0;
    bool strict = false;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline bool satisfies(const HalfSpace& hs, const std::vector<double>& x) {
    const double lhs = dot(hs.a, x);
    return hs.strict ? lhs < hs.b - kMembershipSlack : lhs <= hs.b + kMembershipSlack;
}

inline bool contains(const std::vector<HalfSpace>& cell, const std::vector<double>& x) {
    for (const auto& hs : cell)
        if (!satisfies(hs, x)) return false;
    return true;
}

/// Vertices of {x in simplex : cell weakly satisfied} for N=3, ordered
/// counterclockwise in the (x1, x2) chart. Empty result for empty cells.
std::vector<std::array<double, 3>> simplex_polygon(const std::vector<HalfSpace>& cell);

} // namespace beliefstock
